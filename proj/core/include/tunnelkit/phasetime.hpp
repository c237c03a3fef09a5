#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tunnelkit/analytic.hpp"
#include "tunnelkit/domain.hpp"

namespace tunnelkit {

enum class DelayMethod { phase_time, universal_T, universal_hE, tau_A, time_domain };

std::string to_string(DelayMethod method);
DelayMethod delay_method_from_string(const std::string& name);

// A traversal time in seconds, tagged with the method that produced it.
struct DelayResult {
    double value = 0.0;  // s
    DelayMethod method = DelayMethod::phase_time;
    nlohmann::json metadata = nlohmann::json::object();
};

struct PhaseSeries {
    std::vector<double> omegas;  // rad/s, strictly ascending
    std::vector<double> phases;  // rad, unwrapped
    bool ambiguous_jump = false;  // some neighbor difference was exactly +-pi
};

// arg t in (-pi, pi]. Throws DomainError for t == 0.
double principal_phase(const ComplexAmplitude& t);

// Adds multiples of 2 pi so neighbor differences fall in (-pi, pi].
PhaseSeries unwrap(std::span<const double> omegas, std::span<const double> principal_phases);

struct PhaseTimeOptions {
    double delta = 1e-5;  // relative frequency step
    // Halve delta until successive estimates agree to this relative tolerance.
    bool adaptive = true;
    double tolerance = 1e-6;
    // Subtract the phase of an equivalent free path in the ambient medium.
    bool relative_to_free_flight = false;
};

// Phase accumulated from the entrance plane to the exit plane of the barrier,
// e^{i(kx - wt)} convention (grows with omega for free propagation).
double transit_phase(const BarrierModel& model, double omega);

// Phase of the same length of ambient medium without the barrier.
double free_path_phase(const BarrierModel& model, double omega);

// Group delay d(phi)/d(omega) by central differences of the unwrapped transit phase.
DelayResult phase_time(const BarrierModel& model, double omega0, const PhaseTimeOptions& options = {});

// Length parameter of each model: width, stack thickness, guide length, gap.
double model_length(const BarrierModel& model);
// Same model with its length replaced; stacks are scaled uniformly.
BarrierModel with_length(const BarrierModel& model, double length);
// Real decay constant inside the barrier, or nullopt when the field propagates
// (or the model has no single decay constant).
std::optional<double> decay_constant(const BarrierModel& model, double omega);

struct HartmanPoint {
    double length = 0.0;
    std::optional<DelayResult> delay;
    std::optional<double> kappa_length;
    std::string error;
};

struct HartmanCurve {
    std::vector<HartmanPoint> points;
    // max |tau_i - tau_last| / tau_last over the opaque tail (kappa L > 5).
    double saturation_diagnostic = 0.0;
    std::size_t tail_points = 0;
    std::size_t valid_points = 0;
};

inline constexpr double kOpaqueTailKappaLength = 5.0;

HartmanCurve hartman_curve(const BarrierModel& family, std::span<const double> lengths, double omega0,
                           const PhaseTimeOptions& options = {}, std::size_t threads = 0);

}  // namespace tunnelkit
