#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/domain.hpp"
#include "tunnelkit/phasetime.hpp"

namespace tunnelkit {

using Complex = std::complex<double>;

// Uniform grid with hard walls just outside both end points.
struct Grid1D {
    double x_min = 0.0;  // m
    double x_max = 1.0;  // m
    std::size_t n_points = 16;

    void validate() const;
    double dx() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
    // Largest index whose coordinate is <= x (clamped to the grid).
    std::size_t floor_index(double x) const;

    static constexpr std::size_t kMinimumPoints = 16;
};

struct WaveFunction {
    Grid1D grid;
    std::vector<Complex> values;

    double norm() const;  // sum |psi|^2 dx
    double centroid() const;
    double variance() const;
    // <k> from a central-difference derivative.
    double mean_wavenumber() const;
    // Probability and centroid restricted to x > x_from.
    double probability_beyond(double x_from) const;
    double centroid_beyond(double x_from) const;
    std::size_t first_index_beyond(double x_from) const;
    // Phase-increment wavenumber arg(sum conj(psi_j) psi_{j+1}) / dx over x > x_from.
    double phase_wavenumber_beyond(double x_from) const;
    // |psi|^2 at x by linear interpolation between neighbours.
    double density_at(double x) const;
    // Location of max |psi|^2, refined by a parabola through the neighbours.
    double peak_position() const;
    // Probability current (hbar/m) Im(psi* dpsi/dx) at x, 1/s.
    double flux_at(double x, double mass) const;
};

// Real potential on a grid, in eV.
struct PotentialField {
    Grid1D grid;
    std::vector<double> values;

    static PotentialField zero(const Grid1D& grid);
    // v0 on grid points with x_start <= x < x_start + width, zero elsewhere.
    static PotentialField rectangular(const Grid1D& grid, double x_start, const RectangularBarrier& barrier);
    double max_abs() const;
};

struct ArrivalRecord {
    double detector_x = 0.0;                 // m
    double time_of_peak = 0.0;               // s
    double time_of_centroid_crossing = 0.0;  // s
    double transmitted_probability = 0.0;
};

WaveFunction init_gaussian(const Grid1D& grid, const GaussianPacket& packet);

// Crank-Nicolson propagator (I + iH dt/2hbar) psi' = (I - iH dt/2hbar) psi with a
// three-point Laplacian. The tridiagonal factorization is computed once.
class CrankNicolson {
public:
    CrankNicolson(const PotentialField& potential, double mass, double dt);

    void step(std::vector<Complex>& psi) const;
    void step(WaveFunction& psi) const { step(psi.values); }

    // <psi|H|psi> in eV for a normalized state.
    double energy(const WaveFunction& psi) const;

    double dt() const { return dt_; }
    double mass() const { return mass_; }

private:
    Grid1D grid_;
    double mass_;
    double dt_;
    double kinetic_;                // hbar^2 / (2 m dx^2), J
    std::vector<double> potential_;  // J
    Complex upper_;                 // off-diagonal of the implicit matrix
    Complex explicit_off_;          // off-diagonal of the explicit matrix
    std::vector<Complex> explicit_diag_;
    std::vector<Complex> c_prime_;
    std::vector<Complex> inv_pivot_;
    mutable std::vector<Complex> scratch_;
};

WaveFunction step(const WaveFunction& psi, const PotentialField& potential, double dt,
                  double mass = constants::electron_mass);

struct Observation {
    std::size_t step = 0;
    double t = 0.0;
    double norm = 0.0;
    double centroid = 0.0;
    double peak_x = 0.0;
    double detector_flux = 0.0;
};

struct EvolveConfig {
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::size_t sample_every = 1;
    double detector_x = 0.0;
    double mass = constants::electron_mass;
};

struct Trajectory {
    std::vector<Observation> rows;
    WaveFunction final_state;
};

// Called after every step (and once for the initial state, step 0).
using StepObserver = std::function<void(std::size_t step, double t, const WaveFunction& psi)>;

Trajectory evolve(WaveFunction psi0, const PotentialField& potential, const EvolveConfig& config,
                  const StepObserver& observer = {});

void write_trajectory_csv(std::ostream& os, std::span<const Observation> rows);

struct SimulationSettings {
    double points_per_length = 32.0;  // grid points per 1/k0 and per 1/kappa
    std::optional<double> dx;         // explicit spacing, m
    double phase_per_step = 0.02;     // E dt / hbar at the packet energy
    std::size_t sample_every = 10;
};

// Barrier entrance at x = 0; the packet starts at packet.center_position < 0 and
// the detector sits detector_offset past the barrier exit.
struct TraversalScenario {
    RectangularBarrier barrier;
    GaussianPacket packet;
    double detector_offset = 0.0;  // m
    SimulationSettings settings;
};

struct TraversalMeasurement {
    DelayResult delay;            // method time_domain
    ArrivalRecord barrier_arrival;
    ArrivalRecord free_arrival;        // free packet at the incident k0
    ArrivalRecord reference_arrival;   // free packet at the transmitted mean wavenumber
    double transmitted_wavenumber = 0.0;
    double norm_drift = 0.0;
    Grid1D grid;
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::vector<Observation> trajectory;  // barrier run
};

// Simulation plan derived from a scenario: grid, step and run length.
struct SimulationPlan {
    Grid1D grid;
    double dt = 0.0;
    std::size_t n_steps = 0;
    double detector_x = 0.0;
    double v_max = 0.0;  // fastest group velocity accounted for, m/s
};

SimulationPlan plan_simulation(const TraversalScenario& scenario);
// True if nothing moving at plan.v_max can be reflected by a wall back to the
// barrier or the detector within the run.
bool walls_safe(const SimulationPlan& plan, double barrier_width);

TraversalMeasurement measure_traversal(const TraversalScenario& scenario, std::size_t threads = 0);

}  // namespace tunnelkit
