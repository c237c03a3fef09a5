#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tunnelkit {

// Square potential barrier for a massive particle.
struct RectangularBarrier {
    double v0 = 0.0;     // barrier height, eV (0 allowed: free-flight reference)
    double width = 0.0;  // m
    double mass = 0.0;   // kg

    void validate() const;
};

struct Layer {
    double refractive_index = 1.0;
    double thickness = 0.0;  // m
};

// Lossless layer sequence at normal incidence, same ambient medium on both sides.
struct DielectricStack {
    std::vector<Layer> layers;
    double ambient_index = 1.0;

    void validate() const;
    double total_thickness() const;
};

// Waveguide section operated below its cutoff frequency.
struct EvanescentGuide {
    double cutoff_frequency = 0.0;  // Hz
    double length = 0.0;            // m

    void validate() const;
};

enum class Polarization { s, p };

// Two prisms separated by an air gap (frustrated total internal reflection).
struct FtirGap {
    double prism_index = 1.5;
    double angle = 0.0;  // incidence angle inside the prism, rad
    double gap = 0.0;    // m
    Polarization polarization = Polarization::s;

    void validate() const;
    // n sin(theta) > 1: the gap field is evanescent.
    bool beyond_critical_angle() const;
};

// Gaussian wave packet psi(x) ~ exp(-(x-x0)^2 / (4 sigma^2)) exp(i k0 x).
struct GaussianPacket {
    double center_wavenumber = 0.0;  // 1/m
    double spatial_sigma = 0.0;      // m
    double center_position = 0.0;    // m

    void validate() const;
    bool quasi_monochromatic() const { return center_wavenumber * spatial_sigma >= kMinimumK0Sigma; }

    static constexpr double kMinimumK0Sigma = 5.0;
};

// Warning text when a packet is too broadband for traversal-time measurements.
std::optional<std::string> quasi_monochromatic_warning(const GaussianPacket& packet);

using BarrierModel = std::variant<RectangularBarrier, DielectricStack, EvanescentGuide, FtirGap>;

void validate(const BarrierModel& model);
std::string model_kind(const BarrierModel& model);

// k = sqrt(2 m E) / hbar, energy in eV.
double energy_to_wavenumber(double energy_ev, double mass);

// nu = E / h and its inverse.
double energy_to_frequency(double energy_ev);
double frequency_to_energy(double frequency_hz);

double ev_to_joule(double energy_ev);
double joule_to_ev(double energy_j);

// omega = E / hbar for a kinetic energy in eV, and inverse.
double energy_to_angular_frequency(double energy_ev);
double angular_frequency_to_energy(double omega);

}  // namespace tunnelkit
