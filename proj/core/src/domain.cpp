#include "tunnelkit/domain.hpp"

#include <cmath>
#include <sstream>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

void require(bool condition, const char* message) {
    if (!condition) {
        throw DomainError(message);
    }
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void RectangularBarrier::validate() const {
    require(finite(v0) && v0 >= 0.0, "rectangular barrier: v0 must be >= 0 eV");
    require(finite(width) && width >= 0.0, "rectangular barrier: width must be >= 0");
    require(finite(mass) && mass > 0.0, "rectangular barrier: mass must be > 0");
}

void DielectricStack::validate() const {
    require(finite(ambient_index) && ambient_index >= 1.0, "dielectric stack: ambient_index must be >= 1");
    for (const auto& layer : layers) {
        require(finite(layer.refractive_index) && layer.refractive_index >= 1.0,
                "dielectric stack: refractive_index must be >= 1");
        require(finite(layer.thickness) && layer.thickness >= 0.0, "dielectric stack: thickness must be >= 0");
    }
}

double DielectricStack::total_thickness() const {
    double total = 0.0;
    for (const auto& layer : layers) total += layer.thickness;
    return total;
}

void EvanescentGuide::validate() const {
    require(finite(cutoff_frequency) && cutoff_frequency > 0.0, "evanescent guide: cutoff_frequency must be > 0");
    require(finite(length) && length >= 0.0, "evanescent guide: length must be >= 0");
}

void FtirGap::validate() const {
    require(finite(prism_index) && prism_index > 1.0, "ftir gap: prism_index must be > 1");
    require(finite(angle) && angle >= 0.0 && angle < constants::pi / 2.0, "ftir gap: angle must be in [0, pi/2)");
    require(finite(gap) && gap >= 0.0, "ftir gap: gap must be >= 0");
}

bool FtirGap::beyond_critical_angle() const { return prism_index * std::sin(angle) > 1.0; }

void GaussianPacket::validate() const {
    require(finite(center_wavenumber), "gaussian packet: center_wavenumber must be finite");
    require(finite(spatial_sigma) && spatial_sigma > 0.0, "gaussian packet: spatial_sigma must be > 0");
    require(finite(center_position), "gaussian packet: center_position must be finite");
}

std::optional<std::string> quasi_monochromatic_warning(const GaussianPacket& packet) {
    if (packet.quasi_monochromatic()) return std::nullopt;
    std::ostringstream os;
    os << "packet k0*sigma = " << packet.center_wavenumber * packet.spatial_sigma << " < "
       << GaussianPacket::kMinimumK0Sigma << "; traversal-time measurements assume a quasi-monochromatic packet";
    return os.str();
}

void validate(const BarrierModel& model) {
    std::visit([](const auto& m) { m.validate(); }, model);
}

std::string model_kind(const BarrierModel& model) {
    struct Visitor {
        std::string operator()(const RectangularBarrier&) const { return "rectangular"; }
        std::string operator()(const DielectricStack&) const { return "dielectric_stack"; }
        std::string operator()(const EvanescentGuide&) const { return "evanescent_guide"; }
        std::string operator()(const FtirGap&) const { return "ftir_gap"; }
    };
    return std::visit(Visitor{}, model);
}

double energy_to_wavenumber(double energy_ev, double mass) {
    require(finite(energy_ev) && energy_ev > 0.0, "energy_to_wavenumber: energy must be > 0");
    require(finite(mass) && mass > 0.0, "energy_to_wavenumber: mass must be > 0");
    return std::sqrt(2.0 * mass * energy_ev * constants::ev_to_joule) / constants::hbar;
}

double energy_to_frequency(double energy_ev) {
    require(finite(energy_ev) && energy_ev > 0.0, "energy_to_frequency: energy must be > 0");
    return energy_ev / constants::planck_ev;
}

double frequency_to_energy(double frequency_hz) {
    require(finite(frequency_hz) && frequency_hz > 0.0, "frequency_to_energy: frequency must be > 0");
    return frequency_hz * constants::planck_ev;
}

double ev_to_joule(double energy_ev) { return energy_ev * constants::ev_to_joule; }
double joule_to_ev(double energy_j) { return energy_j / constants::ev_to_joule; }

double energy_to_angular_frequency(double energy_ev) {
    require(finite(energy_ev) && energy_ev > 0.0, "energy_to_angular_frequency: energy must be > 0");
    return energy_ev / constants::hbar_ev;
}

double angular_frequency_to_energy(double omega) {
    require(finite(omega) && omega > 0.0, "angular_frequency_to_energy: omega must be > 0");
    return omega * constants::hbar_ev;
}

}  // namespace tunnelkit
