#include "tunnelkit/analytic.hpp"

#include <cmath>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

constexpr Complex kI{0.0, 1.0};

// cosh(sqrt(x)) and sinh(sqrt(x))/sqrt(x), both entire in x, optionally scaled by
// exp(-sqrt(x)) so opaque slabs do not overflow.
struct SlabFunctions {
    double c;
    double s;
    double log_scale;  // values are multiplied by exp(-log_scale)
};

SlabFunctions slab_functions(double x) {
    if (std::abs(x) < 1e-8) {
        return {1.0 + x / 2.0 + x * x / 24.0, 1.0 + x / 6.0 + x * x / 120.0, 0.0};
    }
    if (x < 0.0) {
        const double y = std::sqrt(-x);
        return {std::cos(y), std::sin(y) / y, 0.0};
    }
    const double y = std::sqrt(x);
    if (y < 1.0) {
        return {std::cosh(y), std::sinh(y) / y, 0.0};
    }
    const double e = std::exp(-2.0 * y);
    return {0.5 * (1.0 + e), 0.5 * (1.0 - e) / y, y};
}

}  // namespace

TransferMatrix TransferMatrix::operator*(const TransferMatrix& rhs) const {
    return {m11 * rhs.m11 + m12 * rhs.m21, m11 * rhs.m12 + m12 * rhs.m22, m21 * rhs.m11 + m22 * rhs.m21,
            m21 * rhs.m12 + m22 * rhs.m22};
}

namespace detail {

Scattering slab_scattering(double k, double kappa_sq, double d, double impedance_ratio) {
    if (d == 0.0) return {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    const auto f = slab_functions(kappa_sq * d * d);
    const double g = impedance_ratio;
    // D = cosh(kd) + (i/2)(g kappa/k - k/(g kappa)) sinh(kd), written without kappa itself.
    const Complex denom = f.c + 0.5 * kI * d * f.s * (g * kappa_sq / k - k / g);
    const Complex numer_r = -0.5 * kI * d * f.s * (g * kappa_sq / k + k / g);
    const Complex phase = std::exp(-kI * k * d);
    const double scale = std::exp(-f.log_scale);
    return {phase * scale / denom, numer_r / denom};
}

}  // namespace detail

Scattering rect_barrier_scattering(double energy_ev, const RectangularBarrier& barrier) {
    barrier.validate();
    if (!(energy_ev > 0.0) || !std::isfinite(energy_ev)) {
        throw DomainError("rect_barrier_amplitude: energy must be > 0");
    }
    const double k = energy_to_wavenumber(energy_ev, barrier.mass);
    const double kappa_sq = 2.0 * barrier.mass * (barrier.v0 - energy_ev) * constants::ev_to_joule /
                            (constants::hbar * constants::hbar);
    return detail::slab_scattering(k, kappa_sq, barrier.width);
}

ComplexAmplitude rect_barrier_amplitude(double energy_ev, const RectangularBarrier& barrier) {
    return ComplexAmplitude{rect_barrier_scattering(energy_ev, barrier).t};
}

TransferMatrix layer_matrix(double omega, const Layer& layer) {
    const double n = layer.refractive_index;
    const double delta = n * omega * layer.thickness / constants::speed_of_light;
    const double c = std::cos(delta);
    const double s = std::sin(delta);
    return {Complex{c, 0.0}, kI * s / n, kI * n * s, Complex{c, 0.0}};
}

TransferMatrix stack_transfer_matrix(double omega, const DielectricStack& stack) {
    if (!(omega > 0.0)) throw DomainError("stack_transfer_matrix: omega must be > 0");
    stack.validate();
    TransferMatrix m = TransferMatrix::identity();
    for (const auto& layer : stack.layers) {
        m = m * layer_matrix(omega, layer);
    }
    return m;
}

Scattering stack_scattering(double omega, const DielectricStack& stack) {
    const TransferMatrix m = stack_transfer_matrix(omega, stack);
    const double n0 = stack.ambient_index;
    // [B, C]^T = M [1, n0]^T
    const Complex b = m.m11 + m.m12 * n0;
    const Complex c = m.m21 + m.m22 * n0;
    const Complex denom = n0 * b + c;
    return {2.0 * n0 / denom, (n0 * b - c) / denom};
}

ComplexAmplitude stack_amplitude(double omega, const DielectricStack& stack) {
    return ComplexAmplitude{stack_scattering(omega, stack).t};
}

Scattering guide_scattering(double omega, const EvanescentGuide& guide) {
    if (!(omega > 0.0)) throw DomainError("guide_amplitude: omega must be > 0");
    guide.validate();
    const double c = constants::speed_of_light;
    const double omega_c = 2.0 * constants::pi * guide.cutoff_frequency;
    const double k = omega / c;
    const double kappa_sq = (omega_c - omega) * (omega_c + omega) / (c * c);
    return detail::slab_scattering(k, kappa_sq, guide.length);
}

ComplexAmplitude guide_amplitude(double omega, const EvanescentGuide& guide) {
    return ComplexAmplitude{guide_scattering(omega, guide).t};
}

Scattering ftir_scattering(double omega, const FtirGap& gap) {
    if (!(omega > 0.0)) throw DomainError("ftir_amplitude: omega must be > 0");
    gap.validate();
    const double k_vac = omega / constants::speed_of_light;
    const double n = gap.prism_index;
    const double sin_t = std::sin(gap.angle);
    const double k_normal = n * k_vac * std::cos(gap.angle);
    const double kappa_sq = k_vac * k_vac * (n * n * sin_t * sin_t - 1.0);
    const double ratio = gap.polarization == Polarization::p ? n * n : 1.0;
    return detail::slab_scattering(k_normal, kappa_sq, gap.gap, ratio);
}

ComplexAmplitude ftir_amplitude(double omega, const FtirGap& gap) {
    return ComplexAmplitude{ftir_scattering(omega, gap).t};
}

Scattering scattering(const BarrierModel& model, double omega) {
    struct Visitor {
        double omega;
        Scattering operator()(const RectangularBarrier& b) const {
            return rect_barrier_scattering(angular_frequency_to_energy(omega), b);
        }
        Scattering operator()(const DielectricStack& s) const { return stack_scattering(omega, s); }
        Scattering operator()(const EvanescentGuide& g) const { return guide_scattering(omega, g); }
        Scattering operator()(const FtirGap& f) const { return ftir_scattering(omega, f); }
    };
    return std::visit(Visitor{omega}, model);
}

ComplexAmplitude amplitude(const BarrierModel& model, double omega) {
    return ComplexAmplitude{scattering(model, omega).t};
}

}  // namespace tunnelkit
