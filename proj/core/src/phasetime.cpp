#include "tunnelkit/phasetime.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/parallel.hpp"

namespace tunnelkit {

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;

bool is_stack(const BarrierModel& model) { return std::holds_alternative<DielectricStack>(model); }

// Wavenumber of the medium surrounding the barrier, along the traversal direction.
double ambient_wavenumber(const BarrierModel& model, double omega) {
    struct Visitor {
        double omega;
        double operator()(const RectangularBarrier& b) const {
            return energy_to_wavenumber(angular_frequency_to_energy(omega), b.mass);
        }
        double operator()(const DielectricStack& s) const {
            return s.ambient_index * omega / constants::speed_of_light;
        }
        double operator()(const EvanescentGuide&) const { return omega / constants::speed_of_light; }
        double operator()(const FtirGap& f) const {
            return f.prism_index * omega * std::cos(f.angle) / constants::speed_of_light;
        }
    };
    return std::visit(Visitor{omega}, model);
}

std::string regime(const BarrierModel& model, double omega) {
    if (is_stack(model)) return "stratified";
    return decay_constant(model, omega).has_value() ? "evanescent" : "propagating";
}

struct Estimate {
    double tau;
    double transmission;
};

// Central difference over omega0 (1 +- delta) of the transit (or free-flight
// relative) phase.
Estimate central_difference(const BarrierModel& model, double omega0, double delta, bool relative) {
    const std::array<double, 3> omegas{omega0 * (1.0 - delta), omega0, omega0 * (1.0 + delta)};
    std::array<double, 3> principal{};
    double transmission = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const ComplexAmplitude t = amplitude(model, omegas[i]);
        const double mag = t.magnitude();
        if (!(mag > std::numeric_limits<double>::min()) || !std::isfinite(mag)) {
            throw OpaqueBarrierError("phase_time: |t| underflows at omega = " + std::to_string(omegas[i]) +
                                     " rad/s; barrier is opaque beyond double precision");
        }
        principal[i] = principal_phase(t);
        if (i == 1) transmission = mag * mag;
    }
    const PhaseSeries series = unwrap(omegas, principal);
    const double sign = is_stack(model) ? -1.0 : 1.0;
    const double length = model_length(model);
    auto phase = [&](std::size_t i) {
        const double raw = sign * series.phases[i];
        const double path = ambient_wavenumber(model, omegas[i]) * length;
        // Slab amplitudes are referenced to free continuation (raw = transit - path);
        // the stack amplitude carries the full transit phase.
        if (is_stack(model)) return relative ? raw - path : raw;
        return relative ? raw : raw + path;
    };
    return {(phase(2) - phase(0)) / (2.0 * omega0 * delta), transmission};
}

}  // namespace

std::string to_string(DelayMethod method) {
    switch (method) {
        case DelayMethod::phase_time: return "phase_time";
        case DelayMethod::universal_T: return "universal_T";
        case DelayMethod::universal_hE: return "universal_hE";
        case DelayMethod::tau_A: return "tau_A";
        case DelayMethod::time_domain: return "time_domain";
    }
    return "unknown";
}

DelayMethod delay_method_from_string(const std::string& name) {
    for (auto m : {DelayMethod::phase_time, DelayMethod::universal_T, DelayMethod::universal_hE, DelayMethod::tau_A,
                   DelayMethod::time_domain}) {
        if (to_string(m) == name) return m;
    }
    throw DomainError("unknown delay method: " + name);
}

double principal_phase(const ComplexAmplitude& t) {
    if (t.re == 0.0 && t.im == 0.0) {
        throw DomainError("principal_phase: t = 0 has no phase (opaque beyond precision)");
    }
    const double phi = std::atan2(t.im, t.re);
    return phi == -constants::pi ? constants::pi : phi;
}

PhaseSeries unwrap(std::span<const double> omegas, std::span<const double> principal_phases) {
    if (principal_phases.size() < 2) throw DomainError("unwrap: need at least 2 samples");
    if (omegas.size() != principal_phases.size()) throw DomainError("unwrap: omegas and phases differ in length");
    for (std::size_t i = 1; i < omegas.size(); ++i) {
        if (!(omegas[i] > omegas[i - 1])) throw DomainError("unwrap: omegas must be strictly ascending");
    }
    PhaseSeries out;
    out.omegas.assign(omegas.begin(), omegas.end());
    out.phases.reserve(principal_phases.size());
    out.phases.push_back(principal_phases[0]);
    double offset = 0.0;
    for (std::size_t i = 1; i < principal_phases.size(); ++i) {
        const double diff = principal_phases[i] - principal_phases[i - 1];
        // Bring diff into (-pi, pi]; a jump of exactly pi stays +pi.
        double wrapped = diff - kTwoPi * std::floor((diff + constants::pi) / kTwoPi);
        if (wrapped <= -constants::pi) wrapped += kTwoPi;
        if (std::abs(std::abs(wrapped) - constants::pi) < 1e-12) {
            wrapped = constants::pi;
            out.ambiguous_jump = true;
        }
        offset += wrapped - diff;
        out.phases.push_back(principal_phases[i] + offset);
    }
    return out;
}

double transit_phase(const BarrierModel& model, double omega) {
    const double raw = principal_phase(amplitude(model, omega));
    if (is_stack(model)) return -raw;
    return raw + ambient_wavenumber(model, omega) * model_length(model);
}

double free_path_phase(const BarrierModel& model, double omega) {
    return ambient_wavenumber(model, omega) * model_length(model);
}

DelayResult phase_time(const BarrierModel& model, double omega0, const PhaseTimeOptions& options) {
    validate(model);
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("phase_time: omega0 must be > 0");
    if (!(options.delta >= 1e-9 && options.delta <= 1e-2)) {
        throw DomainError("phase_time: delta must lie in [1e-9, 1e-2]");
    }
    const bool relative = options.relative_to_free_flight;
    double delta = options.delta;
    Estimate coarse = central_difference(model, omega0, delta, relative);
    Estimate fine = central_difference(model, omega0, delta / 2.0, relative);
    bool converged = true;
    double tau = coarse.tau;
    double used_delta = delta;
    if (options.adaptive) {
        auto agree = [&](double a, double b) {
            return std::abs(a - b) <= options.tolerance * std::abs(b) + 1e-30;
        };
        while (!agree(coarse.tau, fine.tau)) {
            delta /= 2.0;
            if (delta / 2.0 < 1e-9) {
                converged = false;
                break;
            }
            coarse = fine;
            fine = central_difference(model, omega0, delta / 2.0, relative);
        }
        tau = fine.tau;
        used_delta = delta / 2.0;
    }
    if (!std::isfinite(tau)) throw NumericalError("phase_time: non-finite derivative");

    DelayResult result;
    result.value = tau;
    result.method = DelayMethod::phase_time;
    auto& meta = result.metadata;
    meta["delta"] = used_delta;
    meta["richardson_error_s"] = std::abs(fine.tau - coarse.tau) / 3.0;
    meta["richardson_value_s"] = (4.0 * fine.tau - coarse.tau) / 3.0;
    meta["converged"] = converged;
    meta["relative_to_free_flight"] = relative;
    meta["omega0_rad_s"] = omega0;
    meta["model"] = model_kind(model);
    meta["regime"] = regime(model, omega0);
    meta["transmission"] = fine.transmission;
    return result;
}

double model_length(const BarrierModel& model) {
    struct Visitor {
        double operator()(const RectangularBarrier& b) const { return b.width; }
        double operator()(const DielectricStack& s) const { return s.total_thickness(); }
        double operator()(const EvanescentGuide& g) const { return g.length; }
        double operator()(const FtirGap& f) const { return f.gap; }
    };
    return std::visit(Visitor{}, model);
}

BarrierModel with_length(const BarrierModel& model, double length) {
    if (!(length >= 0.0)) throw DomainError("with_length: length must be >= 0");
    struct Visitor {
        double length;
        BarrierModel operator()(RectangularBarrier b) const {
            b.width = length;
            return b;
        }
        BarrierModel operator()(DielectricStack s) const {
            const double total = s.total_thickness();
            if (total == 0.0) {
                if (length != 0.0) throw DomainError("with_length: cannot scale an empty stack");
                return s;
            }
            for (auto& layer : s.layers) layer.thickness *= length / total;
            return s;
        }
        BarrierModel operator()(EvanescentGuide g) const {
            g.length = length;
            return g;
        }
        BarrierModel operator()(FtirGap f) const {
            f.gap = length;
            return f;
        }
    };
    return std::visit(Visitor{length}, model);
}

std::optional<double> decay_constant(const BarrierModel& model, double omega) {
    struct Visitor {
        double omega;
        std::optional<double> from_square(double kappa_sq) const {
            if (kappa_sq > 0.0) return std::sqrt(kappa_sq);
            return std::nullopt;
        }
        std::optional<double> operator()(const RectangularBarrier& b) const {
            const double e = angular_frequency_to_energy(omega);
            return from_square(2.0 * b.mass * (b.v0 - e) * constants::ev_to_joule /
                               (constants::hbar * constants::hbar));
        }
        std::optional<double> operator()(const DielectricStack&) const { return std::nullopt; }
        std::optional<double> operator()(const EvanescentGuide& g) const {
            const double c = constants::speed_of_light;
            const double wc = 2.0 * constants::pi * g.cutoff_frequency;
            return from_square((wc - omega) * (wc + omega) / (c * c));
        }
        std::optional<double> operator()(const FtirGap& f) const {
            const double k = omega / constants::speed_of_light;
            const double s = f.prism_index * std::sin(f.angle);
            return from_square(k * k * (s * s - 1.0));
        }
    };
    return std::visit(Visitor{omega}, model);
}

HartmanCurve hartman_curve(const BarrierModel& family, std::span<const double> lengths, double omega0,
                           const PhaseTimeOptions& options, std::size_t threads) {
    if (lengths.empty()) throw DomainError("hartman_curve: need at least one length");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (!(lengths[i] >= 0.0)) throw DomainError("hartman_curve: lengths must be >= 0");
        if (i > 0 && !(lengths[i] > lengths[i - 1])) throw DomainError("hartman_curve: lengths must be ascending");
    }
    HartmanCurve curve;
    curve.points.resize(lengths.size());
    const auto kappa = decay_constant(family, omega0);
    parallel_for(lengths.size(), thread_budget(threads, lengths.size()), [&](std::size_t i) {
        HartmanPoint& point = curve.points[i];
        point.length = lengths[i];
        if (kappa) point.kappa_length = *kappa * lengths[i];
        try {
            point.delay = phase_time(with_length(family, lengths[i]), omega0, options);
        } catch (const std::exception& e) {
            point.error = e.what();
        }
    });

    std::vector<double> tail;
    std::vector<double> all;
    for (const auto& p : curve.points) {
        if (!p.delay) continue;
        all.push_back(p.delay->value);
        if (p.kappa_length && *p.kappa_length > kOpaqueTailKappaLength) tail.push_back(p.delay->value);
    }
    curve.valid_points = all.size();
    const auto& used = tail.empty() ? all : tail;
    curve.tail_points = used.size();
    if (used.empty()) {
        curve.saturation_diagnostic = std::numeric_limits<double>::quiet_NaN();
        return curve;
    }
    const double reference = used.back();
    double worst = 0.0;
    for (double tau : used) {
        const double dev = reference != 0.0 ? std::abs(tau - reference) / std::abs(reference) : std::abs(tau);
        worst = std::max(worst, dev);
    }
    curve.saturation_diagnostic = worst;
    return curve;
}

}  // namespace tunnelkit
