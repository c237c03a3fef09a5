#include "tunnelkit/universal.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/format.hpp"

namespace tunnelkit {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

void require_tunneling(double energy_ev, double v0_ev) {
    require_positive(energy_ev, "energy");
    require_positive(v0_ev, "v0");
    if (!(energy_ev < v0_ev)) throw DomainError("tunneling regime requires 0 < E < V0");
}

}  // namespace

double oscillation_period(double frequency_hz) {
    require_positive(frequency_hz, "frequency");
    return 1.0 / frequency_hz;
}

double massive_period(double energy_ev) {
    require_positive(energy_ev, "energy");
    return constants::planck_ev / energy_ev;
}

double tau_modified(double period_s, double a_factor) {
    require_positive(period_s, "period");
    require_positive(a_factor, "A factor");
    return period_s * a_factor;
}

double a_factor_schrodinger(double energy_ev, double v0_ev) {
    require_tunneling(energy_ev, v0_ev);
    return energy_ev / (4.0 * constants::pi * constants::pi * (v0_ev - energy_ev));
}

double tau_A_ratio_form(double energy_ev, double v0_ev) {
    require_tunneling(energy_ev, v0_ev);
    return constants::hbar_ev / (2.0 * constants::pi * (v0_ev - energy_ev));
}

double tau_A_sqrt_form(double energy_ev, double v0_ev) {
    require_tunneling(energy_ev, v0_ev);
    return constants::hbar_ev / std::sqrt(energy_ev * (v0_ev - energy_ev));
}

std::string to_string(BarrierKind kind) {
    switch (kind) {
        case BarrierKind::ftir: return "ftir";
        case BarrierKind::photonic_lattice: return "photonic_lattice";
        case BarrierKind::undersized_waveguide: return "undersized_waveguide";
        case BarrierKind::ionization: return "ionization";
        case BarrierKind::acoustic: return "acoustic";
    }
    return "unknown";
}

BarrierKind barrier_kind_from_string(const std::string& name) {
    for (auto k : {BarrierKind::ftir, BarrierKind::photonic_lattice, BarrierKind::undersized_waveguide,
                   BarrierKind::ionization, BarrierKind::acoustic}) {
        if (to_string(k) == name) return k;
    }
    throw DomainError("unknown barrier_kind: " + name);
}

void TableRecord::validate() const {
    for (double v : {tau_measured, period_T, tau_A}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw DomainError("table record '" + reference + "': times must be positive and finite");
        }
    }
}

const std::vector<TableRecord>& builtin_table() {
    static const std::vector<TableRecord> table{
        {BarrierKind::ftir, "Haibel/Nimtz", 117e-12, 120e-12, 81e-12},
        {BarrierKind::ftir, "Balcou/Dutriaux", 30e-15, 11.3e-15, 36.8e-15},
        {BarrierKind::ftir, "Mugnai et al.", 134e-12, 100e-12, 87e-12},
        {BarrierKind::photonic_lattice, "Steinberg et al.", 2.13e-15, 2.34e-15, 2.02e-15},
        {BarrierKind::photonic_lattice, "Spielmann et al.", 2.7e-15, 2.7e-15, 2.98e-15},
        {BarrierKind::undersized_waveguide, "Enders/Nimtz", 130e-12, 115e-12, 128e-12},
        {BarrierKind::ionization, "Eckle et al.", 6e-18, 75e-18, 4.25e-18},
        {BarrierKind::acoustic, "Yang et al.", 0.8e-6, 1e-6, 0.6e-6},
    };
    return table;
}

ComparisonReport compare(std::span<const TableRecord> records, double threshold) {
    if (records.empty()) throw DomainError("compare: no records");
    ComparisonReport report;
    report.threshold = threshold;
    report.universal = true;
    for (const auto& record : records) {
        record.validate();
        ComparisonEntry e;
        e.record = record;
        e.ratio_T = record.tau_measured / record.period_T;
        e.ratio_A = record.tau_measured / record.tau_A;
        e.log10_ratio_T = std::log10(e.ratio_T);
        e.log10_ratio_A = std::log10(e.ratio_A);
        e.order_of_magnitude_T = std::abs(e.log10_ratio_T) < 1.0;
        e.order_of_magnitude_A = std::abs(e.log10_ratio_A) < 1.0;
        e.universal = std::abs(e.log10_ratio_T) < threshold;
        report.universal = report.universal && e.universal;
        report.entries.push_back(std::move(e));
    }
    return report;
}

std::string render_text(const ComparisonReport& report) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-22s %-18s %-16s %-16s %-16s %-16s %-16s %s\n", "barrier_kind", "reference",
                  "tau_s", "period_T_s", "tau_A_s", "tau_over_T", "tau_over_tau_A", "universal");
    os << line;
    for (const auto& e : report.entries) {
        std::snprintf(line, sizeof line, "%-22s %-18s %-16s %-16s %-16s %-16s %-16s %s\n",
                      to_string(e.record.barrier_kind).c_str(), e.record.reference.c_str(),
                      format_double(e.record.tau_measured).c_str(), format_double(e.record.period_T).c_str(),
                      format_double(e.record.tau_A).c_str(), format_double(e.ratio_T).c_str(),
                      format_double(e.ratio_A).c_str(), e.universal ? "yes" : "no");
        os << line;
    }
    os << "universal within first order: " << (report.universal ? "PASS" : "FAIL") << " (|log10(tau/T)| < "
       << format_double(report.threshold) << ")\n";
    return os.str();
}

}  // namespace tunnelkit
