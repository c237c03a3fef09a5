#pragma once

#include <span>
#include <string>
#include <vector>

namespace tunnelkit {

// T = 1 / nu.
double oscillation_period(double frequency_hz);
// h / E for a particle of energy E (eV).
double massive_period(double energy_ev);
// tau_A = T * A.
double tau_modified(double period_s, double a_factor);

// A = E / (4 pi^2 (V0 - E)) for a particle tunneling a square barrier.
double a_factor_schrodinger(double energy_ev, double v0_ev);
// (h/E) * A = hbar / (2 pi (V0 - E)).
double tau_A_ratio_form(double energy_ev, double v0_ev);
// hbar / sqrt(E (V0 - E)); also the opaque-limit phase time of the square barrier.
double tau_A_sqrt_form(double energy_ev, double v0_ev);

// Helium ionization: electron energy and effective barrier height used by the
// attosecond supplement of the comparison table, eV.
inline constexpr double kIonizationEnergyEv = 54.39;
inline constexpr double kIonizationBarrierEv = 78.98;

enum class BarrierKind { ftir, photonic_lattice, undersized_waveguide, ionization, acoustic };

std::string to_string(BarrierKind kind);
BarrierKind barrier_kind_from_string(const std::string& name);

// One measured tunneling time with its carrier period and modified time.
struct TableRecord {
    BarrierKind barrier_kind = BarrierKind::ftir;
    std::string reference;
    double tau_measured = 0.0;  // s
    double period_T = 0.0;      // s
    double tau_A = 0.0;         // s

    void validate() const;
};

// The eight published measurements, photonic through acoustic.
const std::vector<TableRecord>& builtin_table();

inline constexpr double kUniversalityThreshold = 1.2;  // |log10(tau / T)|

struct ComparisonEntry {
    TableRecord record;
    double ratio_T = 0.0;  // tau / T
    double ratio_A = 0.0;  // tau / tau_A
    double log10_ratio_T = 0.0;
    double log10_ratio_A = 0.0;
    bool order_of_magnitude_T = false;  // |log10| < 1
    bool order_of_magnitude_A = false;
    bool universal = false;  // |log10(tau / T)| < threshold
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;
    double threshold = kUniversalityThreshold;
    bool universal = false;
};

ComparisonReport compare(std::span<const TableRecord> records, double threshold = kUniversalityThreshold);

// Aligned-column rendering, one line per record followed by the verdict.
std::string render_text(const ComparisonReport& report);

}  // namespace tunnelkit
