#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "tunnelkit/analytic.hpp"
#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/format.hpp"
#include "tunnelkit/phasetime.hpp"
#include "tunnelkit/scenario.hpp"
#include "tunnelkit/serialization.hpp"
#include "tunnelkit/tdse.hpp"
#include "tunnelkit/universal.hpp"

namespace tunnelkit::cli {

namespace {

using nlohmann::json;

constexpr double kNm = 1e-9;

// Raised for configuration problems discovered after argument parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string format = "json";
    std::string out_path;
};

struct DelayOptions {
    // rect
    double e_ev = 0.0;
    double v0_ev = 0.0;
    double width_nm = 0.0;
    double mass_kg = constants::electron_mass;
    // stack
    std::string layers;
    double ambient_index = 1.0;
    // guide
    double cutoff_hz = 0.0;
    double length_m = 0.0;
    // ftir
    double prism_index = 1.5;
    double angle_deg = 0.0;
    double gap_nm = 0.0;
    std::string polarization = "s";
    // frequency selection
    std::optional<double> omega_rad_s;
    std::optional<double> wavelength_nm;
    std::optional<double> frequency_hz;
    // generic model file
    std::string model_json;
    // phase-time controls
    double delta = 1e-5;
    bool relative = false;
};

struct HartmanOptions {
    std::optional<double> kappa_length_min;
    std::optional<double> kappa_length_max;
    std::optional<double> length_min_m;
    std::optional<double> length_max_m;
    std::size_t count = 7;
    std::size_t threads = 0;
};

struct TableOptions {
    std::string table_path;
};

struct SimulateOptions {
    std::string scenario;
    std::string out_dir = ".";
    std::size_t threads = 0;
};

void emit(const CommonOptions& common, std::ostream& out, const std::string& text) {
    if (common.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(common.out_path);
    if (!file) throw UsageError("cannot open output file " + common.out_path);
    file << text;
}

double omega_from(const DelayOptions& o, bool required) {
    const int given = int(o.omega_rad_s.has_value()) + int(o.wavelength_nm.has_value()) +
                      int(o.frequency_hz.has_value());
    if (given > 1) throw UsageError("give only one of --omega-rad-s, --wavelength-nm, --frequency-hz");
    if (o.omega_rad_s) return *o.omega_rad_s;
    if (o.wavelength_nm) return 2.0 * constants::pi * constants::speed_of_light / (*o.wavelength_nm * kNm);
    if (o.frequency_hz) return 2.0 * constants::pi * *o.frequency_hz;
    if (required) throw UsageError("a frequency is required: --omega-rad-s, --wavelength-nm or --frequency-hz");
    return 0.0;
}

std::vector<Layer> parse_layers(const std::string& spec) {
    std::vector<Layer> layers;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError("layer '" + item + "' must be INDEX:THICKNESS_NM");
        try {
            layers.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)) * kNm});
        } catch (const std::exception&) {
            throw UsageError("layer '" + item + "' must be INDEX:THICKNESS_NM");
        }
    }
    return layers;
}

Polarization parse_polarization(const std::string& p) {
    if (p == "s") return Polarization::s;
    if (p == "p") return Polarization::p;
    throw UsageError("--polarization must be s or p");
}

RectangularBarrier rect_from(const DelayOptions& o) {
    return RectangularBarrier{o.v0_ev, o.width_nm * kNm, o.mass_kg};
}

std::string delay_text(const DelayResult& r) {
    std::ostringstream os;
    os << "method " << to_string(r.method) << "\n";
    os << "tau_s " << format_double(r.value) << "\n";
    for (auto it = r.metadata.begin(); it != r.metadata.end(); ++it) {
        os << it.key() << " ";
        if (it.value().is_number_float()) {
            os << format_double(it.value().get<double>());
        } else {
            os << it.value().dump();
        }
        os << "\n";
    }
    return os.str();
}

void check_format(const CommonOptions& common, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed) {
        if (common.format == a) return;
    }
    throw UsageError("unsupported --format '" + common.format + "' for this command");
}

int run_delay(const std::string& model_name, const DelayOptions& o, const CommonOptions& common, std::ostream& out) {
    check_format(common, {"json", "text"});
    BarrierModel model;
    double omega = 0.0;
    if (model_name == "rect") {
        model = rect_from(o);
        if (!(o.e_ev > 0.0)) throw UsageError("--e-ev must be > 0");
        omega = energy_to_angular_frequency(o.e_ev);
    } else if (model_name == "stack") {
        model = DielectricStack{parse_layers(o.layers), o.ambient_index};
        omega = omega_from(o, true);
    } else if (model_name == "guide") {
        model = EvanescentGuide{o.cutoff_hz, o.length_m};
        omega = omega_from(o, true);
    } else if (model_name == "ftir") {
        model = FtirGap{o.prism_index, o.angle_deg * constants::pi / 180.0, o.gap_nm * kNm,
                        parse_polarization(o.polarization)};
        omega = omega_from(o, true);
    } else {
        std::ifstream in(o.model_json);
        if (!in) throw UsageError("cannot open model file " + o.model_json);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw UsageError(std::string("model file: ") + e.what());
        }
        model = model_from_json(j);
        if (std::holds_alternative<RectangularBarrier>(model) && o.e_ev > 0.0) {
            omega = energy_to_angular_frequency(o.e_ev);
        } else {
            omega = omega_from(o, true);
        }
    }
    validate(model);
    if (!(omega > 0.0)) throw UsageError("frequency must be > 0");

    PhaseTimeOptions options;
    options.delta = o.delta;
    options.relative_to_free_flight = o.relative;
    const DelayResult result = phase_time(model, omega, options);
    if (common.format == "text") {
        emit(common, out, delay_text(result));
    } else {
        emit(common, out, to_json_text(json(result)) + "\n");
    }
    return kSuccess;
}

int run_hartman(const std::string& family_name, const DelayOptions& o, const HartmanOptions& h,
                const CommonOptions& common, std::ostream& out) {
    check_format(common, {"csv", "json"});
    if (h.count < 3) throw UsageError("hartman needs at least 3 lengths (--count >= 3)");
    BarrierModel family;
    double omega = 0.0;
    if (family_name == "rect") {
        if (!(o.e_ev > 0.0)) throw UsageError("--e-ev must be > 0");
        family = RectangularBarrier{o.v0_ev, 0.0, o.mass_kg};
        omega = energy_to_angular_frequency(o.e_ev);
    } else if (family_name == "guide") {
        family = EvanescentGuide{o.cutoff_hz, 0.0};
        omega = omega_from(o, true);
    } else {
        family = FtirGap{o.prism_index, o.angle_deg * constants::pi / 180.0, 0.0, parse_polarization(o.polarization)};
        omega = omega_from(o, true);
    }
    validate(family);

    double lo = 0.0;
    double hi = 0.0;
    if (h.kappa_length_min || h.kappa_length_max) {
        if (!h.kappa_length_min || !h.kappa_length_max) {
            throw UsageError("give both --kappa-length-min and --kappa-length-max");
        }
        const auto kappa = decay_constant(family, omega);
        if (!kappa) throw UsageError("--kappa-length-* needs an evanescent (tunneling) regime");
        lo = *h.kappa_length_min / *kappa;
        hi = *h.kappa_length_max / *kappa;
    } else if (h.length_min_m && h.length_max_m) {
        lo = *h.length_min_m;
        hi = *h.length_max_m;
    } else {
        throw UsageError("give a length range: --kappa-length-min/max or --length-min-m/--length-max-m");
    }
    if (!(lo >= 0.0) || !(hi > lo)) throw UsageError("length range must satisfy 0 <= min < max");
    std::vector<double> lengths(h.count);
    for (std::size_t i = 0; i < h.count; ++i) {
        lengths[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(h.count - 1);
    }

    PhaseTimeOptions options;
    options.delta = o.delta;
    options.relative_to_free_flight = o.relative;
    const HartmanCurve curve = hartman_curve(family, lengths, omega, options, h.threads);

    if (common.format == "json") {
        emit(common, out, to_json_text(json(curve)) + "\n");
    } else {
        std::ostringstream os;
        os << "length_m,tau_s\n";
        for (const auto& p : curve.points) {
            os << format_double(p.length) << ',' << (p.delay ? format_double(p.delay->value) : "") << '\n';
        }
        os << "saturation_diagnostic," << format_double(curve.saturation_diagnostic) << '\n';
        emit(common, out, os.str());
    }
    return curve.valid_points >= 2 ? kSuccess : kNumerical;
}

int run_table(const TableOptions& t, const CommonOptions& common, std::ostream& out) {
    check_format(common, {"text", "json"});
    std::vector<TableRecord> records = builtin_table();
    if (!t.table_path.empty()) {
        std::ifstream in(t.table_path);
        if (!in) throw UsageError("cannot open table file " + t.table_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw UsageError(std::string("table file: ") + e.what());
        }
        records = table_from_json(j);
    }
    const ComparisonReport report = compare(records);

    const double ratio_form = tau_A_ratio_form(kIonizationEnergyEv, kIonizationBarrierEv);
    const double sqrt_form = tau_A_sqrt_form(kIonizationEnergyEv, kIonizationBarrierEv);
    const std::string verdict = std::string("universal within first order: ") + (report.universal ? "PASS" : "FAIL");

    if (common.format == "json") {
        json j = report;
        j["verdict"] = verdict;
        j["ionization_supplement"] = json{{"energy_ev", kIonizationEnergyEv},
                                          {"v0_ev", kIonizationBarrierEv},
                                          {"period_h_over_E_s", massive_period(kIonizationEnergyEv)},
                                          {"tau_A_ratio_form_s", ratio_form},
                                          {"tau_A_sqrt_form_s", sqrt_form},
                                          {"sqrt_over_ratio", sqrt_form / ratio_form}};
        emit(common, out, to_json_text(j) + "\n");
    } else {
        std::ostringstream os;
        os << render_text(report);
        os << "ionization (E = 54.39 eV, V0 = 78.98 eV): tau_A ratio form " << format_double(ratio_form / 1e-18)
           << " as, sqrt form " << format_double(sqrt_form / 1e-18) << " as\n";
        emit(common, out, os.str());
    }
    return kSuccess;
}

int run_simulate(const SimulateOptions& s, const CommonOptions& common, std::ostream& out) {
    check_format(common, {"json", "text"});
    TraversalScenario scenario;
    try {
        scenario = load_scenario(s.scenario);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    const TraversalMeasurement m = measure_traversal(scenario, s.threads);
    const double omega0 = std::pow(constants::hbar * scenario.packet.center_wavenumber, 2) /
                          (2.0 * scenario.barrier.mass) / constants::hbar;
    const DelayResult predicted = phase_time(BarrierModel{scenario.barrier}, omega0);

    namespace fs = std::filesystem;
    const fs::path dir(s.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    const std::string stem = fs::path(s.scenario).stem().string();
    const fs::path csv_path = dir / (stem + "_trajectory.csv");
    const fs::path arrival_path = dir / (stem + "_arrival.json");
    {
        std::ofstream csv(csv_path);
        if (!csv) throw UsageError("cannot write " + csv_path.string());
        write_trajectory_csv(csv, m.trajectory);
    }
    {
        std::ofstream arrival(arrival_path);
        if (!arrival) throw UsageError("cannot write " + arrival_path.string());
        write_json(arrival, json(m.barrier_arrival));
    }

    const double ratio = m.delay.value / predicted.value;
    if (common.format == "text") {
        std::ostringstream os;
        os << "tau_sim_s " << format_double(m.delay.value) << "\n";
        os << "tau_phase_s " << format_double(predicted.value) << "\n";
        os << "ratio " << format_double(ratio) << "\n";
        os << "transmitted_probability " << format_double(m.barrier_arrival.transmitted_probability) << "\n";
        os << "norm_drift " << format_double(m.norm_drift) << "\n";
        os << "trajectory_csv " << csv_path.string() << "\n";
        os << "arrival_json " << arrival_path.string() << "\n";
        emit(common, out, os.str());
    } else {
        json j{{"tau_sim_s", m.delay.value},
               {"tau_phase_s", predicted.value},
               {"ratio", ratio},
               {"delay", m.delay},
               {"phase_time", predicted},
               {"arrival", m.barrier_arrival},
               {"scenario", scenario_to_json(scenario)},
               {"trajectory_csv", csv_path.string()},
               {"arrival_json", arrival_path.string()}};
        emit(common, out, to_json_text(j) + "\n");
    }
    return kSuccess;
}

void add_rect_options(CLI::App* cmd, DelayOptions& o, bool with_width) {
    cmd->add_option("--e-ev", o.e_ev, "Particle energy (eV)")->required();
    cmd->add_option("--v0-ev", o.v0_ev, "Barrier height (eV)")->required();
    if (with_width) cmd->add_option("--width-nm", o.width_nm, "Barrier width (nm)")->required();
    cmd->add_option("--mass-kg", o.mass_kg, "Particle mass (kg), default electron");
}

void add_frequency_options(CLI::App* cmd, DelayOptions& o) {
    cmd->add_option("--omega-rad-s", o.omega_rad_s, "Angular frequency (rad/s)");
    cmd->add_option("--wavelength-nm", o.wavelength_nm, "Vacuum wavelength (nm)");
    cmd->add_option("--frequency-hz", o.frequency_hz, "Frequency (Hz)");
}

void add_guide_options(CLI::App* cmd, DelayOptions& o, bool with_length) {
    cmd->add_option("--cutoff-hz", o.cutoff_hz, "Cutoff frequency of the undersized section (Hz)")->required();
    if (with_length) cmd->add_option("--length-m", o.length_m, "Length of the undersized section (m)")->required();
    add_frequency_options(cmd, o);
}

void add_ftir_options(CLI::App* cmd, DelayOptions& o, bool with_gap) {
    cmd->add_option("--prism-index", o.prism_index, "Prism refractive index");
    cmd->add_option("--angle-deg", o.angle_deg, "Incidence angle inside the prism (deg)")->required();
    if (with_gap) cmd->add_option("--gap-nm", o.gap_nm, "Air gap width (nm)")->required();
    cmd->add_option("--polarization", o.polarization, "s or p");
    add_frequency_options(cmd, o);
}

void add_phase_options(CLI::App* cmd, DelayOptions& o) {
    cmd->add_option("--delta", o.delta, "Relative frequency step for the derivative");
    cmd->add_flag("--relative", o.relative, "Report delay relative to free flight over the same length");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"tunnelkit: barrier traversal times from phase time, universal relations and wave-packet runs"};
    app.require_subcommand(1);
    CommonOptions common;
    DelayOptions delay_opts;
    HartmanOptions hartman_opts;
    TableOptions table_opts;
    SimulateOptions simulate_opts;

    auto add_common = [&](CLI::App* cmd, const std::string& default_format) {
        common.format = default_format;
        cmd->add_option("--format", common.format, "Output format");
        cmd->add_option("--out", common.out_path, "Write output to PATH instead of stdout");
    };

    auto* delay = app.add_subcommand("delay", "Phase-time traversal delay of one barrier");
    delay->require_subcommand(1);
    auto* delay_rect = delay->add_subcommand("rect", "Rectangular potential barrier");
    add_rect_options(delay_rect, delay_opts, true);
    auto* delay_stack = delay->add_subcommand("stack", "Dielectric layer stack at normal incidence");
    delay_stack->add_option("--layers", delay_opts.layers, "Comma list of INDEX:THICKNESS_NM, first layer first");
    delay_stack->add_option("--ambient-index", delay_opts.ambient_index, "Index of the surrounding medium");
    add_frequency_options(delay_stack, delay_opts);
    auto* delay_guide = delay->add_subcommand("guide", "Undersized waveguide section");
    add_guide_options(delay_guide, delay_opts, true);
    auto* delay_ftir = delay->add_subcommand("ftir", "Frustrated total reflection across an air gap");
    add_ftir_options(delay_ftir, delay_opts, true);
    auto* delay_model = delay->add_subcommand("model", "Barrier model from a JSON file");
    delay_model->add_option("--model-json", delay_opts.model_json, "BarrierModel JSON file")->required();
    delay_model->add_option("--e-ev", delay_opts.e_ev, "Particle energy for rectangular models (eV)");
    add_frequency_options(delay_model, delay_opts);
    for (auto* cmd : {delay_rect, delay_stack, delay_guide, delay_ftir, delay_model}) {
        add_phase_options(cmd, delay_opts);
        add_common(cmd, "json");
    }

    auto* hartman = app.add_subcommand("hartman", "Phase time versus barrier length (Hartman scan)");
    hartman->require_subcommand(1);
    auto* hartman_rect = hartman->add_subcommand("rect", "Rectangular barrier family");
    add_rect_options(hartman_rect, delay_opts, false);
    auto* hartman_guide = hartman->add_subcommand("guide", "Undersized waveguide family");
    add_guide_options(hartman_guide, delay_opts, false);
    auto* hartman_ftir = hartman->add_subcommand("ftir", "FTIR gap family");
    add_ftir_options(hartman_ftir, delay_opts, false);
    for (auto* cmd : {hartman_rect, hartman_guide, hartman_ftir}) {
        cmd->add_option("--kappa-length-min", hartman_opts.kappa_length_min, "Smallest kappa*L (dimensionless)");
        cmd->add_option("--kappa-length-max", hartman_opts.kappa_length_max, "Largest kappa*L (dimensionless)");
        cmd->add_option("--length-min-m", hartman_opts.length_min_m, "Smallest length (m)");
        cmd->add_option("--length-max-m", hartman_opts.length_max_m, "Largest length (m)");
        cmd->add_option("--count", hartman_opts.count, "Number of lengths (>= 3)");
        cmd->add_option("--threads", hartman_opts.threads, "Worker threads (default TUNNELKIT_THREADS or all)");
        add_phase_options(cmd, delay_opts);
        add_common(cmd, "csv");
    }

    auto* table = app.add_subcommand("table", "Compare published tunneling times with 1/nu and tau_A");
    table->add_option("--table", table_opts.table_path, "Table JSON file (default: built-in table)");
    add_common(table, "text");

    auto* simulate = app.add_subcommand("simulate", "Time-domain wave-packet traversal measurement");
    simulate->add_option("scenario", simulate_opts.scenario, "Scenario JSON file")->required();
    simulate->add_option("--out-dir", simulate_opts.out_dir, "Directory for trajectory CSV and arrival JSON");
    simulate->add_option("--threads", simulate_opts.threads, "Worker threads");
    add_common(simulate, "json");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    // Each subcommand resets the default format when registered; restore the right one.
    auto chosen_default = [&](CLI::App* cmd, const char* fallback) {
        if (cmd->get_option("--format")->count() == 0) common.format = fallback;
    };

    try {
        if (delay->parsed()) {
            for (auto* cmd : {delay_rect, delay_stack, delay_guide, delay_ftir, delay_model}) {
                if (cmd->parsed()) {
                    chosen_default(cmd, "json");
                    return run_delay(cmd->get_name(), delay_opts, common, out);
                }
            }
        }
        if (hartman->parsed()) {
            for (auto* cmd : {hartman_rect, hartman_guide, hartman_ftir}) {
                if (cmd->parsed()) {
                    chosen_default(cmd, "csv");
                    return run_hartman(cmd->get_name(), delay_opts, hartman_opts, common, out);
                }
            }
        }
        if (table->parsed()) {
            chosen_default(table, "text");
            return run_table(table_opts, common, out);
        }
        if (simulate->parsed()) {
            chosen_default(simulate, "json");
            return run_simulate(simulate_opts, common, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const OpaqueBarrierError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const ConfigurationError& e) {
        err << "guard error: " << e.what() << "\n";
        return kNumerical;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    err << "error: no command\n";
    return kUsage;
}

}  // namespace tunnelkit::cli
