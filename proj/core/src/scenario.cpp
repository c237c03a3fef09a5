#include "tunnelkit/scenario.hpp"

#include <cmath>
#include <fstream>

#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

using nlohmann::json;

constexpr double kNm = 1e-9;

double required_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ConfigurationError(std::string("scenario: missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

}  // namespace

TraversalScenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigurationError("scenario: top level must be an object");
    if (!j.contains("barrier") || !j.contains("packet")) {
        throw ConfigurationError("scenario: 'barrier' and 'packet' sections are required");
    }
    const json& jb = j.at("barrier");
    const json& jp = j.at("packet");
    TraversalScenario s;

    s.barrier.mass = jb.contains("mass_kg") ? required_number(jb, "mass_kg") : constants::electron_mass;
    s.barrier.v0 = required_number(jb, "v0_ev");
    if (s.barrier.v0 <= 0.0 && !jb.contains("width_nm")) {
        throw ConfigurationError("scenario: a zero-height barrier needs 'width_nm'");
    }

    double k0 = 0.0;
    if (jp.contains("k0_per_m")) {
        k0 = required_number(jp, "k0_per_m");
    } else {
        k0 = energy_to_wavenumber(required_number(jp, "energy_ev"), s.barrier.mass);
    }
    const double energy_ev =
        std::pow(constants::hbar * k0, 2) / (2.0 * s.barrier.mass) / constants::ev_to_joule;

    if (jb.contains("width_nm")) {
        s.barrier.width = required_number(jb, "width_nm") * kNm;
    } else if (jb.contains("kappa_width")) {
        if (!(s.barrier.v0 > energy_ev)) {
            throw ConfigurationError("scenario: 'kappa_width' needs v0_ev above the packet energy");
        }
        const double kappa =
            std::sqrt(2.0 * s.barrier.mass * (s.barrier.v0 - energy_ev) * constants::ev_to_joule) / constants::hbar;
        s.barrier.width = required_number(jb, "kappa_width") / kappa;
    } else {
        throw ConfigurationError("scenario: barrier needs 'width_nm' or 'kappa_width'");
    }

    s.packet.center_wavenumber = k0;
    if (jp.contains("sigma_nm")) {
        s.packet.spatial_sigma = required_number(jp, "sigma_nm") * kNm;
    } else {
        s.packet.spatial_sigma = required_number(jp, "k0_sigma") / k0;
    }
    const double sigma = s.packet.spatial_sigma;
    s.packet.center_position = jp.contains("x0_nm") ? jp.at("x0_nm").get<double>() * kNm : -9.0 * sigma;

    s.detector_offset = j.contains("detector_offset_nm") ? required_number(j, "detector_offset_nm") * kNm : 3.0 * sigma;

    if (j.contains("grid")) {
        const json& jg = j.at("grid");
        if (jg.contains("points_per_length")) s.settings.points_per_length = required_number(jg, "points_per_length");
        if (jg.contains("dx_nm")) s.settings.dx = required_number(jg, "dx_nm") * kNm;
    }
    if (j.contains("phase_per_step")) s.settings.phase_per_step = required_number(j, "phase_per_step");
    if (j.contains("sample_every")) s.settings.sample_every = j.at("sample_every").get<std::size_t>();

    try {
        s.barrier.validate();
        s.packet.validate();
    } catch (const DomainError& e) {
        throw ConfigurationError(std::string("scenario: ") + e.what());
    }
    return s;
}

TraversalScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open scenario file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigurationError("scenario " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

json scenario_to_json(const TraversalScenario& s) {
    json j{{"barrier", {{"v0_ev", s.barrier.v0}, {"width_nm", s.barrier.width / kNm}, {"mass_kg", s.barrier.mass}}},
           {"packet",
            {{"k0_per_m", s.packet.center_wavenumber},
             {"sigma_nm", s.packet.spatial_sigma / kNm},
             {"x0_nm", s.packet.center_position / kNm}}},
           {"detector_offset_nm", s.detector_offset / kNm},
           {"grid", {{"points_per_length", s.settings.points_per_length}}},
           {"phase_per_step", s.settings.phase_per_step},
           {"sample_every", s.settings.sample_every}};
    if (s.settings.dx) j["grid"]["dx_nm"] = *s.settings.dx / kNm;
    return j;
}

}  // namespace tunnelkit
