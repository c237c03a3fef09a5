#include "tunnelkit/serialization.hpp"

#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

double number(const json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw DomainError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

json complex_pair(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

void to_json(json& j, const RectangularBarrier& v) { j = json{{"v0", v.v0}, {"width", v.width}, {"mass", v.mass}}; }

void from_json(const json& j, RectangularBarrier& v) {
    v.v0 = number(j, "v0");
    v.width = number(j, "width");
    v.mass = number(j, "mass");
    v.validate();
}

void to_json(json& j, const Layer& v) {
    j = json{{"refractive_index", v.refractive_index}, {"thickness", v.thickness}};
}

void from_json(const json& j, Layer& v) {
    v.refractive_index = number(j, "refractive_index");
    v.thickness = number(j, "thickness");
}

void to_json(json& j, const DielectricStack& v) { j = json{{"layers", v.layers}, {"ambient_index", v.ambient_index}}; }

void from_json(const json& j, DielectricStack& v) {
    v.layers.clear();
    if (j.contains("layers")) {
        for (const auto& item : j.at("layers")) v.layers.push_back(item.get<Layer>());
    }
    v.ambient_index = number(j, "ambient_index");
    v.validate();
}

void to_json(json& j, const EvanescentGuide& v) {
    j = json{{"cutoff_frequency", v.cutoff_frequency}, {"length", v.length}};
}

void from_json(const json& j, EvanescentGuide& v) {
    v.cutoff_frequency = number(j, "cutoff_frequency");
    v.length = number(j, "length");
    v.validate();
}

void to_json(json& j, const FtirGap& v) {
    j = json{{"prism_index", v.prism_index},
             {"angle", v.angle},
             {"gap", v.gap},
             {"polarization", v.polarization == Polarization::s ? "s" : "p"}};
}

void from_json(const json& j, FtirGap& v) {
    v.prism_index = number(j, "prism_index");
    v.angle = number(j, "angle");
    v.gap = number(j, "gap");
    const auto pol = j.at("polarization").get<std::string>();
    if (pol == "s") {
        v.polarization = Polarization::s;
    } else if (pol == "p") {
        v.polarization = Polarization::p;
    } else {
        throw DomainError("polarization must be 's' or 'p'");
    }
    v.validate();
}

void to_json(json& j, const GaussianPacket& v) {
    j = json{{"center_wavenumber", v.center_wavenumber},
             {"spatial_sigma", v.spatial_sigma},
             {"center_position", v.center_position}};
}

void from_json(const json& j, GaussianPacket& v) {
    v.center_wavenumber = number(j, "center_wavenumber");
    v.spatial_sigma = number(j, "spatial_sigma");
    v.center_position = number(j, "center_position");
    v.validate();
}

json model_to_json(const BarrierModel& model) {
    json j = std::visit([](const auto& m) { return json(m); }, model);
    j["kind"] = model_kind(model);
    return j;
}

BarrierModel model_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rectangular") return j.get<RectangularBarrier>();
    if (kind == "dielectric_stack") return j.get<DielectricStack>();
    if (kind == "evanescent_guide") return j.get<EvanescentGuide>();
    if (kind == "ftir_gap") return j.get<FtirGap>();
    throw DomainError("unknown barrier model kind: " + kind);
}

void to_json(json& j, const ComplexAmplitude& v) { j = json{{"re", v.re}, {"im", v.im}}; }

void from_json(const json& j, ComplexAmplitude& v) {
    v.re = number(j, "re");
    v.im = number(j, "im");
}

void to_json(json& j, const TransferMatrix& v) {
    j = json{{"m11", complex_pair(v.m11)},
             {"m12", complex_pair(v.m12)},
             {"m21", complex_pair(v.m21)},
             {"m22", complex_pair(v.m22)}};
}

void to_json(json& j, const DelayResult& v) {
    j = json{{"value", v.value}, {"unit", "s"}, {"method", to_string(v.method)}, {"metadata", v.metadata}};
}

void from_json(const json& j, DelayResult& v) {
    if (j.contains("unit") && j.at("unit") != "s") throw DomainError("DelayResult unit must be 's'");
    v.value = number(j, "value");
    v.method = delay_method_from_string(j.at("method").get<std::string>());
    v.metadata = j.value("metadata", json::object());
}

void to_json(json& j, const PhaseSeries& v) {
    j = json{{"omegas", v.omegas}, {"phases", v.phases}, {"ambiguous_jump", v.ambiguous_jump}};
}

void to_json(json& j, const HartmanCurve& v) {
    json points = json::array();
    for (const auto& p : v.points) {
        json item{{"length_m", p.length}};
        item["tau_s"] = p.delay ? json(p.delay->value) : json(nullptr);
        item["kappa_length"] = p.kappa_length ? json(*p.kappa_length) : json(nullptr);
        if (!p.error.empty()) item["error"] = p.error;
        points.push_back(std::move(item));
    }
    j = json{{"points", points},
             {"saturation_diagnostic", v.saturation_diagnostic},
             {"tail_points", v.tail_points},
             {"valid_points", v.valid_points}};
}

void to_json(json& j, const TableRecord& v) {
    j = json{{"barrier_kind", to_string(v.barrier_kind)},
             {"reference", v.reference},
             {"tau_measured", v.tau_measured},
             {"period_T", v.period_T},
             {"tau_A", v.tau_A}};
}

void from_json(const json& j, TableRecord& v) {
    v.barrier_kind = barrier_kind_from_string(j.at("barrier_kind").get<std::string>());
    v.reference = j.at("reference").get<std::string>();
    v.tau_measured = number(j, "tau_measured");
    v.period_T = number(j, "period_T");
    v.tau_A = number(j, "tau_A");
    v.validate();
}

void to_json(json& j, const ComparisonReport& v) {
    json entries = json::array();
    for (const auto& e : v.entries) {
        entries.push_back(json{{"record", e.record},
                               {"ratio_T", e.ratio_T},
                               {"ratio_A", e.ratio_A},
                               {"log10_ratio_T", e.log10_ratio_T},
                               {"log10_ratio_A", e.log10_ratio_A},
                               {"order_of_magnitude_T", e.order_of_magnitude_T},
                               {"order_of_magnitude_A", e.order_of_magnitude_A},
                               {"universal", e.universal}});
    }
    j = json{{"entries", entries}, {"threshold", v.threshold}, {"universal", v.universal}};
}

void to_json(json& j, const Grid1D& v) {
    j = json{{"x_min", v.x_min}, {"x_max", v.x_max}, {"n_points", v.n_points}};
}

void from_json(const json& j, Grid1D& v) {
    v.x_min = number(j, "x_min");
    v.x_max = number(j, "x_max");
    v.n_points = j.at("n_points").get<std::size_t>();
    v.validate();
}

void to_json(json& j, const ArrivalRecord& v) {
    j = json{{"detector_x", v.detector_x},
             {"time_of_peak", v.time_of_peak},
             {"time_of_centroid_crossing", v.time_of_centroid_crossing},
             {"transmitted_probability", v.transmitted_probability}};
}

void from_json(const json& j, ArrivalRecord& v) {
    v.detector_x = number(j, "detector_x");
    v.time_of_peak = number(j, "time_of_peak");
    v.time_of_centroid_crossing = number(j, "time_of_centroid_crossing");
    v.transmitted_probability = number(j, "transmitted_probability");
    if (v.transmitted_probability < 0.0 || v.transmitted_probability > 1.0) {
        throw DomainError("transmitted_probability must lie in [0, 1]");
    }
}

std::vector<TableRecord> table_from_json(const json& j) {
    const json& rows = j.is_object() ? j.at("records") : j;
    std::vector<TableRecord> out;
    for (const auto& row : rows) out.push_back(row.get<TableRecord>());
    return out;
}

json table_to_json(std::span<const TableRecord> records) {
    json rows = json::array();
    for (const auto& r : records) rows.push_back(r);
    return json{{"records", rows}};
}

}  // namespace tunnelkit
