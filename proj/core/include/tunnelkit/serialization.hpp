#pragma once

#include <nlohmann/json.hpp>

#include "tunnelkit/analytic.hpp"
#include "tunnelkit/domain.hpp"
#include "tunnelkit/phasetime.hpp"
#include "tunnelkit/tdse.hpp"
#include "tunnelkit/universal.hpp"

// JSON mapping for the public types. Field names follow the struct members;
// from_json validates and throws DomainError / ConfigurationError.
namespace tunnelkit {

using nlohmann::json;

void to_json(json& j, const RectangularBarrier& v);
void from_json(const json& j, RectangularBarrier& v);
void to_json(json& j, const Layer& v);
void from_json(const json& j, Layer& v);
void to_json(json& j, const DielectricStack& v);
void from_json(const json& j, DielectricStack& v);
void to_json(json& j, const EvanescentGuide& v);
void from_json(const json& j, EvanescentGuide& v);
void to_json(json& j, const FtirGap& v);
void from_json(const json& j, FtirGap& v);
void to_json(json& j, const GaussianPacket& v);
void from_json(const json& j, GaussianPacket& v);

// {"kind": "rectangular" | "dielectric_stack" | "evanescent_guide" | "ftir_gap", ...fields}
json model_to_json(const BarrierModel& model);
BarrierModel model_from_json(const json& j);

void to_json(json& j, const ComplexAmplitude& v);
void from_json(const json& j, ComplexAmplitude& v);
void to_json(json& j, const TransferMatrix& v);

void to_json(json& j, const DelayResult& v);
void from_json(const json& j, DelayResult& v);
void to_json(json& j, const PhaseSeries& v);
void to_json(json& j, const HartmanCurve& v);

void to_json(json& j, const TableRecord& v);
void from_json(const json& j, TableRecord& v);
void to_json(json& j, const ComparisonReport& v);

void to_json(json& j, const Grid1D& v);
void from_json(const json& j, Grid1D& v);
void to_json(json& j, const ArrivalRecord& v);
void from_json(const json& j, ArrivalRecord& v);

std::vector<TableRecord> table_from_json(const json& j);
json table_to_json(std::span<const TableRecord> records);

}  // namespace tunnelkit
