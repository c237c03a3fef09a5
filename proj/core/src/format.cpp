#include "tunnelkit/format.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace tunnelkit {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", value);
    return buf;
}

namespace {

void emit(std::ostringstream& os, const nlohmann::json& v, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (v.type()) {
        case nlohmann::json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << nlohmann::json(it.key()).dump() << ": ";
                emit(os, it.value(), indent, depth + 1);
            }
            os << "\n" << close_pad << "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            bool first = true;
            for (const auto& item : v) {
                if (!first) os << ",\n";
                first = false;
                os << pad;
                emit(os, item, indent, depth + 1);
            }
            os << "\n" << close_pad << "]";
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double d = v.get<double>();
            // JSON has no NaN/inf literals.
            if (std::isfinite(d)) {
                os << format_double(d);
            } else {
                os << "null";
            }
            return;
        }
        default:
            os << v.dump();
            return;
    }
}

}  // namespace

std::string to_json_text(const nlohmann::json& value, int indent) {
    std::ostringstream os;
    emit(os, value, indent, 0);
    return os.str();
}

void write_json(std::ostream& os, const nlohmann::json& value) { os << to_json_text(value) << "\n"; }

}  // namespace tunnelkit
