#include "rmdp/csv.hpp"

#include <cstdio>
#include <sstream>

namespace rmdp {

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << csv_field(r.experiment) << ',' << csv_field(r.family) << ',' << csv_field(r.set_kind)
            << ',' << format_double(r.radius) << ',' << r.seed << ',' << format_double(r.x) << ','
            << csv_field(r.metric_name) << ',' << format_double(r.metric_value) << '\n';
    }
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
    std::ostringstream out;
    write_csv(out, records);
    return out.str();
}

} // namespace rmdp
