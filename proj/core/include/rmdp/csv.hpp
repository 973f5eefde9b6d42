#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rmdp/harness.hpp"

namespace rmdp {

inline constexpr std::string_view kCsvHeader =
    "experiment,family,set_kind,radius,seed,x,metric_name,metric_value";

/// RFC-4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

/// printf("%.17g"), which round-trips every double.
std::string format_double(double value);

/// Header line then one line per record, each ending in '\n'.
void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);

std::string to_csv(const std::vector<ExperimentRecord>& records);

} // namespace rmdp
