#pragma once

#include <iosfwd>
#include <string>

#include "cdh/experiment.hpp"

namespace cdh {

// CSV with header setting,query_range,system,backend,fold,count,mae.
// MAE is rendered with four decimals; rows with no MAE leave the field
// empty; the fold average uses "avg" in the fold column.
void emit_report(const ExperimentReport& report, const std::string& path);
std::string report_to_csv(const ExperimentReport& report);
ExperimentReport parse_report(const std::string& path);
ExperimentReport parse_report_csv(const std::string& text);

// aligned plain-text table for terminals
void render_table(const ExperimentReport& report, std::ostream& out);

}  // namespace cdh
