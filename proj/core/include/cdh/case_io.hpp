#pragma once

#include <string>

#include "cdh/casebase.hpp"

namespace cdh {

// Feature file: UTF-8 CSV with header "id,label,f0,...,f{d-1}". Numbers
// are rendered as the shortest decimal that round-trips a 64-bit real, so
// save_cases followed by load_cases is the identity.
CaseBase load_cases(const std::string& path);
void save_cases(const CaseBase& cb, const std::string& path);

// shortest round-trip rendering of one double (used by report output too)
std::string format_double(double v);

}  // namespace cdh
