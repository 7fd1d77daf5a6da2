#pragma once

#include <string>

#include "smaug/authflow.hpp"

namespace smaug::tools {

/// Human-readable dump of a record: parameters, thresholds, the template
/// tables and every weight reduced by enrollment faults. Deterministic.
std::string describe_record(const EnrollmentRecord& record);

}  // namespace smaug::tools
