#include "mfcbf/error.hpp"

#include <sstream>

namespace mfcbf {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::ostringstream os;
    os << "scenario validation failed (" << issues.size() << " issue"
       << (issues.size() == 1 ? "" : "s") << ")";
    for (const auto& s : issues) os << "\n  " << s;
    return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace mfcbf
