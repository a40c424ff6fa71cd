// checks.hpp — oracle suites exposed through `qprobe check <suite>`.

#pragma once

#include <string>
#include <vector>

namespace qprobe {

struct CheckLine {
    std::string name;
    bool passed{true};
    bool informational{false};  // reported, never fails the suite
    std::string detail;
};

struct CheckReport {
    std::vector<CheckLine> lines;

    bool passed() const;
    std::string format() const;
};

std::vector<std::string> check_suite_names();

// Throws ConfigError for an unknown suite name.
CheckReport run_check(const std::string& suite);

} // namespace qprobe
