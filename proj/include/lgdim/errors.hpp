#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgdim {

// One violated scheme condition: where it happened and which condition broke.
struct ValidationIssue {
    std::string where;      // e.g. "row 1", "row 0 cell 2"
    std::string condition;  // e.g. "range", "ordering", "overlap", "b_ge_a"
    std::string message;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues)
        : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
    static std::string summarize(const std::vector<ValidationIssue>& issues) {
        std::string s = "scheme validation failed (" + std::to_string(issues.size()) + " issue(s))";
        for (const auto& i : issues) s += "; " + i.where + ": " + i.message;
        return s;
    }
    std::vector<ValidationIssue> issues_;
};

// Composition or enumeration would exceed the configured alphabet/word cap.
class CapExceededError : public std::runtime_error {
public:
    CapExceededError(const std::string& what, double projected_size)
        : std::runtime_error(what + " (projected size " + std::to_string(projected_size) + ")"),
          projected_(projected_size) {}

    double projected_size() const noexcept { return projected_; }

private:
    double projected_;
};

}  // namespace lgdim
