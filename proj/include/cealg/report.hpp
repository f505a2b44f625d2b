#pragma once

#include <string>
#include <vector>

namespace cealg {

struct Violation {
  std::string check;    // short machine tag, e.g. "d-squared", "grading"
  std::string subject;  // generator (or entry) the violation is attached to
  std::string message;  // human-readable detail, including residuals

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Result of a validator. Validators never throw on invalid data: every
/// violation found is listed, and an empty list means the check passed.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string check, std::string subject, std::string message) {
    violations.push_back({std::move(check), std::move(subject), std::move(message)});
  }
  void merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
  bool has(const std::string& check) const {
    for (const auto& v : violations)
      if (v.check == check) return true;
    return false;
  }
};

}  // namespace cealg
