#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cealg/io/lexer.hpp"
#include "cealg/report.hpp"
#include "json.hpp"

namespace cealg::io {

inline constexpr std::string_view kToolName = "cealg";
inline constexpr std::string_view kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

Json to_json(const ValidationReport& report);

/// Report document for one CLI invocation. Field order is fixed: tool,
/// version, command, inputs, status, exit_code, result, violations, errors.
class Report {
 public:
  explicit Report(std::string command);

  void add_input(std::string role, std::string path, std::string_view contents);
  Json& result() { return result_; }
  void add_violations(const ValidationReport& r) { violations_.merge(r); }
  void add_violation(std::string check, std::string subject, std::string message) {
    violations_.add(std::move(check), std::move(subject), std::move(message));
  }
  void add_error(std::string kind, std::string message);
  void add_parse_errors(const std::string& role, const std::vector<ParseError>& errors);

  bool has_errors() const { return !errors_.empty(); }
  const ValidationReport& violations() const { return violations_; }

  /// 2 with input errors, else 1 with violations, else 0.
  int exit_code() const;
  Json to_json() const;

 private:
  std::string command_;
  Json inputs_ = Json::array();
  Json result_ = Json::object();
  ValidationReport violations_;
  Json errors_ = Json::array();
};

/// Indented "key: value" rendering of a report for terminals.
std::string render_text(const Json& report);

}  // namespace cealg::io
