#include "cealg/io/assignment_document.hpp"

#include <map>

namespace cealg::io {

AssignmentDocument parse_assignment_document(std::string_view text) {
  Diagnostics diag;
  AssignmentDocument doc;
  std::map<std::string, std::size_t> seen;
  for (const auto& line : tokenize(text)) {
    const auto& t = line.tokens;
    if (t[0].text != "set") {
      diag.error(line, 0, "unknown directive '" + t[0].text + "'");
      continue;
    }
    if (!expect_arity(line, 4, "set <name> = <value>", diag)) continue;
    if (t[2].text != "=") {
      diag.error(line, 2, "expected '='");
      continue;
    }
    if (!is_valid_name(t[1].text)) {
      diag.error(line, 1, "'" + t[1].text + "' is not a generator name");
      continue;
    }
    const auto value = parse_integer(t[3].text);
    if (!value) {
      diag.error(line, 3, "value '" + t[3].text + "' is not an integer");
      continue;
    }
    if (auto [it, inserted] = seen.emplace(t[1].text, line.number); !inserted) {
      diag.error(line, 1, t[1].text + " already set on line " + std::to_string(it->second));
      continue;
    }
    doc.values.push_back({t[1].text, *value});
  }
  diag.throw_if_any();
  return doc;
}

namespace {

std::string serialize_values(const std::map<std::string, Scalar>& values) {
  std::string out;
  for (const auto& [name, v] : values) out += "set " + name + " = " + std::to_string(v.value()) + "\n";
  return out;
}

}  // namespace

std::string serialize_assignment(const Augmentation& e) { return serialize_values(e.values()); }
std::string serialize_assignment(const BoundingCochain& b) { return serialize_values(b.coefficients()); }

Augmentation to_augmentation(const AssignmentDocument& doc, Field field) {
  Augmentation e(field);
  for (const auto& [name, v] : doc.values) e.set(name, field(v));
  return e;
}

BoundingCochain to_cochain(const AssignmentDocument& doc, Field field) {
  BoundingCochain b(field);
  for (const auto& [name, v] : doc.values) b.set(name, field(v));
  return b;
}

}  // namespace cealg::io
