#include "cealg/io/dga_document.hpp"

namespace cealg::io {

namespace {

std::optional<ChordRole> role_from_token(std::string_view t) {
  if (t == "a") return ChordRole::A;
  if (t == "b") return ChordRole::B;
  if (t == "c") return ChordRole::C;
  return std::nullopt;
}

std::string_view role_token(ChordRole r) {
  switch (r) {
    case ChordRole::A: return "a";
    case ChordRole::B: return "b";
    case ChordRole::C: return "c";
    case ChordRole::Base: break;
  }
  return "base";
}

std::optional<int> positive_index(const Line& line, std::size_t i, Diagnostics& diag) {
  const auto v = parse_integer(line.tokens[i].text);
  if (!v || *v < 1 || *v > 1'000'000) {
    diag.error(line, i, "index '" + line.tokens[i].text + "' must be a positive integer");
    return std::nullopt;
  }
  return static_cast<int>(*v);
}

}  // namespace

DgaDocument parse_dga_document(std::string_view text, std::optional<Field> field_override) {
  Diagnostics diag;
  DgaDocument doc;
  std::optional<std::size_t> field_line, ddeg_line;
  std::map<std::string, std::size_t> declared_at;
  std::vector<const Line*> d_lines;
  std::vector<std::pair<const Line*, std::string>> mark_lines;
  std::vector<std::pair<const Line*, std::pair<std::string, SurgeryLabel>>> surgery_lines;

  const auto lines = tokenize(text);
  for (const auto& line : lines) {
    const auto& t = line.tokens;
    const std::string& directive = t[0].text;
    if (directive == "field") {
      if (!expect_arity(line, 2, "field <p>", diag)) continue;
      if (field_line) {
        diag.error(line, 0, "field already declared on line " + std::to_string(*field_line));
        continue;
      }
      field_line = line.number;
      const auto p = parse_integer(t[1].text);
      if (!p || *p < 2 || *p > Field::kMaxCharacteristic || !is_prime(static_cast<std::uint32_t>(*p)))
        diag.error(line, 1, "field characteristic '" + t[1].text + "' is not a prime <= 97");
      else
        doc.field = Field(static_cast<std::uint32_t>(*p));
    } else if (directive == "ddeg") {
      if (!expect_arity(line, 2, "ddeg <int>", diag)) continue;
      if (ddeg_line) {
        diag.error(line, 0, "ddeg already declared on line " + std::to_string(*ddeg_line));
        continue;
      }
      ddeg_line = line.number;
      const auto v = parse_integer(t[1].text);
      if (!v || *v < -1000 || *v > 1000) diag.error(line, 1, "ddeg '" + t[1].text + "' is not a small integer");
      else doc.d_degree = static_cast<int>(*v);
    } else if (directive == "gen") {
      auto g = parse_generator(line, diag);
      if (!g) continue;
      if (auto [it, inserted] = declared_at.emplace(g->name, line.number); !inserted) {
        diag.error(line, 1, "generator " + g->name + " already declared on line " + std::to_string(it->second));
        continue;
      }
      doc.generators.push_back(std::move(*g));
    } else if (directive == "d") {
      if (t.size() < 4 || t[2].text != "=") {
        diag.error(line, std::min<std::size_t>(t.size(), 2), "expected 'd <name> = <poly>'");
        continue;
      }
      d_lines.push_back(&line);
    } else if (directive == "mark") {
      if (!expect_arity(line, 2, "mark <name>", diag)) continue;
      mark_lines.push_back({&line, t[1].text});
    } else if (directive == "surgery") {
      if (t.size() < 3) {
        diag.error(line, t.size(), "expected 'surgery <name> <a|b|c> <i> [<j> <m>]'");
        continue;
      }
      const auto role = role_from_token(t[2].text);
      if (!role) {
        diag.error(line, 2, "surgery role must be a, b or c");
        continue;
      }
      const std::size_t arity = *role == ChordRole::A ? 4 : 6;
      if (!expect_arity(line, arity, *role == ChordRole::A ? "surgery <name> a <i>" : "surgery <name> <b|c> <i> <j> <m>",
                        diag))
        continue;
      SurgeryLabel lab{*role, 0, 0, 0};
      const auto i = positive_index(line, 3, diag);
      std::optional<int> j = 0, m = 0;
      if (*role != ChordRole::A) {
        j = positive_index(line, 4, diag);
        m = positive_index(line, 5, diag);
      }
      if (!i || !j || !m) continue;
      lab.i = *i;
      lab.j = *j;
      lab.m = *m;
      surgery_lines.push_back({&line, {t[1].text, lab}});
    } else {
      diag.error(line, 0, "unknown directive '" + directive + "'");
    }
  }

  if (field_override) doc.field = *field_override;
  const auto declared = [&](const std::string& n) { return declared_at.contains(n); };

  std::set<std::string> seen_d;
  for (const Line* line : d_lines) {
    const std::string& name = line->tokens[1].text;
    if (!declared(name)) {
      diag.error(*line, 1, "differential of undeclared generator '" + name + "'");
      continue;
    }
    if (!seen_d.insert(name).second) {
      diag.error(*line, 1, "second differential for " + name);
      continue;
    }
    auto poly = parse_polynomial(*line, 3, line->tokens.size(), doc.field, declared, diag);
    if (poly && !poly->is_zero()) doc.differentials.emplace(name, std::move(*poly));
  }
  for (const auto& [line, name] : mark_lines) {
    if (!declared(name)) diag.error(*line, 1, "mark on undeclared generator '" + name + "'");
    else if (!doc.marked.insert(name).second) diag.error(*line, 1, name + " is marked twice");
  }
  for (const auto& [line, entry] : surgery_lines) {
    if (!declared(entry.first)) diag.error(*line, 1, "surgery label on undeclared generator '" + entry.first + "'");
    else if (!doc.surgery.insert(entry).second) diag.error(*line, 1, entry.first + " has two surgery labels");
  }

  diag.throw_if_any();
  return doc;
}

std::string serialize_dga_document(const DgaDocument& doc) {
  std::string out = "field " + std::to_string(doc.field.characteristic()) + "\n";
  out += "ddeg " + std::to_string(doc.d_degree) + "\n";
  for (const auto& g : doc.generators) out += "gen " + generator_line(g) + "\n";
  for (const auto& g : doc.generators)
    if (auto it = doc.differentials.find(g.name); it != doc.differentials.end())
      out += "d " + g.name + " = " + cealg::to_string(it->second) + "\n";
  for (const auto& name : doc.marked) out += "mark " + name + "\n";
  for (const auto& g : doc.generators) {
    auto it = doc.surgery.find(g.name);
    if (it == doc.surgery.end()) continue;
    const auto& lab = it->second;
    out += "surgery " + g.name + " " + std::string(role_token(lab.role)) + " " + std::to_string(lab.i);
    if (lab.role != ChordRole::A) out += " " + std::to_string(lab.j) + " " + std::to_string(lab.m);
    out += "\n";
  }
  return out;
}

Dga to_dga(const DgaDocument& doc) { return Dga(doc.field, doc.d_degree, doc.generators, doc.differentials); }

DgaDocument to_document(const Dga& dga) {
  DgaDocument doc;
  doc.field = dga.field();
  doc.d_degree = dga.d_degree();
  doc.generators = dga.generators();
  doc.differentials = dga.differentials();
  return doc;
}

SurgeryAlgebra to_surgery_algebra(const DgaDocument& doc) {
  Dga full = to_dga(doc);
  if (doc.marked.empty()) return SurgeryAlgebra(std::move(full), doc.surgery);
  OrderReversingMarking marking{doc.marked};
  Dga quotient = quotient_order_reversing(full, marking);
  return SurgeryAlgebra(std::move(quotient), doc.surgery, std::move(full), std::move(marking));
}

DgaDocument to_document(const SurgeryAlgebra& s) {
  DgaDocument doc = to_document(s.full());
  doc.marked = s.order_reversing().marked;
  doc.surgery = s.labels();
  return doc;
}

}  // namespace cealg::io
