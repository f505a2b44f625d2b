#include "cealg/io/count_document.hpp"

#include <map>
#include <set>

namespace cealg::io {

namespace {

struct PendingCoefficient {
  const Line* line;
  std::size_t token;
};

}  // namespace

CountDocument parse_count_document(std::string_view text) {
  Diagnostics diag;
  CountDocument doc;
  std::optional<std::size_t> field_line;
  std::map<std::string, std::size_t> declared_at;
  // Coefficients are reduced once the field is known.
  std::vector<std::pair<PendingCoefficient, std::int64_t>> count_coeffs, strip_coeffs;

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
    } else if (directive == "gen") {
      auto g = parse_generator(line, diag);
      if (!g) continue;
      if (auto [it, inserted] = declared_at.emplace(g->name, line.number); !inserted) {
        diag.error(line, 1, "generator " + g->name + " already declared on line " + std::to_string(it->second));
        continue;
      }
      doc.generators.push_back(std::move(*g));
    } else if (directive == "count" || directive == "strip") {
      const bool is_count = directive == "count";
      const std::size_t eq = static_cast<std::size_t>(
          std::find_if(t.begin(), t.end(), [](const Token& tok) { return tok.text == "="; }) - t.begin());
      if (eq + 2 != t.size()) {
        diag.error(line, std::min(eq + 1, t.size()),
                   is_count ? "expected 'count <out> <in>* = <coeff>'"
                            : "expected 'strip <cOut> <cIn> [bottom: <names>] [top: <names>] = <coeff>'");
        continue;
      }
      const auto coeff = parse_integer(t[eq + 1].text);
      if (!coeff) {
        diag.error(line, eq + 1, "coefficient '" + t[eq + 1].text + "' is not an integer");
        continue;
      }
      bool ok = true;
      auto name_at = [&](std::size_t i) {
        if (!is_valid_name(t[i].text)) {
          diag.error(line, i, "'" + t[i].text + "' is not a generator name");
          ok = false;
        }
        return t[i].text;
      };
      if (is_count) {
        if (eq < 2) {
          diag.error(line, 1, "count needs an output generator");
          continue;
        }
        DiskEntry e{name_at(1), {}, doc.field.zero()};
        for (std::size_t i = 2; i < eq; ++i) e.inputs.push_back(name_at(i));
        if (!ok) continue;
        count_coeffs.push_back({{&line, eq + 1}, *coeff});
        doc.counts.push_back(std::move(e));
        doc.count_lines.push_back(line.number);
      } else {
        if (eq < 3) {
          diag.error(line, std::min<std::size_t>(eq, 2), "strip needs an output and an input chord");
          continue;
        }
        StripEntry e{name_at(1), name_at(2), {}, {}, doc.field.zero()};
        // bottom: ... top: ... , each section at most once and in this order.
        std::vector<std::string>* section = nullptr;
        bool seen_bottom = false, seen_top = false;
        for (std::size_t i = 3; i < eq; ++i) {
          const bool keyword = i + 1 < eq && t[i + 1].text == ":";
          if (keyword && t[i].text == "bottom" && !seen_bottom && !seen_top) {
            section = &e.bottom;
            seen_bottom = true;
            ++i;
          } else if (keyword && t[i].text == "top" && !seen_top) {
            section = &e.top;
            seen_top = true;
            ++i;
          } else if (section && t[i].text != ":") {
            section->push_back(name_at(i));
          } else {
            diag.error(line, i, "unexpected '" + t[i].text + "' in strip entry");
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        strip_coeffs.push_back({{&line, eq + 1}, *coeff});
        doc.strips.push_back(std::move(e));
        doc.strip_lines.push_back(line.number);
      }
    } else {
      diag.error(line, 0, "unknown directive '" + directive + "'");
    }
  }
  for (std::size_t i = 0; i < doc.counts.size(); ++i) doc.counts[i].count = doc.field(count_coeffs[i].second);
  for (std::size_t i = 0; i < doc.strips.size(); ++i) doc.strips[i].count = doc.field(strip_coeffs[i].second);
  diag.throw_if_any();
  return doc;
}

namespace {

std::string names(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& n : v) out += " " + n;
  return out;
}

}  // namespace

std::string serialize_count_document(const CountDocument& doc) {
  std::string out = "field " + std::to_string(doc.field.characteristic()) + "\n";
  for (const auto& g : doc.generators) out += "gen " + generator_line(g) + "\n";
  for (const auto& e : doc.counts)
    out += "count " + e.output + names(e.inputs) + " = " + std::to_string(e.count.value()) + "\n";
  for (const auto& e : doc.strips) {
    out += "strip " + e.out + " " + e.in;
    if (!e.bottom.empty()) out += " bottom:" + names(e.bottom);
    if (!e.top.empty()) out += " top:" + names(e.top);
    out += " = " + std::to_string(e.count.value()) + "\n";
  }
  return out;
}

DiskCountTable::LoadResult load_disk_table(const CountDocument& doc) {
  std::vector<Generator> dps;
  for (const auto& g : doc.generators)
    if (g.kind == GeneratorKind::DoublePointPos) dps.push_back(g);
  return DiskCountTable::load(doc.field, std::move(dps), doc.counts);
}

StripCountTable::LoadResult load_strip_table(const CountDocument& doc) {
  std::set<std::string> bottom, top;
  for (const auto& e : doc.strips) {
    bottom.insert(e.bottom.begin(), e.bottom.end());
    top.insert(e.top.begin(), e.top.end());
  }
  std::vector<Generator> chords, dp0, dp1;
  for (const auto& g : doc.generators) {
    if (g.kind == GeneratorKind::MixedChord) chords.push_back(g);
    if (g.kind != GeneratorKind::DoublePointPos) continue;
    if (bottom.contains(g.name)) dp0.push_back(g);
    if (top.contains(g.name)) dp1.push_back(g);
  }
  return StripCountTable::load(doc.field, std::move(chords), std::move(dp0), std::move(dp1), doc.strips);
}

}  // namespace cealg::io
