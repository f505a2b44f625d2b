#include "cealg/dga.hpp"

#include <algorithm>
#include <unordered_set>

#include "cealg/error.hpp"

namespace cealg {

Dga::Dga(Field field, int d_degree) : field_(field), d_degree_(d_degree), zero_(field) {}

Dga::Dga(Field field, int d_degree, std::vector<Generator> generators, std::map<std::string, NcPoly> differential)
    : field_(field), d_degree_(d_degree), generators_(std::move(generators)), zero_(field) {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& g = generators_[i];
    if (!is_valid_name(g.name)) throw DgaError("invalid generator name '" + g.name + "'");
    if (!index_.emplace(g.name, i).second) throw DgaError("duplicate generator " + g.name);
    if (auto conflict = kind_action_conflict(g)) throw DgaError(*conflict);
  }
  for (auto& [name, poly] : differential) {
    if (!index_.contains(name)) throw DgaError("differential given for undeclared generator " + name);
    if (poly.field() != field_) throw FieldMismatch("differential of " + name + " is over a different field");
    for (const auto& [w, c] : poly.terms())
      for (const auto& l : w.letters)
        if (!index_.contains(l)) throw DgaError("d(" + name + ") mentions undeclared generator " + l);
    if (!poly.is_zero()) differential_.emplace(name, std::move(poly));
  }
}

const Generator* Dga::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &generators_[it->second];
}

const Generator& Dga::generator(std::string_view name) const {
  if (const auto* g = find(name)) return *g;
  throw DgaError("undeclared generator " + std::string(name));
}

const NcPoly& Dga::differential(std::string_view name) const {
  auto it = differential_.find(std::string(name));
  return it == differential_.end() ? zero_ : it->second;
}

int Dga::degree(const Word& w) const {
  int d = 0;
  for (const auto& l : w.letters) d += generator(l).degree;
  return d;
}

Rational Dga::action(const Word& w) const {
  Rational a = 0;
  for (const auto& l : w.letters) a += generator(l).action;
  return a;
}

bool operator==(const Dga& a, const Dga& b) {
  return a.field_ == b.field_ && a.d_degree_ == b.d_degree_ && a.generators_ == b.generators_ &&
         a.differential_ == b.differential_;
}

NcPoly apply_differential(const Dga& dga, const NcPoly& q) {
  if (q.field() != dga.field()) throw FieldMismatch("polynomial and DGA over different fields");
  NcPoly out(dga.field());
  const Scalar minus_one = dga.field()(-1);
  for (const auto& [w, c] : q.terms()) {
    int prefix_degree = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto& g = dga.generator(w.letters[i]);
      const Scalar sign = (prefix_degree % 2 == 0) ? dga.field().one() : minus_one;
      for (const auto& [dw, dc] : dga.differential(g.name).terms()) {
        Word term;
        term.letters.reserve(w.size() - 1 + dw.size());
        term.letters.insert(term.letters.end(), w.letters.begin(), w.letters.begin() + static_cast<std::ptrdiff_t>(i));
        term.letters.insert(term.letters.end(), dw.letters.begin(), dw.letters.end());
        term.letters.insert(term.letters.end(), w.letters.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.letters.end());
        out.add_term(term, c * sign * dc);
      }
      prefix_degree += g.degree;
    }
  }
  return out;
}

ValidationReport validate_d_squared(const Dga& dga) {
  ValidationReport report;
  for (const auto& g : dga.generators()) {
    const auto dd = apply_differential(dga, dga.differential(g.name));
    if (!dd.is_zero()) report.add("d-squared", g.name, "d(d(" + g.name + ")) = " + to_string(dd));
  }
  return report;
}

ValidationReport validate_grading(const Dga& dga) {
  ValidationReport report;
  for (const auto& g : dga.generators()) {
    const int expected = g.degree + dga.d_degree();
    for (const auto& [w, c] : dga.differential(g.name).terms()) {
      const int actual = dga.degree(w);
      if (actual != expected)
        report.add("grading", g.name,
                   "monomial '" + to_string(w) + "' of d(" + g.name + ") has degree " + std::to_string(actual) +
                       ", expected " + std::to_string(expected));
    }
  }
  return report;
}

ValidationReport validate_action(const Dga& dga) {
  ValidationReport report;
  for (const auto& g : dga.generators()) {
    for (const auto& [w, c] : dga.differential(g.name).terms()) {
      const Rational a = dga.action(w);
      if (a >= g.action)
        report.add("action", g.name,
                   "monomial '" + to_string(w) + "' of d(" + g.name + ") has action " + to_string(a) +
                       " >= " + to_string(g.action));
    }
  }
  return report;
}

std::optional<Rational> max_action(const Dga& dga, const NcPoly& q) {
  std::optional<Rational> best;
  for (const auto& [w, c] : q.terms()) {
    Rational a = dga.action(w);
    if (!best || a > *best) best = a;
  }
  return best;
}

Dga restrict_to(const Dga& dga, const std::vector<std::string>& keep) {
  std::unordered_set<std::string> kept(keep.begin(), keep.end());
  std::vector<Generator> gens;
  std::map<std::string, NcPoly> diff;
  for (const auto& g : dga.generators()) {
    if (!kept.contains(g.name)) continue;
    gens.push_back(g);
    const auto& d = dga.differential(g.name);
    if (!d.is_zero()) diff.emplace(g.name, d);
  }
  return Dga(dga.field(), dga.d_degree(), std::move(gens), std::move(diff));
}

}  // namespace cealg
