#include "cealg/mc_bridge.hpp"

#include <set>

#include "cealg/error.hpp"

namespace cealg {

namespace {

void require_double_points(const std::vector<Generator>& dps, std::set<std::string>& seen) {
  for (const auto& g : dps) {
    if (!is_valid_name(g.name)) throw DgaError("invalid generator name '" + g.name + "'");
    if (!seen.insert(g.name).second) throw DgaError("duplicate generator " + g.name);
    if (g.kind != GeneratorKind::DoublePointPos)
      throw DgaError("generator " + g.name + " must be a positive double point (dp+), got " + std::string(to_token(g.kind)));
    if (g.action <= 0) throw DgaError("double point " + g.name + " has non-positive action " + to_string(g.action));
  }
}

const Generator* find_in(const std::vector<Generator>& gens, const std::string& name) {
  for (const auto& g : gens)
    if (g.name == name) return &g;
  return nullptr;
}

}  // namespace

DiskCountTable::LoadResult DiskCountTable::load(Field field, std::vector<Generator> double_points,
                                                const std::vector<DiskEntry>& entries) {
  std::set<std::string> seen;
  require_double_points(double_points, seen);
  LoadResult result{DiskCountTable(field, std::move(double_points)), {}};
  auto& table = result.table;

  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    const auto& e = entries[idx];
    if (e.count.field() != field) throw FieldMismatch("disk count for " + e.output + " is over a different field");
    const Generator* out = table.find(e.output);
    if (!out) {
      result.rejected.push_back({idx, "output " + e.output + " is not a declared double point"});
      continue;
    }
    int input_degree = 0;
    Rational input_action = 0;
    std::string missing;
    for (const auto& name : e.inputs) {
      const Generator* in = table.find(name);
      if (!in) {
        missing = name;
        break;
      }
      input_degree += in->degree;
      input_action += in->action;
    }
    if (!missing.empty()) {
      result.rejected.push_back({idx, "input " + missing + " is not a declared double point"});
      continue;
    }
    const int n = static_cast<int>(e.inputs.size());
    if (out->degree - input_degree != 2 - n) {
      result.rejected.push_back({idx, "degree filter: |" + e.output + "| - sum|inputs| = " +
                                          std::to_string(out->degree - input_degree) + ", rigid disks need " +
                                          std::to_string(2 - n)});
      continue;
    }
    if (!e.count.is_zero() && out->action <= input_action) {
      result.rejected.push_back({idx, "energy filter: a(" + e.output + ") = " + to_string(out->action) +
                                          " is not greater than input action " + to_string(input_action)});
      continue;
    }
    Key key{e.output, e.inputs};
    auto [it, inserted] = table.counts_.try_emplace(key, e.count);
    if (!inserted) it->second += e.count;
    if (it->second.is_zero()) table.counts_.erase(it);
  }
  return result;
}

const Generator* DiskCountTable::find(const std::string& name) const { return find_in(double_points_, name); }

Scalar BoundingCochain::coefficient(const std::string& name) const {
  auto it = coefficients_.find(name);
  return it == coefficients_.end() ? field_.zero() : it->second;
}

void BoundingCochain::set(const std::string& name, Scalar lambda) {
  if (lambda.field() != field_) throw FieldMismatch("cochain coefficient for " + name + " is over a different field");
  if (lambda.is_zero())
    coefficients_.erase(name);
  else
    coefficients_.insert_or_assign(name, lambda);
}

void require_cochain_support(const BoundingCochain& b, const std::vector<Generator>& double_points,
                             const std::string& what) {
  for (const auto& [name, lambda] : b.coefficients()) {
    const Generator* g = find_in(double_points, name);
    if (!g) throw SupportError(what + " is nonzero on " + name + ", which is not a double point of its Lagrangian");
    if (g->degree != 1)
      throw SupportError(what + " is nonzero on " + name + " of degree " + std::to_string(g->degree) +
                         "; support must be degree-1 positive double points");
  }
}

Dga derive_ce(const DiskCountTable& table) {
  std::vector<Generator> chords;
  for (const auto& x : table.double_points())
    chords.push_back(Generator{x.name, 1 - x.degree, x.action, GeneratorKind::ReebChord});
  std::map<std::string, NcPoly> diff;
  for (const auto& [key, count] : table.counts()) {
    auto [it, inserted] = diff.try_emplace(key.first, table.field());
    it->second.add_term(Word(key.second), count);
  }
  return Dga(table.field(), 1, std::move(chords), std::move(diff));
}

std::map<std::string, Scalar> mc_residual(const DiskCountTable& table, const BoundingCochain& b) {
  if (b.field() != table.field()) throw FieldMismatch("cochain and table over different fields");
  require_cochain_support(b, table.double_points());
  std::map<std::string, Scalar> residual;
  for (const auto& [key, count] : table.counts()) {
    const auto& [output, inputs] = key;
    if (table.find(output)->degree != 2) continue;
    Scalar term = count;
    for (const auto& x : inputs) term *= b.coefficient(x);
    auto [it, inserted] = residual.try_emplace(output, table.field().zero());
    it->second += term;
  }
  return residual;
}

Augmentation eps_from_b(const BoundingCochain& b) {
  Augmentation e(b.field());
  for (const auto& [name, lambda] : b.coefficients()) e.set(name, lambda);
  return e;
}

BoundingCochain b_from_eps(const DiskCountTable& table, const Augmentation& e) {
  if (e.field() != table.field()) throw FieldMismatch("augmentation and table over different fields");
  BoundingCochain b(table.field());
  for (const auto& [name, value] : e.values()) {
    const Generator* x = table.find(name);
    if (!x) throw SupportError("augmentation is nonzero on " + name + ", which is not a chord of the CE algebra");
    if (1 - x->degree != 0)
      throw SupportError("augmentation is nonzero on " + name + " of CE degree " + std::to_string(1 - x->degree));
    b.set(name, value);
  }
  return b;
}

bool verify_prop_bc_aug(const DiskCountTable& table, const BoundingCochain& b) {
  const auto residual = mc_residual(table, b);
  const Dga ce = derive_ce(table);
  const Augmentation e = eps_from_b(b);
  for (const auto& y : table.double_points()) {
    auto it = residual.find(y.name);
    const Scalar lhs = it == residual.end() ? table.field().zero() : it->second;
    if (lhs != evaluate(e, ce.differential(y.name))) return false;
  }
  return true;
}

StripCountTable::LoadResult StripCountTable::load(Field field, std::vector<Generator> chords, std::vector<Generator> dp_l0,
                                                  std::vector<Generator> dp_l1, const std::vector<StripEntry>& entries) {
  std::set<std::string> chord_names;
  for (const auto& c : chords) {
    if (!is_valid_name(c.name)) throw DgaError("invalid generator name '" + c.name + "'");
    if (!chord_names.insert(c.name).second) throw DgaError("duplicate chord " + c.name);
    if (c.kind != GeneratorKind::MixedChord)
      throw DgaError("chord " + c.name + " must be a mixed chord, got " + std::string(to_token(c.kind)));
  }
  std::set<std::string> l0 = chord_names, l1 = chord_names;
  require_double_points(dp_l0, l0);
  require_double_points(dp_l1, l1);

  LoadResult result{StripCountTable(field, std::move(chords), std::move(dp_l0), std::move(dp_l1)), {}};
  auto& table = result.table;
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    const auto& e = entries[idx];
    if (e.count.field() != field) throw FieldMismatch("strip count is over a different field");
    const Generator* out = find_in(table.chords_, e.out);
    const Generator* in = find_in(table.chords_, e.in);
    if (!out || !in) {
      result.rejected.push_back({idx, "chord " + (!out ? e.out : e.in) + " is not a declared mixed chord"});
      continue;
    }
    int marked_degree = 0;
    std::string missing;
    for (const auto& x : e.bottom) {
      const Generator* g = find_in(table.dp_l0_, x);
      if (!g) {
        missing = x;
        break;
      }
      marked_degree += g->degree;
    }
    for (const auto& x : e.top) {
      if (!missing.empty()) break;
      const Generator* g = find_in(table.dp_l1_, x);
      if (!g) {
        missing = x;
        break;
      }
      marked_degree += g->degree;
    }
    if (!missing.empty()) {
      result.rejected.push_back({idx, "marked point " + missing + " is not a double point on its side"});
      continue;
    }
    const int marked = static_cast<int>(e.bottom.size() + e.top.size());
    const int lhs = out->degree - in->degree - marked_degree;
    if (lhs != 1 - marked) {
      result.rejected.push_back({idx, "degree filter: |" + e.out + "| - |" + e.in + "| - sum|marked| = " +
                                          std::to_string(lhs) + ", rigid strips need " + std::to_string(1 - marked)});
      continue;
    }
    Key key{e.out, e.in, e.bottom, e.top};
    auto [it, inserted] = table.counts_.try_emplace(key, e.count);
    if (!inserted) it->second += e.count;
    if (it->second.is_zero()) table.counts_.erase(it);
  }
  return result;
}

ChordMatrix::ChordMatrix(Field field, std::vector<std::string> basis)
    : field_(field), basis_(std::move(basis)), entries_(basis_.size() * basis_.size(), field.zero()) {}

std::size_t ChordMatrix::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i] == name) return i;
  throw Error("chord " + name + " is not in the basis");
}

bool ChordMatrix::is_zero() const {
  for (const auto& v : entries_)
    if (!v.is_zero()) return false;
  return true;
}

ChordMatrix operator*(const ChordMatrix& a, const ChordMatrix& b) {
  if (a.basis_ != b.basis_) throw Error("matrix product over different chord bases");
  ChordMatrix out(a.field_, a.basis_);
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Scalar aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

namespace {

std::vector<std::string> chord_basis(const StripCountTable& table) {
  std::vector<std::string> basis;
  for (const auto& c : table.chords()) basis.push_back(c.name);
  return basis;
}

}  // namespace

ChordMatrix deformed_differential(const StripCountTable& table, const BoundingCochain& b0, const BoundingCochain& b1) {
  if (b0.field() != table.field() || b1.field() != table.field())
    throw FieldMismatch("cochains and strip table over different fields");
  require_cochain_support(b0, table.dp_l0(), "b0");
  require_cochain_support(b1, table.dp_l1(), "b1");
  ChordMatrix m(table.field(), chord_basis(table));
  for (const auto& [key, count] : table.counts()) {
    const auto& [out, in, bottom, top] = key;
    Scalar weight = count;
    for (const auto& x : bottom) weight *= b0.coefficient(x);
    for (const auto& x : top) weight *= b1.coefficient(x);
    m.at(m.index_of(out), m.index_of(in)) += weight;
  }
  return m;
}

ChordMatrix augmented_differential(const StripCountTable& table, const Augmentation& e0, const Augmentation& e1) {
  ChordMatrix m(table.field(), chord_basis(table));
  const Scalar one = table.field().one();
  for (const auto& [key, count] : table.counts()) {
    const auto& [out, in, bottom, top] = key;
    const Scalar w0 = evaluate(e0, NcPoly::monomial(Word(bottom), one));
    const Scalar w1 = evaluate(e1, NcPoly::monomial(Word(top), one));
    m.at(m.index_of(out), m.index_of(in)) += count * w0 * w1;
  }
  return m;
}

ValidationReport check_squared_zero(const StripCountTable& table, const BoundingCochain& b0, const BoundingCochain& b1) {
  ValidationReport report;
  const ChordMatrix m = deformed_differential(table, b0, b1);
  const ChordMatrix sq = m * m;
  for (std::size_t r = 0; r < sq.size(); ++r)
    for (std::size_t c = 0; c < sq.size(); ++c)
      if (!sq.at(r, c).is_zero())
        report.add("m1-squared", sq.basis()[r],
                   "coefficient of " + sq.basis()[r] + " in m1(m1(" + sq.basis()[c] + ")) is " +
                       std::to_string(sq.at(r, c).value()));
  return report;
}

}  // namespace cealg
