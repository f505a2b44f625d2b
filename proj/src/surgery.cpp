#include "cealg/surgery.hpp"

#include <algorithm>
#include <random>
#include <tuple>

namespace cealg {

QuotientError::QuotientError(std::string generator, Word witness)
    : Error("ideal of order-reversing chords is not d-closed: d(" + generator + ") has unmarked monomial '" +
            to_string(witness) + "'"),
      generator_(std::move(generator)),
      witness_(std::move(witness)) {}

namespace {

bool contains_marked(const Word& w, const std::set<std::string>& marked) {
  return std::any_of(w.letters.begin(), w.letters.end(), [&](const auto& l) { return marked.contains(l); });
}

}  // namespace

Dga quotient_order_reversing(const Dga& dga, const OrderReversingMarking& marking) {
  for (const auto& name : marking.marked)
    if (!dga.find(name)) throw DgaError("marked generator " + name + " is not declared");
  for (const auto& name : marking.marked)
    for (const auto& [w, c] : dga.differential(name).terms())
      if (!contains_marked(w, marking.marked)) throw QuotientError(name, w);

  std::vector<Generator> gens;
  std::map<std::string, NcPoly> diff;
  for (const auto& g : dga.generators()) {
    if (marking.marked.contains(g.name)) continue;
    gens.push_back(g);
    NcPoly d(dga.field());
    for (const auto& [w, c] : dga.differential(g.name).terms())
      if (!contains_marked(w, marking.marked)) d.add_term(w, c);
    if (!d.is_zero()) diff.emplace(g.name, std::move(d));
  }
  return Dga(dga.field(), dga.d_degree(), std::move(gens), std::move(diff));
}

// ---------------------------------------------------------------------------

SurgeryAlgebra::SurgeryAlgebra(Dga algebra, std::map<std::string, SurgeryLabel> labels)
    : algebra_(std::move(algebra)), labels_(std::move(labels)) {
  index_labels();
}

SurgeryAlgebra::SurgeryAlgebra(Dga algebra, std::map<std::string, SurgeryLabel> labels, Dga pre_quotient,
                               OrderReversingMarking order_reversing)
    : algebra_(std::move(algebra)),
      labels_(std::move(labels)),
      pre_quotient_(std::move(pre_quotient)),
      order_reversing_(std::move(order_reversing)) {
  index_labels();
  for (const auto& g : algebra_.generators())
    if (!pre_quotient_->find(g.name)) throw DgaError("quotient generator " + g.name + " missing from pre-quotient algebra");
}

void SurgeryAlgebra::index_labels() {
  for (auto it = labels_.begin(); it != labels_.end();) {
    const auto& [name, lab] = *it;
    if (!algebra_.find(name)) throw DgaError("surgery label on undeclared generator " + name);
    if (lab.role == ChordRole::Base) {
      it = labels_.erase(it);
      continue;
    }
    if (lab.i < 1 || (lab.role != ChordRole::A && (lab.j < 1 || lab.m < 1)))
      throw DgaError("surgery label on " + name + " has an index below 1");
    k_ = std::max({k_, lab.i, lab.role == ChordRole::A ? 0 : lab.j});
    by_index_.emplace(std::make_tuple(lab.role, lab.i, lab.role == ChordRole::A ? 0 : lab.j,
                                      lab.role == ChordRole::A ? 0 : lab.m),
                      name);
    ++it;
  }
}

SurgeryLabel SurgeryAlgebra::label(const std::string& name) const {
  auto it = labels_.find(name);
  return it == labels_.end() ? SurgeryLabel{} : it->second;
}

int SurgeryAlgebra::level(const std::string& name) const {
  const auto lab = label(name);
  return lab.role == ChordRole::Base ? k_ + 1 : lab.i;
}

std::vector<std::string> SurgeryAlgebra::base_names() const {
  std::vector<std::string> out;
  for (const auto& g : algebra_.generators())
    if (!labels_.contains(g.name)) out.push_back(g.name);
  return out;
}

Dga SurgeryAlgebra::base_ce() const { return restrict_to(algebra_, base_names()); }

std::optional<std::string> SurgeryAlgebra::a_name(int i) const {
  auto it = by_index_.find({ChordRole::A, i, 0, 0});
  return it == by_index_.end() ? std::nullopt : std::optional(it->second);
}

std::optional<std::string> SurgeryAlgebra::b_name(int i, int j, int m) const {
  auto it = by_index_.find({ChordRole::B, i, j, m});
  return it == by_index_.end() ? std::nullopt : std::optional(it->second);
}

std::optional<std::string> SurgeryAlgebra::c_name(int i, int j, int m) const {
  auto it = by_index_.find({ChordRole::C, i, j, m});
  return it == by_index_.end() ? std::nullopt : std::optional(it->second);
}

std::vector<std::pair<int, int>> SurgeryAlgebra::order(int i) const {
  std::vector<std::pair<Rational, std::pair<int, int>>> keyed;
  for (const auto& [name, lab] : labels_)
    if (lab.role == ChordRole::C && lab.i == i) keyed.push_back({algebra_.generator(name).action, {lab.j, lab.m}});
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::pair<int, int>> out;
  for (auto& [a, jm] : keyed) out.push_back(jm);
  return out;
}

// ---------------------------------------------------------------------------
// Shape validation
// ---------------------------------------------------------------------------

namespace {

class ShapeChecker {
 public:
  ShapeChecker(const SurgeryAlgebra& s, ValidationReport& report) : s_(s), dga_(s.algebra()), report_(report) {}

  void run() {
    check_labels();
    check_a_chords();
    check_distinct_actions();
    for (const auto& g : dga_.generators()) {
      check_filtration(g);
      const auto lab = s_.label(g.name);
      switch (lab.role) {
        case ChordRole::Base: check_base(g); break;
        case ChordRole::A: check_a(g); break;
        case ChordRole::B: check_b(g, lab); break;
        case ChordRole::C: check_c(g, lab); break;
      }
    }
    report_.merge(validate_action(dga_));
  }

 private:
  bool in_level(const Word& w, int level) const {
    return std::all_of(w.letters.begin(), w.letters.end(), [&](const auto& l) { return s_.level(l) >= level; });
  }
  bool in_base(const Word& w) const { return in_level(w, s_.k() + 1); }
  static Word prefix(const Word& w) { return Word(std::vector<std::string>(w.letters.begin(), w.letters.end() - 1)); }

  /// (h,l) <_i (j,m) by the actions of c^l_ih and c^m_ij.
  bool precedes(int i, int h, int l, int j, int m) const {
    const auto lhs = s_.c_name(i, h, l), rhs = s_.c_name(i, j, m);
    if (!lhs || !rhs) return false;
    return dga_.generator(*lhs).action < dga_.generator(*rhs).action;
  }

  void check_labels() {
    std::map<std::pair<int, int>, std::set<int>> b_ms, c_ms;
    std::map<std::tuple<ChordRole, int, int, int>, int> seen;
    for (const auto& [name, lab] : s_.labels()) {
      const auto& g = dga_.generator(name);
      const auto key = std::make_tuple(lab.role, lab.i, lab.role == ChordRole::A ? 0 : lab.j,
                                       lab.role == ChordRole::A ? 0 : lab.m);
      if (++seen[key] > 1) report_.add("surgery-labels", name, "duplicate surgery label index on " + name);
      const GeneratorKind expected = lab.role == ChordRole::A   ? GeneratorKind::SurgeryA
                                     : lab.role == ChordRole::B ? GeneratorKind::SurgeryB
                                                                : GeneratorKind::SurgeryC;
      if (g.kind != expected)
        report_.add("surgery-labels", name,
                    name + " is labelled " + std::string(to_token(expected)) + " but declared " +
                        std::string(to_token(g.kind)));
      if (lab.role == ChordRole::A) continue;
      if (!(lab.i < lab.j)) report_.add("surgery-labels", name, name + " needs i < j");
      (lab.role == ChordRole::B ? b_ms : c_ms)[{lab.i, lab.j}].insert(lab.m);
    }
    for (int i = 1; i <= s_.k(); ++i)
      if (!s_.a_name(i)) report_.add("surgery-labels", "a_" + std::to_string(i), "no a-chord for cocore " + std::to_string(i));
    for (const auto& g : dga_.generators())
      if (!s_.labels().contains(g.name) &&
          (g.kind == GeneratorKind::SurgeryA || g.kind == GeneratorKind::SurgeryB || g.kind == GeneratorKind::SurgeryC))
        report_.add("surgery-labels", g.name, g.name + " has a surgery kind but no surgery label");

    std::set<std::pair<int, int>> pairs;
    for (const auto& [ij, ms] : b_ms) pairs.insert(ij);
    for (const auto& [ij, ms] : c_ms) pairs.insert(ij);
    for (const auto& ij : pairs) {
      const auto& bs = b_ms[ij];
      const auto& cs = c_ms[ij];
      const std::string where = "(" + std::to_string(ij.first) + "," + std::to_string(ij.second) + ")";
      if (bs != cs) report_.add("surgery-labels", where, "b and c chords of pair " + where + " have different m ranges");
      int expect = 1;
      for (int m : cs)
        if (m != expect++) {
          report_.add("surgery-labels", where, "c chords of pair " + where + " are not numbered 1..m0");
          break;
        }
    }
  }

  void check_a_chords() {
    std::optional<Rational> common;
    for (int i = 1; i <= s_.k(); ++i) {
      const auto name = s_.a_name(i);
      if (!name) continue;
      const auto& g = dga_.generator(*name);
      if (g.degree != 0) report_.add("surgery-a", g.name, g.name + " must have degree 0, has " + std::to_string(g.degree));
      if (g.action <= 0) report_.add("surgery-a", g.name, g.name + " must have positive action");
      if (common && g.action != *common)
        report_.add("surgery-a", g.name, "a-chords must share one action; " + g.name + " has " + to_string(g.action));
      if (!common) common = g.action;
    }
  }

  void check_distinct_actions() {
    std::map<Rational, std::string> seen;
    for (const auto& [name, lab] : s_.labels()) {
      if (lab.role == ChordRole::A) continue;
      const auto& a = dga_.generator(name).action;
      auto [it, inserted] = seen.emplace(a, name);
      if (!inserted) report_.add("surgery-distinct", name, name + " and " + it->second + " share action " + to_string(a));
    }
  }

  void check_filtration(const Generator& g) {
    const int level = s_.level(g.name);
    for (const auto& [w, c] : dga_.differential(g.name).terms())
      if (!in_level(w, level))
        report_.add("filtration", g.name,
                    "monomial '" + to_string(w) + "' of d(" + g.name + ") leaves filtration level " + std::to_string(level));
  }

  void check_base(const Generator& g) {
    for (const auto& [w, c] : dga_.differential(g.name).terms())
      if (!in_base(w))
        report_.add("diff-base", g.name, "d(" + g.name + ") has monomial '" + to_string(w) + "' outside the base algebra");
  }

  void check_a(const Generator& g) {
    if (!dga_.differential(g.name).is_zero())
      report_.add("diff-a", g.name, "d(" + g.name + ") = " + to_string(dga_.differential(g.name)) + ", expected 0");
  }

  void check_b(const Generator& g, const SurgeryLabel& lab) {
    const auto a_i = s_.a_name(lab.i);
    const auto a_j = s_.a_name(lab.j);
    const auto c = s_.c_name(lab.i, lab.j, lab.m);
    const Word distinguished = (a_j && c) ? Word{*a_j, *c} : Word{};
    bool found = false;
    for (const auto& [w, coeff] : dga_.differential(g.name).terms()) {
      if (!distinguished.is_unit() && w == distinguished) {
        found = true;
        if (coeff.value() != 1)
          report_.add("diff-b-unit", g.name,
                      "coefficient of '" + to_string(w) + "' in d(" + g.name + ") is " + std::to_string(coeff.value()) +
                          ", expected 1");
        continue;
      }
      if (w.is_unit()) {
        report_.add("diff-b", g.name, "d(" + g.name + ") has a constant term");
        continue;
      }
      const auto last = s_.label(w.letters.back());
      const Word pre = prefix(w);
      if (last.role == ChordRole::A && a_i && w.letters.back() == *a_i && in_base(pre)) continue;
      if (last.role == ChordRole::B && last.i == lab.i && in_base(pre)) {
        if (!precedes(lab.i, last.j, last.m, lab.j, lab.m)) report_order(g.name, w);
        continue;
      }
      if (last.role == ChordRole::C && last.i == lab.i && in_level(pre, lab.i + 1)) {
        if (!precedes(lab.i, last.j, last.m, lab.j, lab.m)) report_order(g.name, w);
        continue;
      }
      report_.add("diff-b", g.name, "monomial '" + to_string(w) + "' of d(" + g.name + ") fits none of the b-shapes");
    }
    if (!found)
      report_.add("diff-b-unit", g.name,
                  "d(" + g.name + ") lacks the term " + (distinguished.is_unit() ? "a_j c^m_ij" : to_string(distinguished)) +
                      " with coefficient 1");
  }

  void check_c(const Generator& g, const SurgeryLabel& lab) {
    for (const auto& [w, coeff] : dga_.differential(g.name).terms()) {
      if (!w.is_unit()) {
        const auto last = s_.label(w.letters.back());
        if (last.role == ChordRole::C && last.i == lab.i && in_level(prefix(w), lab.i + 1)) {
          if (!precedes(lab.i, last.j, last.m, lab.j, lab.m)) report_order(g.name, w);
          continue;
        }
      }
      report_.add("diff-c", g.name, "monomial '" + to_string(w) + "' of d(" + g.name + ") is not of the form w c^l_ih");
    }
  }

  void report_order(const std::string& name, const Word& w) {
    report_.add("order", name,
                "monomial '" + to_string(w) + "' of d(" + name + ") ends in a chord that is not smaller in the action order");
  }

  const SurgeryAlgebra& s_;
  const Dga& dga_;
  ValidationReport& report_;
};

}  // namespace

ValidationReport validate_surgery_shape(const SurgeryAlgebra& s) {
  ValidationReport report;
  ShapeChecker(s, report).run();
  return report;
}

// ---------------------------------------------------------------------------
// Inductive construction
// ---------------------------------------------------------------------------

namespace {

Scalar evaluate_word(const Augmentation& e, const Word& w, Scalar coeff) {
  for (const auto& l : w.letters) {
    coeff *= e.value(l);
    if (coeff.is_zero()) break;
  }
  return coeff;
}

ValidationReport check_conditions(const SurgeryAlgebra& s, const Augmentation& e, const Augmentation& eb) {
  ValidationReport report;
  for (const auto& x : s.base_names())
    if (e.value(x) != eb.value(x))
      report.add("condition-1", x,
                 "e(" + x + ") = " + std::to_string(e.value(x).value()) + " differs from the base augmentation value " +
                     std::to_string(eb.value(x).value()));
  for (int i = 1; i <= s.k(); ++i) {
    const auto a = s.a_name(i);
    if (a && e.value(*a) != e.field().one())
      report.add("condition-2", *a, "e(" + *a + ") = " + std::to_string(e.value(*a).value()) + ", expected 1");
  }
  for (const auto& q : s.order_reversing().marked)
    if (!e.value(q).is_zero())
      report.add("condition-3", q, "order-reversing chord " + q + " has e = " + std::to_string(e.value(q).value()));
  return report;
}

}  // namespace

GenerationCertificate construct_surgery_augmentation(const SurgeryAlgebra& s, const Augmentation& eb) {
  ValidationReport pre = validate_surgery_shape(s);
  pre.merge(validate_d_squared(s.algebra()));
  if (pre.ok()) pre.merge(check_augmentation(s.base_ce(), eb));
  if (!pre.ok()) {
    std::string msg = "surgery construction preconditions fail:";
    for (const auto& v : pre.violations) msg += "\n  [" + v.check + "] " + v.message;
    throw PreconditionError(msg);
  }

  const Dga& dga = s.algebra();
  const Field field = dga.field();
  GenerationCertificate cert{Augmentation(field), {}, {}, {}};
  Augmentation& e = cert.augmentation;
  for (const auto& x : s.base_names()) e.set(x, eb.value(x));

  for (int i = s.k(); i >= 1; --i) {
    e.set(*s.a_name(i), field.one());
    for (const auto& [j, m] : s.order(i)) {
      const auto b = s.b_name(i, j, m);
      const auto c = s.c_name(i, j, m);
      const auto a_i = *s.a_name(i);
      // alpha-part: monomials (base word) * a_i; w-part: monomials ending in an
      // earlier c^l_ih. Both are read off d(b^m_ij), which the shape check
      // has already classified.
      Scalar alpha = field.zero(), weighted = field.zero();
      for (const auto& [w, coeff] : dga.differential(*b).terms()) {
        if (w.is_unit()) continue;
        const Word pre_word(std::vector<std::string>(w.letters.begin(), w.letters.end() - 1));
        const auto last = s.label(w.letters.back());
        if (w.letters.back() == a_i && s.label(a_i).role == ChordRole::A &&
            std::all_of(pre_word.letters.begin(), pre_word.letters.end(),
                        [&](const auto& l) { return s.label(l).role == ChordRole::Base; })) {
          alpha += evaluate_word(e, pre_word, coeff);
        } else if (last.role == ChordRole::C && last.i == i && !(last.j == j && last.m == m)) {
          weighted += evaluate_word(e, pre_word, coeff) * e.value(w.letters.back());
        }
      }
      const Scalar value = -alpha - weighted;
      if (!value.is_zero() && dga.generator(*c).degree != 0) {
        cert.degree_conflicts.push_back(*c);
        continue;
      }
      e.set(*c, value);
    }
  }

  cert.verification = check_augmentation(s.full(), e);
  cert.conditions = check_conditions(s, e, eb);
  return cert;
}

ValidationReport verify_certificate(const SurgeryAlgebra& s, const GenerationCertificate& c, const Augmentation& eb) {
  ValidationReport report = check_conditions(s, c.augmentation, eb);
  report.merge(check_augmentation(s.full(), c.augmentation));
  return report;
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

namespace {

class InstanceBuilder {
 public:
  InstanceBuilder(const RandomSurgeryOptions& o, std::uint64_t seed) : opt_(o), rng_(seed), field_(o.field) {}

  std::optional<SurgeryAlgebra> build() {
    make_base();
    make_labels();
    for (int i = opt_.k; i >= 1; --i)
      for (std::size_t pos = 0; pos < order_[i].size(); ++pos) make_pair_differentials(i, pos);
    add_order_reversing_terms();
    assign_actions();

    std::vector<Generator> gens;
    for (const auto& name : names_) gens.push_back(Generator{name, degree_.at(name), action_.at(name), kind_.at(name)});
    Dga pre(field_, 1, gens, diff_);
    std::map<std::string, SurgeryLabel> labels;
    for (const auto& [name, lab] : labels_) labels.emplace(name, lab);
    if (marked_.marked.empty()) return finish(SurgeryAlgebra(pre, labels));
    Dga quotient = quotient_order_reversing(pre, marked_);
    if (!validate_d_squared(pre).ok()) return std::nullopt;
    return finish(SurgeryAlgebra(std::move(quotient), labels, std::move(pre), marked_));
  }

 private:
  std::uint64_t roll(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }
  bool coin(std::uint64_t one_in) { return roll(one_in) == 0; }
  Scalar nonzero() { return field_(static_cast<std::int64_t>(1 + roll(field_.characteristic() - 1))); }

  void declare(const std::string& name, int degree, GeneratorKind kind) {
    names_.push_back(name);
    degree_[name] = degree;
    kind_[name] = kind;
  }

  Dga current() const {
    std::vector<Generator> gens;
    for (const auto& name : names_)
      gens.push_back(Generator{name, degree_.at(name), Rational(1), kind_.at(name)});
    return Dga(field_, 1, gens, diff_);
  }

  NcPoly d_of(const NcPoly& q) const { return apply_differential(current(), q); }

  void make_base() {
    const int n_closed = 1 + static_cast<int>(roll(3));
    const int n_u = static_cast<int>(roll(2));
    const int n_z = n_u > 0 ? static_cast<int>(roll(2)) : 0;
    const int n_y = static_cast<int>(roll(3));
    for (int r = 1; r <= n_closed; ++r) {
      declare("x" + std::to_string(r), 0, GeneratorKind::ReebChord);
      closed_x_.push_back("x" + std::to_string(r));
    }
    for (int r = 1; r <= n_u; ++r) {
      declare("u" + std::to_string(r), 1, GeneratorKind::ReebChord);
      closed_u_.push_back("u" + std::to_string(r));
    }
    for (int r = 1; r <= n_z; ++r) {
      const std::string z = "z" + std::to_string(r);
      declare(z, 0, GeneratorKind::ReebChord);
      NcPoly d = NcPoly::letter(field_, pick(closed_u_));
      if (coin(2)) d = d * NcPoly::letter(field_, pick(closed_x_));
      diff_.insert_or_assign(z, d);
      base_deg0_.push_back(z);
    }
    base_deg0_.insert(base_deg0_.end(), closed_x_.begin(), closed_x_.end());
    for (int r = 1; r <= n_y; ++r) {
      const std::string y = "y" + std::to_string(r);
      declare(y, -1, GeneratorKind::ReebChord);
      NcPoly d(field_);
      if (coin(2)) d.add_term(Word{}, nonzero());
      const int terms = 1 + static_cast<int>(roll(2));
      for (int t = 0; t < terms; ++t) d.add_term(random_word(closed_x_, 1 + roll(2)), nonzero());
      if (!d.is_zero()) diff_.insert_or_assign(y, d);
      base_neg_.push_back(y);
    }
    for (int r = 1; r <= opt_.order_reversing; ++r) {
      const std::string q = "q" + std::to_string(r);
      declare(q, r == 2 ? -1 : 0, GeneratorKind::ReebChord);
      marked_.marked.insert(q);
      if (r == 2) diff_.insert_or_assign(q, NcPoly::monomial(Word{"q1", closed_x_.front()}, field_.one()));
    }
  }

  void make_labels() {
    order_.assign(static_cast<std::size_t>(opt_.k) + 1, {});
    for (int i = 1; i <= opt_.k; ++i) {
      const std::string a = "a_" + std::to_string(i);
      declare(a, 0, GeneratorKind::SurgeryA);
      labels_[a] = SurgeryLabel{ChordRole::A, i, 0, 0};
    }
    for (int i = 1; i <= opt_.k; ++i)
      for (int j = i + 1; j <= opt_.k; ++j) {
        const int m0 = static_cast<int>(roll(static_cast<std::uint64_t>(opt_.max_chords) + 1));
        for (int m = 1; m <= m0; ++m) {
          const std::string suffix = std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(m);
          declare("b_" + suffix, -1, GeneratorKind::SurgeryB);
          declare("c_" + suffix, 0, GeneratorKind::SurgeryC);
          labels_["b_" + suffix] = SurgeryLabel{ChordRole::B, i, j, m};
          labels_["c_" + suffix] = SurgeryLabel{ChordRole::C, i, j, m};
          order_[static_cast<std::size_t>(i)].push_back({j, m});
        }
      }
    for (auto& o : order_) std::shuffle(o.begin(), o.end(), rng_);
  }

  static std::string b(int i, int j, int m) {
    return "b_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(m);
  }
  static std::string c(int i, int j, int m) {
    return "c_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(m);
  }

  const std::string& pick(const std::vector<std::string>& pool) { return pool[roll(pool.size())]; }

  Word random_word(const std::vector<std::string>& pool, std::uint64_t length) {
    Word w;
    if (pool.empty()) return w;
    for (std::uint64_t t = 0; t < length; ++t) w.letters.push_back(pick(pool));
    return w;
  }

  /// Degree-0 letters of A_{level}.
  std::vector<std::string> degree0_pool(int level) const {
    std::vector<std::string> pool = base_deg0_;
    for (const auto& [name, lab] : labels_)
      if (lab.i >= level && degree_.at(name) == 0 && lab.role != ChordRole::B) pool.push_back(name);
    return pool;
  }

  /// Degree -1 letters of A_{level}.
  std::vector<std::string> negative_pool(int level) const {
    std::vector<std::string> pool = base_neg_;
    for (const auto& [name, lab] : labels_)
      if (lab.role == ChordRole::B && lab.i >= level) pool.push_back(name);
    return pool;
  }

  NcPoly random_degree0(const std::vector<std::string>& pool) {
    NcPoly v(field_);
    if (pool.empty() || coin(3)) {
      v.add_term(Word{}, nonzero());
      return v;
    }
    v.add_term(random_word(pool, 1 + roll(2)), nonzero());
    return v;
  }

  void make_pair_differentials(int i, std::size_t pos) {
    const auto [j, m] = order_[static_cast<std::size_t>(i)][pos];
    const auto& earlier = order_[static_cast<std::size_t>(i)];
    const auto pool0 = degree0_pool(i + 1);
    const std::string a_i = "a_" + std::to_string(i), a_j = "a_" + std::to_string(j);

    // d(c) = d(W) with W = sum v * c^l_ih over earlier pairs.
    NcPoly W(field_);
    for (std::size_t p = 0; p < pos; ++p)
      if (coin(2)) {
        const auto [h, l] = earlier[p];
        W += random_degree0(pool0) * NcPoly::letter(field_, c(i, h, l));
      }
    const NcPoly dc = d_of(W);
    if (!dc.is_zero()) diff_.insert_or_assign(c(i, j, m), dc);

    // d(b) = alpha a_i + a_j (c - W) + sum d(gamma b^l_ih) + sum d(zeta c^l_ih).
    NcPoly db(field_);
    if (!coin(4)) {
      NcPoly alpha(field_);
      if (coin(2)) alpha.add_term(Word{}, nonzero());
      if (coin(2)) alpha.add_term(random_word(closed_x_, 1 + roll(2)), nonzero());
      db += alpha * NcPoly::letter(field_, a_i);
    }
    db += NcPoly::letter(field_, a_j) * (NcPoly::letter(field_, c(i, j, m)) - W);
    for (std::size_t p = 0; p < pos; ++p) {
      const auto [h, l] = earlier[p];
      if (coin(3)) db += d_of(random_degree0(base_deg0_) * NcPoly::letter(field_, b(i, h, l)));
      const auto neg = negative_pool(i + 1);
      if (!neg.empty() && coin(3)) {
        NcPoly zeta = NcPoly::letter(field_, pick(neg));
        if (coin(2)) zeta = random_degree0(pool0) * zeta;
        db += d_of(zeta * NcPoly::letter(field_, c(i, h, l)));
      }
    }
    if (!db.is_zero()) diff_.insert_or_assign(b(i, j, m), db);
  }

  void add_order_reversing_terms() {
    if (marked_.marked.empty()) return;
    // Closed terms containing a marked chord; they vanish in the quotient.
    for (const auto& [name, lab] : labels_) {
      if (lab.role == ChordRole::B && coin(2)) {
        NcPoly extra = NcPoly::monomial(Word{"q1", pick(closed_x_)}, nonzero());
        auto [it, inserted] = diff_.try_emplace(name, field_);
        it->second += extra;
      }
    }
    for (const auto& y : base_neg_)
      if (coin(2)) {
        auto [it, inserted] = diff_.try_emplace(y, field_);
        it->second += NcPoly::letter(field_, "q1");
      }
  }

  Rational max_monomial_action(const std::string& name) const {
    Rational best = 0;
    auto it = diff_.find(name);
    if (it == diff_.end()) return best;
    for (const auto& [w, coeff] : it->second.terms()) {
      Rational a = 0;
      for (const auto& l : w.letters) a += action_.at(l);
      best = std::max(best, a);
    }
    return best;
  }

  Rational step() { return Rational(1) + Rational(static_cast<long long>(roll(97)), 97); }

  void assign_actions() {
    for (const auto& name : names_) action_[name] = 0;
    for (const auto& x : closed_x_) action_[x] = Rational(4 + static_cast<long long>(roll(9)), 4);
    for (const auto& u : closed_u_) action_[u] = Rational(4 + static_cast<long long>(roll(9)), 4);
    for (const auto& q : marked_.marked) action_[q] = max_monomial_action(q) + step();
    for (const auto& z : base_deg0_)
      if (diff_.contains(z)) action_[z] = max_monomial_action(z) + step();
    for (const auto& y : base_neg_) action_[y] = max_monomial_action(y) + step();

    std::set<Rational> used;
    auto fresh = [&](Rational a) {
      while (used.contains(a)) a += Rational(1, 997);
      used.insert(a);
      return a;
    };
    std::optional<Rational> smallest;
    for (int i = opt_.k; i >= 1; --i) {
      Rational previous = 0;
      for (const auto& [j, m] : order_[static_cast<std::size_t>(i)]) {
        const Rational ac = fresh(std::max(previous, max_monomial_action(c(i, j, m))) + step());
        action_[c(i, j, m)] = ac;
        previous = ac;
        const Rational ab = fresh(max_monomial_action(b(i, j, m)) + step());
        action_[b(i, j, m)] = ab;
        smallest = smallest ? std::min({*smallest, ac, ab}) : std::min(ac, ab);
      }
    }
    const Rational epsilon = smallest ? *smallest / 1000 : Rational(1, 1000);
    for (int i = 1; i <= opt_.k; ++i) action_["a_" + std::to_string(i)] = epsilon;
  }

  std::optional<SurgeryAlgebra> finish(SurgeryAlgebra s) const {
    if (!validate_surgery_shape(s).ok()) return std::nullopt;
    if (!validate_d_squared(s.algebra()).ok()) return std::nullopt;
    if (!validate_grading(s.full()).ok()) return std::nullopt;
    return s;
  }

  const RandomSurgeryOptions& opt_;
  std::mt19937_64 rng_;
  Field field_;
  std::vector<std::string> names_;
  std::map<std::string, int> degree_;
  std::map<std::string, GeneratorKind> kind_;
  std::map<std::string, Rational> action_;
  std::map<std::string, NcPoly> diff_;
  std::map<std::string, SurgeryLabel> labels_;
  std::vector<std::vector<std::pair<int, int>>> order_;
  std::vector<std::string> closed_x_, closed_u_, base_deg0_, base_neg_;
  OrderReversingMarking marked_;
};

}  // namespace

SurgeryAlgebra random_surgery_instance(const RandomSurgeryOptions& options) {
  if (options.k < 1 || options.max_chords < 0 || options.order_reversing < 0)
    throw PreconditionError("random surgery instance needs k >= 1 and non-negative bounds");
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    InstanceBuilder builder(options, options.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(attempt));
    if (auto s = builder.build()) return std::move(*s);
  }
  throw Error("random surgery instance: no valid instance within " + std::to_string(options.max_attempts) + " attempts");
}

}  // namespace cealg
