// Acceptance run: one PASS or FAIL line per criterion. Pass criterion
// numbers as arguments to run a subset.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cealg/augmentation.hpp"
#include "cealg/cli.hpp"
#include "cealg/error.hpp"
#include "cealg/io/assignment_document.hpp"
#include "cealg/io/config_document.hpp"
#include "cealg/io/count_document.hpp"
#include "cealg/io/dga_document.hpp"
#include "cealg/io/report.hpp"
#include "cealg/mc_bridge.hpp"
#include "cealg/pearly.hpp"
#include "cealg/surgery.hpp"
#include "support/oracle.hpp"
#include "support/random_dga.hpp"
#include "support/search_oracle.hpp"
#include "support/surgery_check.hpp"
#include "support/tables.hpp"

using namespace cealg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  double limit_seconds = 0;  // 0 = no time limit

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = "first failure: " + what + "; " + detail;
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> degree_one(const std::vector<Generator>& dps) {
  std::vector<std::string> r;
  for (const auto& x : dps)
    if (x.degree == 1) r.push_back(x.name);
  return r;
}

std::map<std::string, long> as_map(const Augmentation& e) {
  std::map<std::string, long> r;
  for (const auto& [n, v] : e.values()) r[n] = v.value();
  return r;
}

/// Library residual against the direct series; absent outputs count as 0.
bool residual_matches(const DiskCountTable& table, const oracle::TableCase& t, const BoundingCochain& b,
                      const std::vector<DiskEntry>& admissible) {
  std::map<std::string, long> lambda;
  for (const auto& [n, v] : b.coefficients()) lambda[n] = v.value();
  const auto expected = oracle::mc_residual(t.field.characteristic(), admissible, lambda);
  const auto got = mc_residual(table, b);
  for (const auto& [y, v] : expected) {
    const auto it = got.find(y);
    if ((it == got.end() ? 0L : static_cast<long>(it->second.value())) != v) return false;
  }
  for (const auto& [y, v] : got)
    if (!v.is_zero() && !expected.count(y)) return false;
  return true;
}

// ---------------------------------------------------------------------------

Outcome criterion_identity() {
  Outcome o{true, "", 60};
  std::uint64_t checks = 0, failures = 0;
  const std::size_t tables = oracle::for_each_exhaustive_table([&](const oracle::TableCase& t) {
    const auto loaded = DiskCountTable::load(t.field, t.double_points, t.entries);
    if (!loaded.rejected.empty()) ++failures;
    const auto ones = degree_one(t.double_points);
    for (std::uint32_t mask = 0; mask < (1u << ones.size()); ++mask) {
      BoundingCochain b(t.field);
      for (std::size_t i = 0; i < ones.size(); ++i)
        if (mask >> i & 1) b.set(ones[i], t.field(1));
      ++checks;
      if (!verify_prop_bc_aug(loaded.table, b) || !residual_matches(loaded.table, t, b, t.entries)) ++failures;
    }
  });
  o.require(failures == 0, std::to_string(failures) + " exhaustive mismatches");

  std::mt19937_64 rng(20240601);
  std::uint64_t random_checks = 0, random_failures = 0;
  const int random_tables = 1000;
  for (int i = 0; i < random_tables; ++i) {
    const auto t = oracle::random_table(rng);
    const auto loaded = DiskCountTable::load(t.field, t.double_points, t.entries);
    if (loaded.rejected.size() != 1) ++random_failures;
    const std::vector<DiskEntry> admissible(t.entries.begin(), t.entries.end() - 1);
    const auto ones = degree_one(t.double_points);
    for (int trial = 0; trial < 8; ++trial) {
      BoundingCochain b(t.field);
      for (const auto& x : ones) b.set(x, t.field(static_cast<long>(rng() % t.field.characteristic())));
      ++random_checks;
      if (!verify_prop_bc_aug(loaded.table, b) || !residual_matches(loaded.table, t, b, admissible)) ++random_failures;
    }
  }
  o.require(random_failures == 0, std::to_string(random_failures) + " random mismatches");
  o.detail += std::to_string(tables) + " exhaustive tables, " + std::to_string(checks) + " cochains; " +
              std::to_string(random_tables) + " random tables, " + std::to_string(random_checks) + " cochains";
  return o;
}

Outcome criterion_bijection() {
  Outcome o{true, "", 60};
  std::uint64_t solutions = 0, failures = 0;
  const std::size_t tables = oracle::for_each_exhaustive_table([&](const oracle::TableCase& t) {
    const auto table = DiskCountTable::load(t.field, t.double_points, t.entries).table;
    const Dga ce = derive_ce(table);
    const auto ones = degree_one(t.double_points);

    std::set<std::map<std::string, long>> image;
    std::size_t mc = 0;
    bool ok = true;
    for (std::uint32_t mask = 0; mask < (1u << ones.size()); ++mask) {
      BoundingCochain b(t.field);
      for (std::size_t i = 0; i < ones.size(); ++i)
        if (mask >> i & 1) b.set(ones[i], t.field(1));
      const Augmentation e = eps_from_b(b);
      if (!(b_from_eps(table, e) == b)) ok = false;
      bool solves = true;
      for (const auto& [y, v] : mc_residual(table, b)) solves = solves && v.is_zero();
      if (!solves) continue;
      ++mc;
      image.insert(as_map(e));
    }

    const auto brute = oracle::all_augmentations(ce);
    const std::set<std::map<std::string, long>> augs(brute.begin(), brute.end());
    const auto listed = enumerate_augmentations(ce);
    std::vector<std::map<std::string, long>> listed_maps;
    for (const auto& e : listed.augmentations) {
      listed_maps.push_back(as_map(e));
      if (!check_augmentation(ce, e).ok()) ok = false;
      if (!(eps_from_b(b_from_eps(table, e)) == e)) ok = false;
    }
    // eps_from_b is injective on the solutions and its image is exactly the augmentations.
    if (image.size() != mc || image != augs || listed_maps != brute) ok = false;
    solutions += mc;
    if (!ok) ++failures;
  });
  o.require(failures == 0, std::to_string(failures) + " tables without a bijection");
  o.detail += std::to_string(tables) + " tables, " + std::to_string(solutions) + " Maurer-Cartan solutions matched";
  return o;
}

Outcome criterion_surgery() {
  Outcome o{true, "", 300};
  const Field fields[] = {Field(2), Field(3), Field(5)};
  int instances = 0, skipped = 0, with_augmentations = 0, quotiented = 0;
  std::uint64_t certificates = 0, failures = 0;
  for (std::uint64_t seed = 0; instances < 240; ++seed) {
    RandomSurgeryOptions opt;
    opt.k = 1 + static_cast<int>(seed % 3);
    opt.max_chords = 1 + static_cast<int>(seed / 3 % 4);
    opt.seed = seed;
    opt.field = fields[seed / 12 % 3];
    opt.order_reversing = static_cast<int>(seed % 5 == 0) + static_cast<int>(seed % 7 == 0);
    std::optional<SurgeryAlgebra> s;
    try {
      s = random_surgery_instance(opt);
    } catch (const Error&) {
      ++skipped;
      continue;
    }
    if (!validate_surgery_shape(*s).ok() || !validate_d_squared(s->full()).ok()) {
      ++skipped;
      continue;
    }
    ++instances;
    quotiented += s->pre_quotient().has_value();
    const auto bases = enumerate_augmentations(s->base_ce()).augmentations;
    with_augmentations += !bases.empty();
    for (const auto& eb : bases) {
      ++certificates;
      try {
        const auto cert = construct_surgery_augmentation(*s, eb);
        if (!cert.ok() || !verify_certificate(*s, cert, eb).ok() || !oracle::certificate_holds(*s, cert, eb))
          ++failures;
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  o.require(failures == 0, std::to_string(failures) + " certificates failed");
  o.require(with_augmentations >= 200, "fewer than 200 instances with a base augmentation");
  o.detail += std::to_string(instances) + " instances (" + std::to_string(quotiented) + " quotiented, " +
              std::to_string(skipped) + " generator refusals), " + std::to_string(certificates) +
              " certificates verified";
  return o;
}

std::string counts_line(const CounterexampleReport& r) {
  return std::to_string(r.enumerated) + " configurations, " + std::to_string(r.global_constraint_hits) +
         " meet the global constraint, " + std::to_string(r.counterexample_count) + " counterexamples, " +
         std::to_string(r.telescoping_failures) + " telescoping failures";
}

Outcome criterion_trees() {
  Outcome o{true, "", 120};
  const TreeSearchBounds b;
  const auto r = exhaustive_search_trees(b);
  const auto want = oracle::count_trees(b);
  o.require(r.counterexample_count == 0, "counterexample found");
  o.require(r.telescoping_failures == 0, "telescoping failed");
  o.require(r.enumerated == r.estimate, "enumeration differs from the estimate");
  o.require(r.enumerated == want.total && r.by_components == want.by_components &&
                r.global_constraint_hits == want.global_hits,
            "enumeration differs from the independent count");
  o.detail += counts_line(r);
  return o;
}

Outcome criterion_trajectories() {
  Outcome o{true, "", 120};
  const TrajectorySearchBounds b;
  const auto r = exhaustive_search_trajectories(b);
  const auto want = oracle::count_trajectories(b);
  o.require(r.counterexample_count == 0, "counterexample found");
  o.require(r.telescoping_failures == 0, "telescoping failed");
  o.require(r.enumerated == r.estimate, "enumeration differs from the estimate");
  o.require(r.enumerated == want.total && r.by_components == want.by_components &&
                r.global_constraint_hits == want.global_hits,
            "enumeration differs from the independent count");
  o.detail += counts_line(r);
  return o;
}

/// The part of q whose degree matches its first monomial.
NcPoly homogeneous(const Dga& a, const NcPoly& q) {
  NcPoly r(q.field());
  if (q.is_zero()) return r;
  const int deg = a.degree(q.terms().begin()->first);
  for (const auto& [w, c] : q.terms())
    if (a.degree(w) == deg) r.add_term(w, c);
  return r;
}

Outcome criterion_laws() {
  Outcome o{true, "", 0};
  std::mt19937_64 rng(777);
  const std::uint32_t primes[] = {2, 3, 5, 7};
  const int per_law = 10000;
  std::uint64_t assoc = 0, leibniz = 0, linear = 0, squared = 0, filtration = 0, nontrivial = 0;
  std::uint64_t bad_assoc = 0, bad_leibniz = 0, bad_linear = 0, bad_squared = 0, bad_filtration = 0;
  for (int round = 0; round < per_law / 20; ++round) {
    const Field f(primes[round % 4]);
    const Dga a = oracle::random_dga(rng, f, 4 + round % 6, round % 3 == 0 ? -1 : 1);
    const auto D = oracle::defs(a);
    std::vector<std::string> names;
    for (const auto& g : a.generators()) names.push_back(g.name);
    const auto rnd = [&] { return oracle::random_poly(rng, f, names, 4, 3); };
    for (int i = 0; i < 20; ++i) {
      const NcPoly p = rnd(), q = rnd(), r = rnd();

      ++assoc;
      const NcPoly left = (p * q) * r;
      if (!(left == p * (q * r)) ||
          !oracle::same(oracle::mul(oracle::mul(oracle::from(p), oracle::from(q)), oracle::from(r)), left))
        ++bad_assoc;

      ++leibniz;
      const NcPoly h = homogeneous(a, p);
      const Scalar sign = !h.is_zero() && a.degree(h.terms().begin()->first) % 2 != 0 ? f(-1) : f(1);
      const NcPoly lhs = apply_differential(a, h * q);
      if (!(lhs == apply_differential(a, h) * q + sign * (h * apply_differential(a, q))) ||
          !oracle::same(oracle::diff(D, oracle::from(h * q)), lhs))
        ++bad_leibniz;

      ++linear;
      const Scalar s = f(static_cast<long>(rng() % f.characteristic()));
      const Scalar t = f(static_cast<long>(rng() % f.characteristic()));
      if (!(apply_differential(a, s * p + t * q) == s * apply_differential(a, p) + t * apply_differential(a, q)))
        ++bad_linear;

      ++squared;
      const NcPoly dp = apply_differential(a, p);
      nontrivial += !dp.is_zero();
      if (!apply_differential(a, dp).is_zero() || !oracle::same(oracle::diff(D, oracle::from(p)), dp)) ++bad_squared;

      ++filtration;
      bool lowered = true;
      for (const auto& [w, c] : p.terms()) {
        const auto top = max_action(a, apply_differential(a, NcPoly::monomial(w, f(1))));
        if (top && !(*top < a.action(w))) lowered = false;
      }
      const auto before = max_action(a, p), after = max_action(a, dp);
      if (after && !(before && *after < *before)) lowered = false;
      if (!lowered) ++bad_filtration;
    }
  }
  o.require(bad_assoc == 0, "associativity");
  o.require(bad_leibniz == 0, "Leibniz");
  o.require(bad_linear == 0, "d-linearity");
  o.require(bad_squared == 0, "d squared");
  o.require(bad_filtration == 0, "filtration");
  o.require(std::min({assoc, leibniz, linear, squared, filtration}) >= 10000, "too few cases");
  o.detail += std::to_string(assoc) + " cases per law (" + std::to_string(nontrivial) + " with d(q) nonzero)";
  return o;
}

/// m random constraints d(y_j) in n degree-0 variables x1..xn.
Dga constraint_algebra(std::mt19937_64& rng, Field f, int n, int m, int terms, int vars_used) {
  std::vector<Generator> gens;
  std::vector<std::string> xs;
  for (int i = 1; i <= n; ++i) {
    xs.push_back("x" + std::to_string(i));
    gens.push_back(Generator{xs.back(), 0, Rational(1), GeneratorKind::ReebChord});
  }
  const std::vector<std::string> pool(xs.begin(), xs.begin() + vars_used);
  std::map<std::string, NcPoly> diff;
  for (int j = 1; j <= m; ++j) {
    const std::string y = "y" + std::to_string(j);
    gens.push_back(Generator{y, -1, Rational(100), GeneratorKind::ReebChord});
    diff.emplace(y, oracle::random_poly(rng, f, pool, terms, 3));
  }
  return Dga(f, 1, gens, diff);
}

/// Solutions over F_2 by sweeping all 2^n bit vectors, variable x_i at bit i-1.
std::uint64_t count_by_bits(const Dga& a, int n) {
  std::vector<std::vector<std::uint32_t>> constraints;
  for (const auto& [y, q] : a.differentials()) {
    std::vector<std::uint32_t> monos;
    for (const auto& [w, c] : q.terms()) {
      if (c.value() % 2 == 0) continue;
      std::uint32_t mask = 0;
      for (const auto& x : w.letters) mask |= 1u << (std::stoi(x.substr(1)) - 1);
      monos.push_back(mask);
    }
    constraints.push_back(monos);
  }
  std::uint64_t count = 0;
  for (std::uint32_t v = 0; v < (1u << n); ++v) {
    bool ok = true;
    for (const auto& monos : constraints) {
      unsigned parity = 0;
      for (auto m : monos) parity ^= (v & m) == m;
      if (parity) {
        ok = false;
        break;
      }
    }
    count += ok;
  }
  return count;
}

Outcome criterion_enumeration() {
  Outcome o{true, "", 60};
  std::mt19937_64 rng(2020);
  double slowest = 0;
  int large = 0;
  // Dense constraints over all twenty variables, then constraints touching
  // only a few, which leaves most of the tree unpruned.
  for (int vars_used : {20, 20, 20, 12, 6}) {
    const Dga a = constraint_algebra(rng, Field(2), 20, 10, 4, vars_used);
    const auto t0 = Clock::now();
    const auto r = enumerate_augmentations(a);
    slowest = std::max(slowest, seconds_since(t0));
    ++large;
    o.require(r.count == r.augmentations.size() && r.count == count_by_bits(a, 20),
              "20-variable count differs from the bit sweep");
    for (std::size_t i = 0; i < r.augmentations.size(); i += 1 + r.augmentations.size() / 500)
      o.require(check_augmentation(a, r.augmentations[i]).ok(), "listed augmentation fails its check");
  }
  o.require(slowest < 60, "a 20-variable instance took over 60 s");

  int small = 0;
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + i % 12;
    const Field f(i % 3 == 2 && n <= 8 ? 3 : 2);
    const Dga a = constraint_algebra(rng, f, n, 1 + static_cast<int>(rng() % 10), 4, n);
    const auto got = enumerate_augmentations(a);
    std::vector<std::map<std::string, long>> maps;
    for (const auto& e : got.augmentations) maps.push_back(as_map(e));
    o.require(maps == oracle::all_augmentations(a), "pruned listing differs from brute force");
    ++small;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", slowest);
  o.detail += std::to_string(large) + " instances with 20 variables (slowest " + buf + " s), " +
              std::to_string(small) + " small instances equal to brute force";
  o.limit_seconds = 0;  // the per-instance limit is checked above
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion_io() {
  Outcome o{true, "", 0};
  namespace fs = std::filesystem;
  const fs::path dir = CEALG_CORPUS_DIR;

  std::ostringstream out, err;
  const int code = run_cli({"--format", "json", "corpus", "--dir", dir.string()}, out, err);
  const auto report = io::Json::parse(out.str());
  const auto& res = report["result"];
  o.require(code == 0, "corpus run exited " + std::to_string(code) + ": " + err.str());
  o.require(res["passed"] == res["total"], "manifest entries failed");

  std::size_t checked = 0, faults = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto path = entry.path();
    const auto ext = path.extension().string();
    const std::string text = slurp(path);
    const std::string name = path.filename().string();
    try {
      if (ext == ".dga") {
        const auto doc = io::parse_dga_document(text);
        const auto again = io::parse_dga_document(io::serialize_dga_document(doc));
        o.require(again == doc, name);
        try {
          o.require(io::to_dga(again) == io::to_dga(doc), name);
        } catch (const DgaError&) {
        }
      } else if (ext == ".counts") {
        const auto doc = io::parse_count_document(text);
        const auto canon = io::serialize_count_document(doc);
        const auto again = io::parse_count_document(canon);
        o.require(io::serialize_count_document(again) == canon, name);
        o.require(again.counts.size() == doc.counts.size() && again.strips.size() == doc.strips.size(), name);
      } else if (ext == ".set") {
        const auto doc = io::parse_assignment_document(text);
        const auto e = io::to_augmentation(doc, Field(7));
        o.require(io::to_augmentation(io::parse_assignment_document(io::serialize_assignment(e)), Field(7)) == e, name);
      } else if (ext == ".cfg") {
        const auto doc = io::parse_config_document(text);
        const auto canon = io::serialize_config_document(doc);
        o.require(io::serialize_config_document(io::parse_config_document(canon)) == canon, name);
      } else {
        continue;
      }
      ++checked;
    } catch (const io::ParseFailure&) {
      ++faults;
    }
  }
  o.detail += std::to_string(res["total"].get<int>()) + " manifest entries, " + std::to_string(checked) +
              " files round-tripped, " + std::to_string(faults) + " syntax-fault files";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Maurer-Cartan residual equals the augmentation evaluation", criterion_identity},
      {"bounding cochains correspond bijectively to augmentations", criterion_bijection},
      {"surgery certificates exist and verify", criterion_surgery},
      {"tree search finds no counterexample", criterion_trees},
      {"trajectory search finds no counterexample", criterion_trajectories},
      {"algebra laws", criterion_laws},
      {"augmentation enumeration is fast and exact", criterion_enumeration},
      {"corpus diagnostics and round trips", criterion_io},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(number)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = seconds_since(t0);
    if (o.limit_seconds > 0 && secs >= o.limit_seconds) {
      o.pass = false;
      o.detail += "; exceeded " + std::to_string(static_cast<int>(o.limit_seconds)) + " s";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << number << "] " << criteria[i].first << ": " << o.detail
              << " (" << timing << ")" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
