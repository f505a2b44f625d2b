#include "cealg/augmentation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <unordered_map>

#include "cealg/error.hpp"

namespace cealg {

Scalar Augmentation::value(const std::string& name) const {
  auto it = values_.find(name);
  return it == values_.end() ? field_.zero() : it->second;
}

void Augmentation::set(const std::string& name, Scalar v) {
  if (v.field() != field_) throw FieldMismatch("augmentation value for " + name + " is over a different field");
  if (v.is_zero())
    values_.erase(name);
  else
    values_.insert_or_assign(name, v);
}

Scalar evaluate(const Augmentation& e, const NcPoly& q) {
  if (e.field() != q.field()) throw FieldMismatch("augmentation and polynomial over different fields");
  Scalar total = q.field().zero();
  for (const auto& [w, c] : q.terms()) {
    Scalar product = c;
    for (const auto& l : w.letters) {
      product *= e.value(l);
      if (product.is_zero()) break;
    }
    total += product;
  }
  return total;
}

ValidationReport check_augmentation(const Dga& dga, const Augmentation& e) {
  ValidationReport report;
  if (e.field() != dga.field()) {
    report.add("augmentation-field", "",
               "augmentation over F_" + std::to_string(e.field().characteristic()) + " but DGA over F_" +
                   std::to_string(dga.field().characteristic()));
    return report;
  }
  for (const auto& [name, v] : e.values()) {
    const auto* g = dga.find(name);
    if (!g)
      report.add("augmentation-undeclared", name, "augmentation assigns " + std::to_string(v.value()) + " to undeclared " + name);
    else if (g->degree != 0)
      report.add("augmentation-degree", name,
                 "augmentation is nonzero on " + name + " of degree " + std::to_string(g->degree));
  }
  if (!report.ok()) return report;
  for (const auto& g : dga.generators()) {
    const Scalar v = evaluate(e, dga.differential(g.name));
    if (!v.is_zero())
      report.add("augmentation", g.name, "e(d(" + g.name + ")) = " + std::to_string(v.value()));
  }
  return report;
}

std::size_t default_max_variables(Field field) {
  return static_cast<std::size_t>(std::floor(24.0 / std::log2(static_cast<double>(field.characteristic())) + 1e-9));
}

namespace {

struct CompiledTerm {
  std::uint32_t coeff;
  std::vector<std::uint32_t> vars;
};

struct Constraint {
  int level = -1;  // largest variable index it depends on
  std::vector<CompiledTerm> terms;
};

class Search {
 public:
  Search(std::uint32_t p, std::size_t n, std::vector<Constraint> constraints) : p_(p), n_(n) {
    by_level_.resize(n);
    for (auto& c : constraints) {
      if (c.level < 0) {
        if (constant_value(c) != 0) obstructed_ = true;
      } else {
        by_level_[static_cast<std::size_t>(c.level)].push_back(std::move(c));
      }
    }
  }

  bool obstructed() const { return obstructed_; }

  struct Partial {
    std::vector<std::vector<std::uint8_t>> tuples;
    std::uint64_t count = 0;
  };

  /// Enumerates completions of a fixed prefix.
  Partial run(const std::vector<std::uint8_t>& prefix, bool collect, std::size_t collect_limit) const {
    Partial out;
    std::vector<std::uint8_t> values(n_, 0);
    const std::size_t cap = !collect ? 0 : (collect_limit == 0 ? SIZE_MAX : collect_limit);
    descend(0, prefix, values, cap, out);
    return out;
  }

 private:
  std::uint32_t constant_value(const Constraint& c) const {
    std::uint32_t total = 0;
    for (const auto& t : c.terms) total = (total + t.coeff) % p_;
    return total;
  }

  bool satisfied(const Constraint& c, const std::vector<std::uint8_t>& values) const {
    std::uint32_t total = 0;
    for (const auto& t : c.terms) {
      std::uint32_t prod = t.coeff;
      for (auto v : t.vars) {
        prod = prod * values[v] % p_;
        if (prod == 0) break;
      }
      total = (total + prod) % p_;
    }
    return total == 0;
  }

  void descend(std::size_t depth, const std::vector<std::uint8_t>& prefix, std::vector<std::uint8_t>& values,
               std::size_t cap, Partial& out) const {
    if (depth == n_) {
      ++out.count;
      if (out.tuples.size() < cap) out.tuples.push_back(values);
      return;
    }
    const std::uint32_t lo = depth < prefix.size() ? prefix[depth] : 0;
    const std::uint32_t hi = depth < prefix.size() ? prefix[depth] + 1u : p_;
    for (std::uint32_t v = lo; v < hi; ++v) {
      values[depth] = static_cast<std::uint8_t>(v);
      bool ok = true;
      for (const auto& c : by_level_[depth])
        if (!satisfied(c, values)) {
          ok = false;
          break;
        }
      if (ok) descend(depth + 1, prefix, values, cap, out);
    }
    values[depth] = 0;
  }

  std::uint32_t p_;
  std::size_t n_;
  std::vector<std::vector<Constraint>> by_level_;
  bool obstructed_ = false;
};

}  // namespace

EnumerationResult enumerate_augmentations(const Dga& dga, const EnumerationOptions& options) {
  EnumerationResult result;
  const Field field = dga.field();
  const std::uint32_t p = field.characteristic();

  for (const auto& g : dga.generators())
    if (g.degree == 0) result.variables.push_back(g.name);
  std::sort(result.variables.begin(), result.variables.end());
  const std::size_t n = result.variables.size();
  const std::size_t bound = options.max_variables.value_or(default_max_variables(field));
  if (n > bound)
    throw BoundExceeded(std::to_string(n) + " degree-0 generators exceed the enumeration bound of " +
                        std::to_string(bound) + " over F_" + std::to_string(p));

  std::unordered_map<std::string, std::uint32_t> var_index;
  for (std::size_t i = 0; i < n; ++i) var_index.emplace(result.variables[i], static_cast<std::uint32_t>(i));

  std::vector<Constraint> constraints;
  for (const auto& g : dga.generators()) {
    Constraint c;
    for (const auto& [w, coeff] : dga.differential(g.name).terms()) {
      CompiledTerm t{coeff.value(), {}};
      bool vanishes = false;
      for (const auto& l : w.letters) {
        auto it = var_index.find(l);
        if (it == var_index.end()) {
          vanishes = true;  // nonzero-degree letter: augmentation value 0
          break;
        }
        t.vars.push_back(it->second);
      }
      if (vanishes) continue;
      for (auto v : t.vars) c.level = std::max(c.level, static_cast<int>(v));
      c.terms.push_back(std::move(t));
    }
    if (!c.terms.empty()) constraints.push_back(std::move(c));
  }

  Search search(p, n, std::move(constraints));
  if (search.obstructed()) return result;

  // Partition by a prefix of variable assignments; concatenating partitions in
  // prefix order preserves the global lexicographic order.
  const unsigned workers = std::max(1u, options.workers);
  std::size_t prefix_len = 0;
  std::uint64_t partitions = 1;
  while (workers > 1 && prefix_len < n && partitions < 4ull * workers) {
    ++prefix_len;
    partitions *= p;
  }
  std::vector<std::vector<std::uint8_t>> prefixes(partitions, std::vector<std::uint8_t>(prefix_len));
  for (std::uint64_t idx = 0; idx < partitions; ++idx) {
    std::uint64_t rem = idx;
    for (std::size_t d = prefix_len; d-- > 0;) {
      prefixes[idx][d] = static_cast<std::uint8_t>(rem % p);
      rem /= p;
    }
  }

  std::vector<Search::Partial> parts(partitions);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t i; (i = next.fetch_add(1)) < partitions;) parts[i] = search.run(prefixes[i], options.collect, options.collect_limit);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (auto& part : parts) {
    result.count += part.count;
    for (auto& tuple : part.tuples) {
      if (options.collect_limit != 0 && result.augmentations.size() >= options.collect_limit) break;
      Augmentation e(field);
      for (std::size_t i = 0; i < n; ++i) e.set(result.variables[i], field(tuple[i]));
      result.augmentations.push_back(std::move(e));
    }
  }
  result.truncated = result.augmentations.size() < result.count;
  return result;
}

}  // namespace cealg
