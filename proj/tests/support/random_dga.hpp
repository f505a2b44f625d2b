#pragma once

#include <random>
#include <string>
#include <vector>

#include "cealg/dga.hpp"

namespace oracle {

/// Random graded, action-filtered DGA with d^2 = 0, built one generator at a
/// time: d(g) = d(P) + Z where P is a homogeneous polynomial in earlier
/// generators and Z is a sum of products of earlier cycles. The action of g
/// is set above every monomial of d(g).
inline cealg::Dga random_dga(std::mt19937_64& rng, cealg::Field f, int n, int d_degree = 1) {
  std::vector<cealg::Generator> gens;
  std::map<std::string, cealg::NcPoly> diff;
  std::vector<std::string> cycles;
  std::uniform_int_distribution<int> deg(-2, 2), len(1, 3), coin(0, 3);
  std::uniform_int_distribution<long> coeff(1, static_cast<long>(f.characteristic()) - 1);

  for (int i = 0; i < n; ++i) {
    const std::string name = "g" + std::to_string(i + 1);
    const int degree = deg(rng);
    cealg::Dga sofar(f, d_degree, gens, diff);
    const auto random_word = [&](const std::vector<std::string>& pool, int target) -> std::optional<cealg::Word> {
      if (pool.empty()) return target == 0 ? std::optional(cealg::Word{}) : std::nullopt;
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      for (int attempt = 0; attempt < 12; ++attempt) {
        cealg::Word w;
        const int l = len(rng);
        for (int j = 0; j < l; ++j) w.letters.push_back(pool[pick(rng)]);
        if (sofar.degree(w) == target) return w;
      }
      return std::nullopt;
    };
    std::vector<std::string> earlier;
    for (const auto& g : gens) earlier.push_back(g.name);

    cealg::NcPoly P(f), Z(f);
    for (int t = 0; t < 3; ++t)
      if (auto w = random_word(earlier, degree)) P.add_term(*w, f(coeff(rng)));
    const int target = degree + d_degree;
    if (target == 0 && coin(rng) == 0) Z.add_term(cealg::Word{}, f(coeff(rng)));
    for (int t = 0; t < 2; ++t)
      if (auto w = random_word(cycles, target); w && !w->is_unit()) Z.add_term(*w, f(coeff(rng)));
    cealg::NcPoly d = apply_differential(sofar, P) + Z;

    cealg::Rational action = 1;
    for (const auto& [w, c] : d.terms()) action = std::max(action, sofar.action(w) + 1);
    gens.push_back(cealg::Generator{name, degree, action, cealg::GeneratorKind::ReebChord});
    if (d.is_zero()) cycles.push_back(name);
    else diff.emplace(name, std::move(d));
  }
  return cealg::Dga(f, d_degree, std::move(gens), std::move(diff));
}

}  // namespace oracle
