#pragma once

// Search for the smallest beta with A^beta yielding a radix representation
// using the canonical digit set of A^beta.

#include <optional>

#include "radixtiles/radix.hpp"
#include "radixtiles/spectral.hpp"

namespace radixtiles::spectral {

inline constexpr unsigned kDefaultBetaLimit = 12;

struct BetaSearch {
  unsigned beta = 0;
  digits::DigitSet digit_set;
  radix::DecisionReport decision;
  // smallest k <= k_max with sigma_min(A^k) > 2, or 0 when none found;
  // reported alongside beta since the two minima need not coincide
  unsigned mu_power = 0;
};

inline std::optional<BetaSearch> find_beta(const IntMatrix& a, unsigned k_max = kDefaultBetaLimit,
                                           std::uint64_t cap = radix::kDefaultPointCap) {
  if (!is_dilation_matrix(a)) throw std::invalid_argument("find_beta requires a dilation matrix");
  std::optional<BetaSearch> found;
  unsigned mu_power = 0;
  for (unsigned beta = 1; beta <= k_max; ++beta) {
    IntMatrix power = matrix_power(a, beta);
    bool mu_ok = mu_exceeds_two(power);
    if (mu_ok && mu_power == 0) mu_power = beta;
    if (!found) {
      digits::DigitSet d = digits::canonical_digits(power);
      radix::DecisionReport report = radix::decide_radix(d, cap);
      // mu > 2 guarantees a positive decision; disagreement is a bug
      if (mu_ok && !report.yields)
        throw InternalError("decision procedure contradicts the mu > 2 sufficiency");
      if (report.yields)
        found = BetaSearch{beta, std::move(d), std::move(report), 0};
    }
    if (found && mu_power != 0) break;
  }
  if (found) found->mu_power = mu_power;
  return found;
}

}  // namespace radixtiles::spectral
