#pragma once

// Haar-type scaling function checks for chi_T: the refinement identity,
// orthonormality of integer translates (estimated through translate
// overlaps), the low-pass symbol, and the beta-power MRA search.

#include <complex>
#include <map>
#include <random>

#include "radixtiles/beta.hpp"
#include "radixtiles/tile.hpp"

namespace radixtiles::wavelet {

inline constexpr double kRefinementPassThreshold = 0.99;
inline constexpr double kOverlapThreshold = 0.05;

// chi_T through the membership oracle: 1 for Candidate, 0 for Outside.
struct ScalingFunction {
  digits::DigitSet digit_set;
  std::shared_ptr<const tile::Geometry> geometry;
  int depth = tile::kDefaultSampleDepth;
  double normalization = 1.0;  // |T| = 1 when the translates tile

  int evaluate(const RatVector& x) const {
    auto cert = tile::membership(x, *geometry, depth);
    return cert.verdict == tile::MembershipCertificate::Verdict::Candidate ? 1 : 0;
  }
};

inline ScalingFunction make_scaling_function(const digits::DigitSet& d,
                                             int depth = tile::kDefaultSampleDepth) {
  ScalingFunction phi;
  phi.digit_set = d;
  phi.geometry = std::make_shared<tile::Geometry>(tile::make_geometry(d));
  phi.depth = depth;
  return phi;
}

struct RefinementReport {
  std::uint64_t samples = 0;
  std::uint64_t included = 0;
  std::uint64_t passed = 0;
  std::uint64_t seed = 0;
  int depth = 0;
  double pass_rate = 1.0;
};

namespace detail {

// verdicts at (depth, depth + 8); a flip marks the query boundary-ambiguous
template <class S>
std::pair<bool, bool> robust_verdict(tile::detail::MembershipSearcher<S>& searcher,
                                     const Vector<S>& v, int depth) {
  bool shallow = searcher.query(v, depth).verdict ==
                 tile::MembershipCertificate::Verdict::Candidate;
  bool deep = searcher.query(v, depth + 8).verdict ==
              tile::MembershipCertificate::Verdict::Candidate;
  return {shallow, deep};
}

template <class S>
RefinementReport refinement_impl(const tile::Geometry& g, std::uint64_t samples, int depth,
                                 std::uint64_t seed) {
  const Eigen::Index n = g.dim();
  // dyadic sampling window [-W, W)^n with W a power of two covering R_T
  int e = 0;
  while ((1 << e) < g.radius && e < 20) ++e;
  const std::int64_t den = 1 << 20;
  const int draw_bits = 21 + e;

  tile::detail::MembershipSearcher<S> searcher(g, Int(den));
  std::mt19937_64 rng(seed);

  RefinementReport report;
  report.samples = samples;
  report.seed = seed;
  report.depth = depth;

  Vector<S> v(n), child(n);
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) {
      std::int64_t m = static_cast<std::int64_t>(rng() >> (64 - draw_bits)) -
                       (std::int64_t(1) << (20 + e));
      v(i) = S(m);
    }
    bool ambiguous = false;
    auto [lhs, lhs_deep] = robust_verdict(searcher, v, depth);
    if (lhs != lhs_deep) ambiguous = true;
    int rhs_sum = 0;
    if (!ambiguous) {
      for (std::size_t di = 0; di < searcher.digit_scaled.size() && !ambiguous; ++di) {
        child = searcher.a * v - searcher.digit_scaled[di];
        auto [c, c_deep] = robust_verdict(searcher, child, depth);
        if (c != c_deep) ambiguous = true;
        rhs_sum += c ? 1 : 0;
      }
    }
    // translates T + d overlap in measure zero, so rhs >= 2 marks a
    // boundary point rather than a refinement failure
    if (ambiguous || rhs_sum >= 2) continue;
    ++report.included;
    if ((lhs ? 1 : 0) == rhs_sum) ++report.passed;
  }
  report.pass_rate = report.included
                         ? static_cast<double>(report.passed) / static_cast<double>(report.included)
                         : 1.0;
  return report;
}

}  // namespace detail

// Samples the identity chi_T(x) = sum_d chi_T(Ax - d) at seeded points in a
// window covering T; boundary-ambiguous samples are excluded.
inline RefinementReport refinement_check(const ScalingFunction& phi,
                                         std::uint64_t samples = tile::kDefaultSamples,
                                         int depth = tile::kDefaultSampleDepth,
                                         std::uint64_t seed = tile::kDefaultSeed) {
  const tile::Geometry& g = *phi.geometry;
  if (tile::detail::fits_i64_search(g, static_cast<double>(1 << 20)))
    return detail::refinement_impl<std::int64_t>(g, samples, depth, seed);
  return detail::refinement_impl<Int>(g, samples, depth, seed);
}

struct OrthonormalityReport {
  std::uint64_t samples = 0;
  int depth = 0;
  std::uint64_t seed = 0;
  double self_inner_product = 0.0;    // estimate of m(T)
  double max_offdiagonal = 0.0;
  // <phi, phi(. - k)> estimates, lexicographically sorted, nonzero entries
  std::vector<std::pair<std::vector<std::int64_t>, double>> table;
};

// Estimates m(T ∩ (T + k)) for every k via the periodized translate sweep:
// a sample y in F contributes one pair for each (j1, j2) with y in both
// T + j1 and T + j2, landing in the k = j1 - j2 cell.
inline OrthonormalityReport orthonormality_check(const ScalingFunction& phi,
                                                 std::uint64_t samples = tile::kDefaultSamples,
                                                 int depth = tile::kDefaultSampleDepth,
                                                 std::uint64_t seed = tile::kDefaultSeed) {
  auto sweep = tile::detail::translate_hit_sweep(*phi.geometry, samples, depth, seed);
  OrthonormalityReport report;
  report.samples = samples;
  report.depth = depth;
  report.seed = seed;

  std::map<std::vector<std::int64_t>, std::uint64_t> counts;
  for (const auto& hits : sweep.hits)
    for (const auto& j1 : hits)
      for (const auto& j2 : hits) {
        std::vector<std::int64_t> k(j1.size());
        for (std::size_t i = 0; i < k.size(); ++i) k[i] = j1[i] - j2[i];
        ++counts[k];
      }

  const std::vector<std::int64_t> zero(static_cast<std::size_t>(phi.digit_set.dim()), 0);
  for (const auto& [k, c] : counts) {
    double est = samples ? static_cast<double>(c) / static_cast<double>(samples) : 0.0;
    report.table.emplace_back(k, est);
    if (k == zero)
      report.self_inner_product = est;
    else
      report.max_offdiagonal = std::max(report.max_offdiagonal, est);
  }
  return report;
}

// m0(xi) = q^{-1} sum_d exp(-2 pi i <d, xi>)
inline std::complex<double> lowpass_symbol(const digits::DigitSet& d,
                                           const std::vector<double>& xi) {
  if (static_cast<Eigen::Index>(xi.size()) != d.dim())
    throw DimensionError("lowpass_symbol: frequency dimension mismatch");
  std::complex<double> acc(0.0, 0.0);
  for (const auto& dig : d.digits) {
    double dot = 0;
    for (Eigen::Index i = 0; i < d.dim(); ++i)
      dot += to_double(dig(i)) * xi[static_cast<std::size_t>(i)];
    double angle = -2.0 * M_PI * dot;
    acc += std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return acc / to_double(d.q());
}

struct MRAReport {
  unsigned beta = 0;
  unsigned mu_power = 0;  // smallest k with sigma_min(A^k) > 2, 0 if none found
  digits::DigitSet digit_set;
  radix::DecisionReport decision;
  RefinementReport refinement;
  OrthonormalityReport orthonormality;
  bool verdict = false;
  // MRA density and trivial-intersection axioms follow from scaling-function
  // theory once the translates are orthonormal; they are not desk-checked.
  static constexpr const char* kAxiomNote =
      "density and trivial-intersection axioms implied by theory, not checked";
};

// Finds the smallest beta with a positive decision for A^beta and verifies
// the scaling-function properties of chi_T at that power.
inline MRAReport haar_mra(const IntMatrix& a, unsigned k_max = spectral::kDefaultBetaLimit,
                          std::uint64_t samples = tile::kDefaultSamples,
                          int depth = tile::kDefaultSampleDepth,
                          std::uint64_t seed = tile::kDefaultSeed,
                          std::uint64_t cap = radix::kDefaultPointCap) {
  auto found = spectral::find_beta(a, k_max, cap);
  if (!found) throw NoBetaFoundError(k_max);

  MRAReport report;
  report.beta = found->beta;
  report.mu_power = found->mu_power;
  report.digit_set = found->digit_set;
  report.decision = found->decision;

  ScalingFunction phi = make_scaling_function(report.digit_set, depth);
  report.refinement = refinement_check(phi, samples, depth, seed);
  report.orthonormality = orthonormality_check(phi, samples, depth, seed);
  report.verdict = report.decision.yields &&
                   report.refinement.pass_rate >= kRefinementPassThreshold &&
                   report.orthonormality.max_offdiagonal <= kOverlapThreshold;
  return report;
}

}  // namespace radixtiles::wavelet
