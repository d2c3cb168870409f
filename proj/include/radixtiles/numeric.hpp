#pragma once

// Rigorous norm bounds and outward-rounded interval helpers. Every float
// produced here is an upper bound on the exact quantity it estimates, so
// downstream pruning and ball radii stay conservative.

#include <cmath>
#include <limits>

#include "radixtiles/errors.hpp"
#include "radixtiles/types.hpp"

namespace radixtiles::numeric {

inline double nudge_up(double x) {
  return x >= 0 ? x * (1.0 + 4e-12) + 1e-300 : x * (1.0 - 4e-12) + 1e-300;
}
inline double nudge_down(double x) {
  return x >= 0 ? x * (1.0 - 4e-12) - 1e-300 : x * (1.0 + 4e-12) - 1e-300;
}

inline double rat_upper(const Rat& r) { return nudge_up(to_double(r)); }
inline double rat_lower(const Rat& r) { return nudge_down(to_double(r)); }

inline Rat abs_rat(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// max row sum of |entries|
inline Rat inf_norm(const RatMatrix& m) {
  Rat best = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Rat row = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row += abs_rat(m(i, j));
    if (row > best) best = row;
  }
  return best;
}

// ||(M^T M)^16||_inf computed exactly; lambda_max(M^T M)^16 is bounded by it.
inline Rat gram16_inf_norm(const RatMatrix& m) {
  RatMatrix g = m.transpose() * m;
  for (int t = 0; t < 4; ++t) g = (g * g).eval();
  return inf_norm(g);
}

// Rigorous upper bound on the spectral norm ||M||_2, tight to ~n^(1/32).
inline double operator_norm_upper(const RatMatrix& m) {
  Rat bound = gram16_inf_norm(m);
  if (bound == 0) return 0.0;
  return nudge_up(std::pow(rat_upper(bound), 1.0 / 32.0));
}

// Exact test ||M||_2 <= 1/2, used where a float comparison could flip a
// decision on boundary cases like the squared twin-dragon matrix.
inline bool operator_norm_at_most_half(const RatMatrix& m) {
  Rat threshold = Rat(1, 4);
  for (int t = 0; t < 4; ++t) threshold *= threshold;  // (1/4)^16
  return gram16_inf_norm(m) <= threshold;
}

// Closed outward-rounded interval.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  static Interval point(double x) { return {nudge_down(x), nudge_up(x)}; }
  static Interval of(const Rat& r) { return {rat_lower(r), rat_upper(r)}; }
  Interval operator+(const Interval& o) const {
    return {nudge_down(lo + o.lo), nudge_up(hi + o.hi)};
  }
  Interval hull(const Interval& o) const {
    return {lo < o.lo ? lo : o.lo, hi > o.hi ? hi : o.hi};
  }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
};

// coefficient * [lo, hi] with outward rounding
inline Interval scale(const Rat& c, const Interval& v) {
  double cl = rat_lower(c), cu = rat_upper(c);
  double a = cl * v.lo, b = cl * v.hi, d = cu * v.lo, e = cu * v.hi;
  double lo = std::min(std::min(a, b), std::min(d, e));
  double hi = std::max(std::max(a, b), std::max(d, e));
  return {nudge_down(lo), nudge_up(hi)};
}

using IntervalBox = std::vector<Interval>;

inline IntervalBox interval_matvec(const RatMatrix& m, const IntervalBox& v) {
  IntervalBox out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Interval acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      acc = acc + scale(m(i, j), v[static_cast<std::size_t>(j)]);
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

}  // namespace radixtiles::numeric
