#pragma once

// The self-affine set T(A,D): point-cloud approximations, certified-outside
// membership, tiling-multiplicity sampling, the interior-of-zero test, and
// 2-D rasterization.
//
// Membership search works on scaled integer states: a rational query x with
// common denominator den becomes the integer vector x*den, and the branch
// step x -> A x - d maps to v -> A v - den*d with the denominator fixed.
// All pruning comparisons are exact.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "radixtiles/numeric.hpp"
#include "radixtiles/radix.hpp"

namespace radixtiles::tile {

inline constexpr int kDefaultSampleDepth = 14;
inline constexpr int kDefaultProbeDepth = 24;
inline constexpr std::uint64_t kDefaultSamples = 20000;
inline constexpr std::uint64_t kDefaultSeed = 20050228;
inline constexpr double kDefaultProbeRadius = 1.0 / 16.0;

// Rigorous upper bound on sup_{xi in T} ||xi||_2 via the geometric tail
// R_T = C * sum_{i<=m} ||A^{-i}|| / (1 - ||A^{-m}||).
inline double tile_bounding_radius_from(const radix::AbsorbingBall& ball) {
  double denom = 1.0 - ball.inv_norms[static_cast<std::size_t>(ball.m - 1)];
  if (denom <= 0) throw InternalError("contraction norm not below one");
  return numeric::nudge_up(ball.tail_sum / denom);
}

inline double tile_bounding_radius(const digits::DigitSet& d) {
  return tile_bounding_radius_from(radix::absorbing_ball(d));
}

// Immutable per-digit-set geometry shared by every tile query: the bounding
// radius, certified coordinate box containing T, a hashed cover of T by
// depth-l cells for sharp pruning, and norm caches for the distance bounds
// delta_k = R_T * ||A^{-k}||.
struct Geometry {
  digits::DigitSet digit_set;
  radix::AbsorbingBall ball;
  double radius = 0.0;  // R_T
  RatMatrix inv;
  std::vector<double> base_norms;  // ||A^{-k}||_2 upper, k = 1..base_norms.size()
  std::vector<double> box_lo, box_hi;  // T is certified to lie in this box

  // Cover of T: every point of T lies within cover_radius of some center
  // (the depth-cover_level truncation points). Centers are bucketed on a
  // grid, pre-dilated so a query touches exactly one bucket.
  int cover_level = 0;
  double cover_radius = 0.0;
  double cover_cell = 1.0;
  std::vector<double> cover_centers;  // flat, dim-strided
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> cover_buckets;

  Eigen::Index dim() const { return digit_set.dim(); }

  double inv_norm_upper(int k) const {
    if (k <= 0) return 1.0;
    const int base = static_cast<int>(base_norms.size());
    if (k <= base) return base_norms[static_cast<std::size_t>(k - 1)];
    int q = k / base, r = k % base;
    double bound = std::pow(base_norms[static_cast<std::size_t>(base - 1)], q);
    if (r > 0) bound *= base_norms[static_cast<std::size_t>(r - 1)];
    return numeric::nudge_up(bound);
  }

  std::uint64_t bucket_key(const std::vector<std::int64_t>& cell) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::int64_t c : cell) {
      std::uint64_t z = static_cast<std::uint64_t>(c);
      h = splitmix64(h) ^ (z + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
    }
    return h;
  }

  // certainly-outside test: true when no cover center lies within the
  // (slightly inflated) cover radius of x; x is then provably not in T
  bool certainly_off_cover(const double* x) const {
    if (cover_level == 0) return false;
    const std::size_t n = static_cast<std::size_t>(dim());
    std::vector<std::int64_t> cell(n);
    for (std::size_t i = 0; i < n; ++i)
      cell[i] = static_cast<std::int64_t>(std::floor(x[i] / cover_cell));
    auto it = cover_buckets.find(bucket_key(cell));
    if (it == cover_buckets.end()) return true;
    const double thr = cover_radius;
    const double thr2 = thr * thr;
    for (std::int32_t idx : it->second) {
      const double* c = cover_centers.data() + static_cast<std::size_t>(idx) * n;
      double d2 = 0;
      for (std::size_t i = 0; i < n; ++i) d2 += (x[i] - c[i]) * (x[i] - c[i]);
      if (d2 <= thr2) return false;
    }
    return true;
  }
};

inline Geometry make_geometry(const digits::DigitSet& d) {
  Geometry g;
  g.digit_set = d;
  g.ball = radix::absorbing_ball(d);
  g.radius = tile_bounding_radius_from(g.ball);
  g.inv = lattice::rational_inverse(d.matrix);

  const Eigen::Index n = d.dim();
  const int base = std::max(g.ball.m, 8);
  RatMatrix power = g.inv;
  for (int k = 1; k <= base; ++k) {
    g.base_norms.push_back(numeric::operator_norm_upper(power));
    if (k < base) power = (power * g.inv).eval();
  }

  // Box refinement: with blocks of m_box steps, T = U (A^{-m} T + offset)
  // where every offset lies in the Minkowski sum of the per-level digit
  // hulls. Interval iteration contracts once ||A^{-m_box}|| <= 1/(2 sqrt n).
  int m_box = 1;
  while (g.inv_norm_upper(m_box) > 0.5 / std::sqrt(static_cast<double>(n)) && m_box < 64)
    ++m_box;

  numeric::IntervalBox offsets(static_cast<std::size_t>(n), numeric::Interval{0.0, 0.0});
  RatMatrix p = g.inv;
  for (int level = 1; level <= m_box; ++level) {
    numeric::IntervalBox hull;
    bool first = true;
    for (const auto& dig : d.digits) {
      RatVector pd = p * to_rational(dig);
      if (first) {
        hull.resize(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
          hull[static_cast<std::size_t>(i)] = numeric::Interval::of(pd(i));
        first = false;
      } else {
        for (Eigen::Index i = 0; i < n; ++i)
          hull[static_cast<std::size_t>(i)] =
              hull[static_cast<std::size_t>(i)].hull(numeric::Interval::of(pd(i)));
      }
    }
    for (Eigen::Index i = 0; i < n; ++i)
      offsets[static_cast<std::size_t>(i)] =
          offsets[static_cast<std::size_t>(i)] + hull[static_cast<std::size_t>(i)];
    if (level < m_box) p = (p * g.inv).eval();
  }

  RatMatrix block = p;  // A^{-m_box}
  numeric::IntervalBox box(static_cast<std::size_t>(n),
                           numeric::Interval{-g.radius, g.radius});
  for (int iter = 0; iter < 128; ++iter) {
    numeric::IntervalBox mapped = numeric::interval_matvec(block, box);
    for (Eigen::Index i = 0; i < n; ++i) {
      numeric::Interval next = mapped[static_cast<std::size_t>(i)] +
                               offsets[static_cast<std::size_t>(i)];
      // intersect with the initial ball box; T lies in both
      next.lo = std::max(next.lo, -g.radius);
      next.hi = std::min(next.hi, g.radius);
      box[static_cast<std::size_t>(i)] = next;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    g.box_lo.push_back(box[static_cast<std::size_t>(i)].lo);
    g.box_hi.push_back(box[static_cast<std::size_t>(i)].hi);
  }

  // Depth-l cover of T: the q^l truncation points are within
  // delta_l = R_T * ||A^{-l}|| of every point of T, so a state farther than
  // that from all of them is certainly outside. Keeps the Candidate band of
  // depth-k searches at ~||A^{-k}|| * delta_l instead of ||A^{-k}|| * |box|.
  {
    const double qd = to_double(d.q());
    int level = 0;
    double cells = 1;
    while (level < 24 && cells * qd <= 65536.0) {
      cells *= qd;
      ++level;
    }
    // keep the double digit-string accumulation exact: |y| < 2^50
    double a_inf = 0, d_inf = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0;
      for (Eigen::Index j = 0; j < n; ++j) row += std::abs(to_double(d.matrix(i, j)));
      a_inf = std::max(a_inf, row);
    }
    for (const auto& dig : d.digits)
      for (Eigen::Index i = 0; i < n; ++i) d_inf = std::max(d_inf, std::abs(to_double(dig(i))));
    auto growth = [&](int lev) {
      double bound = 0;
      for (int t = 0; t < lev; ++t) bound = bound * a_inf + d_inf;
      return bound;
    };
    while (level > 1 && growth(level) > 9.0e14) --level;
    if (level >= 1 && growth(level) <= 9.0e14) {
      g.cover_level = level;
      // slack absorbs the double rounding of centers and queries
      g.cover_radius = numeric::nudge_up(g.radius * g.inv_norm_upper(level)) + 1e-7;
      g.cover_cell = std::max(g.cover_radius * 1.5, 1e-9);
      RatMatrix invl = RatMatrix::Identity(n, n);
      for (int i = 0; i < level; ++i) invl = (invl * g.inv).eval();
      Eigen::MatrixXd invl_d(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) invl_d(i, j) = to_double(invl(i, j));
      Eigen::MatrixXd a_d(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a_d(i, j) = to_double(d.matrix(i, j));
      // digit strings y = d_1 A^{l-1} + ... + d_l stay far below 2^53 at
      // desk scale, so the double accumulation is exact
      std::vector<Eigen::VectorXd> ys{Eigen::VectorXd::Zero(n)};
      for (int lev = 0; lev < level; ++lev) {
        std::vector<Eigen::VectorXd> next;
        next.reserve(ys.size() * d.digits.size());
        for (const auto& y : ys) {
          Eigen::VectorXd ay = a_d * y;
          for (const auto& dig : d.digits) {
            Eigen::VectorXd e = ay;
            for (Eigen::Index i = 0; i < n; ++i) e(i) += to_double(dig(i));
            next.push_back(std::move(e));
          }
        }
        ys = std::move(next);
      }
      std::vector<std::int64_t> cell(static_cast<std::size_t>(n));
      std::vector<std::int64_t> neighbor(static_cast<std::size_t>(n));
      for (std::size_t yi = 0; yi < ys.size(); ++yi) {
        Eigen::VectorXd c = invl_d * ys[yi];
        for (Eigen::Index i = 0; i < n; ++i) {
          double ci = c(i);
          g.cover_centers.push_back(ci);
          cell[static_cast<std::size_t>(i)] =
              static_cast<std::int64_t>(std::floor(ci / g.cover_cell));
        }
        // pre-dilated insert: queries within the cover radius stay in the
        // 3^n neighborhood because the bucket exceeds the radius
        std::vector<int> off(static_cast<std::size_t>(n), -1);
        for (;;) {
          for (Eigen::Index i = 0; i < n; ++i)
            neighbor[static_cast<std::size_t>(i)] =
                cell[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)];
          g.cover_buckets[g.bucket_key(neighbor)].push_back(static_cast<std::int32_t>(yi));
          Eigen::Index pos = n - 1;
          while (pos >= 0) {
            if (off[static_cast<std::size_t>(pos)] < 1) {
              ++off[static_cast<std::size_t>(pos)];
              break;
            }
            off[static_cast<std::size_t>(pos)] = -1;
            --pos;
          }
          if (pos < 0) break;
        }
      }
    }
  }
  return g;
}

struct TileApprox {
  int depth = 0;
  std::vector<RatVector> points;  // q^k exact truncations
  double cell_diameter = 0.0;     // Hausdorff bound delta_k
};

// Exact rational truncations sum_{j=1..k} A^{-j} d_j, one per digit string.
inline TileApprox tile_points(const digits::DigitSet& d, int k,
                              std::uint64_t cap = radix::kDefaultPointCap) {
  if (k < 0) throw std::invalid_argument("tile_points: negative depth");
  double expected = 1;
  for (int i = 0; i < k; ++i) expected *= to_double(d.q());
  if (expected > static_cast<double>(cap))
    throw ResourceLimitError("q^k exceeds the tile point cap",
                             static_cast<std::uint64_t>(std::min(expected, 1e18)), cap);
  Geometry g = make_geometry(d);
  TileApprox approx;
  approx.depth = k;
  approx.cell_diameter = numeric::nudge_up(g.radius * g.inv_norm_upper(k));
  std::vector<RatVector> pts{RatVector::Zero(d.dim())};
  for (int level = 0; level < k; ++level) {
    std::vector<RatVector> next;
    next.reserve(pts.size() * d.digits.size());
    for (const auto& p : pts)
      for (const auto& dig : d.digits) next.push_back(RatVector(g.inv * (p + to_rational(dig))));
    pts = std::move(next);
  }
  approx.points = std::move(pts);
  return approx;
}

struct MembershipCertificate {
  enum class Verdict { Outside, Candidate };
  Verdict verdict = Verdict::Outside;
  int depth_used = 0;
  double distance_bound = 0.0;  // Candidate: point is within this of T
};

namespace detail {

// Reusable branch searcher for one fixed denominator; the scaled matrices
// and bounds are built once and queried many times. The dead-state memo is
// per query (states from different roots rarely coincide, but revisits
// within one search do, e.g. dyadic points on cell boundaries).
template <class S>
struct MembershipSearcher {
  const Geometry& geom;
  Eigen::Index n;
  Matrix<S> a;
  std::vector<Vector<S>> digit_scaled;  // den * d
  std::vector<S> lo, hi;                // scaled box bounds, rounded outward
  S norm2_limit = S(0);                 // prune when ||v||^2 > limit
  bool norm2_usable = true;
  int max_depth = 0;
  std::unordered_map<Vector<S>, int, VectorHash<S>, VectorEq<S>> dead_at;
  int deepest = 0;
  double inv_den = 1.0;
  std::vector<double> scratch;

  static double to_double_of(const S& v) {
    if constexpr (std::is_same_v<S, Int>)
      return to_double(v);
    else
      return static_cast<double>(v);
  }

  MembershipSearcher(const Geometry& g, const Int& den) : geom(g), n(g.dim()) {
    inv_den = 1.0 / to_double(den);
    scratch.resize(static_cast<std::size_t>(n));
    const Rat den_rat(den);
    auto conv = [](const Int& x) {
      if constexpr (std::is_same_v<S, Int>)
        return x;
      else
        return static_cast<S>(to_i64_checked(x));
    };
    a.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = conv(g.digit_set.matrix(i, j));
    for (const auto& dig : g.digit_set.digits) {
      Vector<S> sd(n);
      for (Eigen::Index i = 0; i < n; ++i) sd(i) = conv(Int(dig(i) * den));
      digit_scaled.push_back(std::move(sd));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      // prune only on certainty: round the scaled box outward
      Rat blo = Rat(g.box_lo[static_cast<std::size_t>(i)]) * den_rat;
      Rat bhi = Rat(g.box_hi[static_cast<std::size_t>(i)]) * den_rat;
      lo.push_back(conv(floor_div(numerator(blo), denominator(blo))));
      hi.push_back(conv(Int(-floor_div(-numerator(bhi), denominator(bhi)))));
    }
    Rat r2 = Rat(numeric::nudge_up(g.radius * g.radius)) * den_rat * den_rat;
    Int limit = -floor_div(-numerator(r2), denominator(r2));  // ceil
    if constexpr (std::is_same_v<S, Int>) {
      norm2_limit = limit;
    } else {
      if (limit < (Int(1) << 62))
        norm2_limit = static_cast<S>(to_i64_checked(limit));
      else
        norm2_usable = false;  // box pruning alone is still sound
    }
  }

  bool inside(const Vector<S>& v) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (v(i) < lo[static_cast<std::size_t>(i)] || v(i) > hi[static_cast<std::size_t>(i)])
        return false;
    if (norm2_usable) {
      S norm2 = S(0);
      for (Eigen::Index i = 0; i < n; ++i) norm2 += v(i) * v(i);
      if (norm2 > norm2_limit) return false;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      scratch[static_cast<std::size_t>(i)] = to_double_of(v(i)) * inv_den;
    return !geom.certainly_off_cover(scratch.data());
  }

  bool alive(const Vector<S>& v, int depth) {
    if (depth > deepest) deepest = depth;
    if (depth == max_depth) return true;
    auto it = dead_at.find(v);
    if (it != dead_at.end() && it->second <= depth) return false;
    for (std::size_t di = 0; di < digit_scaled.size(); ++di) {
      Vector<S> next = a * v - digit_scaled[di];
      if (inside(next) && alive(next, depth + 1)) return true;
    }
    auto [pos, fresh] = dead_at.emplace(v, depth);
    if (!fresh && pos->second > depth) pos->second = depth;
    return false;
  }

  MembershipCertificate query(const Vector<S>& v0, int depth_limit) {
    max_depth = depth_limit;
    dead_at.clear();
    deepest = 0;
    MembershipCertificate cert;
    if (!inside(v0)) {
      cert.verdict = MembershipCertificate::Verdict::Outside;
      cert.depth_used = 0;
      return cert;
    }
    if (alive(v0, 0)) {
      cert.verdict = MembershipCertificate::Verdict::Candidate;
      cert.depth_used = depth_limit;
      cert.distance_bound = numeric::nudge_up(geom.radius * geom.inv_norm_upper(depth_limit));
    } else {
      cert.verdict = MembershipCertificate::Verdict::Outside;
      cert.depth_used = deepest;
    }
    return cert;
  }
};

inline double box_abs_max(const Geometry& g) {
  double boxmax = 0;
  for (std::size_t i = 0; i < g.box_lo.size(); ++i)
    boxmax = std::max({boxmax, std::abs(g.box_lo[i]), std::abs(g.box_hi[i])});
  return boxmax;
}

// int64 is safe when one transition from any in-box state cannot overflow
// and every in-box coordinate fits comfortably.
inline bool fits_i64_search(const Geometry& g, double den) {
  double amax = 0, dmax = 0;
  const Eigen::Index n = g.dim();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      amax = std::max(amax, std::abs(to_double(g.digit_set.matrix(i, j))));
  for (const auto& dig : g.digit_set.digits)
    for (Eigen::Index i = 0; i < n; ++i)
      dmax = std::max(dmax, std::abs(to_double(dig(i))));
  double vmax = den * (box_abs_max(g) + 1.0);
  double step = static_cast<double>(n) * amax * vmax + den * dmax;
  double norm2 = static_cast<double>(n) * vmax * vmax;
  return std::max(step, norm2) < 1.0e18;
}

inline MembershipCertificate membership_scaled(const Geometry& g, const IntVector& numer,
                                               const Int& den, int max_depth) {
  if (den < (Int(1) << 40) && fits_i64_search(g, to_double(den))) {
    // int64 only when the start itself is within box scale; larger points
    // fall through to the exact path, which rejects them at the root
    const Int vbound = den * Int(static_cast<long long>(std::ceil(box_abs_max(g) + 1.0)));
    bool coords_fit = true;
    for (Eigen::Index i = 0; i < numer.size(); ++i) {
      Int mag = numer(i) < 0 ? Int(-numer(i)) : numer(i);
      if (mag > vbound) coords_fit = false;
    }
    if (coords_fit) {
      MembershipSearcher<std::int64_t> searcher(g, den);
      Vector<std::int64_t> v(numer.size());
      for (Eigen::Index i = 0; i < numer.size(); ++i) v(i) = to_i64_checked(numer(i));
      return searcher.query(v, max_depth);
    }
  }
  MembershipSearcher<Int> searcher(g, den);
  return searcher.query(numer, max_depth);
}

}  // namespace detail

// Depth-limited search over branches x -> A x - d. Outside is exact; a
// Candidate point lies within distance_bound of T.
inline MembershipCertificate membership(const RatVector& x, const Geometry& g, int max_depth) {
  if (x.size() != g.dim()) throw DimensionError("membership: dimension mismatch");
  Int den = 1;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Int d = denominator(x(i));
    den = den / boost::multiprecision::gcd(den, d) * d;  // lcm
  }
  IntVector numer(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) numer(i) = numerator(x(i)) * (den / denominator(x(i)));
  return detail::membership_scaled(g, numer, den, max_depth);
}

inline MembershipCertificate membership(const RatVector& x, const digits::DigitSet& d,
                                        int max_depth) {
  return membership(x, make_geometry(d), max_depth);
}

struct MultiplicityEstimate {
  std::uint64_t sample_count = 0;
  double mean_multiplicity = 0.0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  int depth = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// One seeded sweep: for each sample x uniform on the dyadic grid in
// F = [-1/2, 1/2)^n, find every lattice translate T + k containing x
// (within the Candidate approximation). Returns per-sample hit lists.
struct HitSweep {
  std::vector<std::vector<std::vector<std::int64_t>>> hits;  // per sample: list of kvec
};

template <class S>
HitSweep translate_hit_sweep_impl(const Geometry& g, std::uint64_t samples, int depth,
                                  std::uint64_t seed) {
  const Eigen::Index n = g.dim();
  const std::int64_t den = 1 << 20;
  const double spec_radius = g.radius + std::sqrt(static_cast<double>(n)) / 2.0;
  const double radius2 = numeric::nudge_up(spec_radius * spec_radius);

  MembershipSearcher<S> searcher(g, Int(den));
  std::mt19937_64 rng(seed);
  HitSweep sweep;
  sweep.hits.reserve(samples);

  std::vector<std::int64_t> klo(static_cast<std::size_t>(n)), khi(static_cast<std::size_t>(n));
  Vector<S> v(n);
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::vector<std::int64_t> xnum(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
      xnum[static_cast<std::size_t>(i)] =
          static_cast<std::int64_t>(rng() >> 44) - (den >> 1);  // in [-den/2, den/2)

    // candidate translates: x - k must fall in the certified box
    for (Eigen::Index i = 0; i < n; ++i) {
      double x = static_cast<double>(xnum[static_cast<std::size_t>(i)]) / den;
      klo[static_cast<std::size_t>(i)] =
          static_cast<std::int64_t>(std::ceil(x - g.box_hi[static_cast<std::size_t>(i)] - 1e-9));
      khi[static_cast<std::size_t>(i)] =
          static_cast<std::int64_t>(std::floor(x - g.box_lo[static_cast<std::size_t>(i)] + 1e-9));
    }

    std::vector<std::vector<std::int64_t>> found;
    std::vector<std::int64_t> k(klo);
    bool open = true;
    for (Eigen::Index i = 0; i < n; ++i)
      if (klo[static_cast<std::size_t>(i)] > khi[static_cast<std::size_t>(i)]) open = false;
    while (open) {
      double knorm2 = 0;
      for (std::int64_t c : k) knorm2 += static_cast<double>(c) * static_cast<double>(c);
      if (knorm2 <= radius2) {
        for (Eigen::Index i = 0; i < n; ++i)
          v(i) = S(xnum[static_cast<std::size_t>(i)] - k[static_cast<std::size_t>(i)] * den);
        auto cert = searcher.query(v, depth);
        if (cert.verdict == MembershipCertificate::Verdict::Candidate) found.push_back(k);
      }
      Eigen::Index pos = n - 1;
      while (pos >= 0) {
        if (k[static_cast<std::size_t>(pos)] < khi[static_cast<std::size_t>(pos)]) {
          ++k[static_cast<std::size_t>(pos)];
          break;
        }
        k[static_cast<std::size_t>(pos)] = klo[static_cast<std::size_t>(pos)];
        --pos;
      }
      if (pos < 0) break;
    }
    sweep.hits.push_back(std::move(found));
  }
  return sweep;
}

inline HitSweep translate_hit_sweep(const Geometry& g, std::uint64_t samples, int depth,
                                    std::uint64_t seed) {
  if (fits_i64_search(g, static_cast<double>(1 << 20)))
    return translate_hit_sweep_impl<std::int64_t>(g, samples, depth, seed);
  return translate_hit_sweep_impl<Int>(g, samples, depth, seed);
}

}  // namespace detail

// Sampled covering multiplicity of the translates {T + k}. Tiling under Z^n
// corresponds to mean -> 1 as depth grows.
inline MultiplicityEstimate multiplicity_estimate(const Geometry& g,
                                                  std::uint64_t samples = kDefaultSamples,
                                                  int depth = kDefaultSampleDepth,
                                                  std::uint64_t seed = kDefaultSeed) {
  auto sweep = detail::translate_hit_sweep(g, samples, depth, seed);
  MultiplicityEstimate est;
  est.sample_count = samples;
  est.depth = depth;
  est.seed = seed;
  std::uint64_t total = 0;
  est.min = UINT64_MAX;
  for (const auto& h : sweep.hits) {
    total += h.size();
    est.min = std::min<std::uint64_t>(est.min, h.size());
    est.max = std::max<std::uint64_t>(est.max, h.size());
  }
  if (samples == 0) est.min = 0;
  est.mean_multiplicity = samples ? static_cast<double>(total) / static_cast<double>(samples) : 0.0;
  return est;
}

inline MultiplicityEstimate multiplicity_estimate(const digits::DigitSet& d,
                                                  std::uint64_t samples = kDefaultSamples,
                                                  int depth = kDefaultSampleDepth,
                                                  std::uint64_t seed = kDefaultSeed) {
  return multiplicity_estimate(make_geometry(d), samples, depth, seed);
}

enum class InteriorVerdict {
  InteriorByTheorem,
  BoundaryByTheorem,
  LikelyInterior,
  LikelyBoundary,
  Inconclusive,
};

struct ProbeResult {
  int probes = 0;
  int outside = 0;
  bool all_candidate() const { return probes > 0 && outside == 0; }
};

// Grid probe of points with norm <= probe_radius around the origin.
inline ProbeResult numeric_interior_probe(const Geometry& g, int depth, double probe_radius) {
  const Eigen::Index n = g.dim();
  ProbeResult result;
  if (probe_radius <= 0) return result;
  const Rat step = Rat(probe_radius) / 2;  // doubles are dyadic, so exact
  std::vector<int> idx(static_cast<std::size_t>(n), -2);
  for (;;) {
    double norm2 = 0;
    for (int c : idx) norm2 += static_cast<double>(c) * static_cast<double>(c);
    if (norm2 <= 4.0 + 1e-9) {
      RatVector x(n);
      for (Eigen::Index i = 0; i < n; ++i) x(i) = step * idx[static_cast<std::size_t>(i)];
      ++result.probes;
      auto cert = membership(x, g, depth);
      if (cert.verdict == MembershipCertificate::Verdict::Outside) ++result.outside;
    }
    Eigen::Index pos = n - 1;
    while (pos >= 0) {
      if (idx[static_cast<std::size_t>(pos)] < 2) {
        ++idx[static_cast<std::size_t>(pos)];
        break;
      }
      idx[static_cast<std::size_t>(pos)] = -2;
      --pos;
    }
    if (pos < 0) break;
  }
  return result;
}

// Combines already-computed pieces into the verdict; the exact theorem
// paths take precedence over the numeric probe.
inline InteriorVerdict interior_verdict_from(const std::optional<bool>& decide_yields,
                                             const std::optional<double>& multiplicity_mean,
                                             const ProbeResult& probe) {
  if (decide_yields.has_value()) {
    if (*decide_yields) return InteriorVerdict::InteriorByTheorem;
    if (multiplicity_mean.has_value() && std::abs(*multiplicity_mean - 1.0) <= 0.05)
      return InteriorVerdict::BoundaryByTheorem;
  }
  if (probe.probes == 0) return InteriorVerdict::Inconclusive;
  return probe.all_candidate() ? InteriorVerdict::LikelyInterior
                               : InteriorVerdict::LikelyBoundary;
}

inline InteriorVerdict interior_zero_test(const digits::DigitSet& d,
                                          int depth = kDefaultProbeDepth,
                                          double probe_radius = kDefaultProbeRadius,
                                          std::uint64_t cap = radix::kDefaultPointCap,
                                          std::uint64_t samples = kDefaultSamples,
                                          std::uint64_t seed = kDefaultSeed) {
  Geometry g = make_geometry(d);
  std::optional<bool> yields;
  std::optional<double> mean;
  try {
    yields = radix::decide_radix(d, cap).yields;
    if (!*yields)
      mean = multiplicity_estimate(g, samples, kDefaultSampleDepth, seed).mean_multiplicity;
  } catch (const ResourceLimitError&) {
    // fall through to the numeric probe
  }
  if (yields.has_value() && *yields) return InteriorVerdict::InteriorByTheorem;
  if (yields.has_value() && mean.has_value() && std::abs(*mean - 1.0) <= 0.05)
    return InteriorVerdict::BoundaryByTheorem;
  return interior_verdict_from(yields, mean, numeric_interior_probe(g, depth, probe_radius));
}

struct Window {
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
};

struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 0 = tile, 255 = background

  std::uint64_t filled() const {
    std::uint64_t c = 0;
    for (auto p : pixels)
      if (p == 0) ++c;
    return c;
  }
};

// Rasterizes the depth-k point cloud; deterministic for fixed inputs.
inline Raster render_tile_2d(const digits::DigitSet& d, int k, int width, int height,
                             std::optional<Window> window = std::nullopt,
                             std::uint64_t cap = radix::kDefaultPointCap) {
  if (d.dim() != 2) throw DimensionError("render_tile_2d requires dimension 2");
  if (width <= 0 || height <= 0) throw std::invalid_argument("raster dimensions must be positive");
  double expected = 1;
  for (int i = 0; i < k; ++i) expected *= to_double(d.q());
  if (expected > static_cast<double>(cap))
    throw ResourceLimitError("q^k exceeds the render cap",
                             static_cast<std::uint64_t>(std::min(expected, 1e18)), cap);

  Geometry g = make_geometry(d);
  Window win = window.value_or(Window{-g.radius, g.radius, -g.radius, g.radius});
  if (!(win.x1 > win.x0) || !(win.y1 > win.y0))
    throw std::invalid_argument("window must have positive extent");

  Raster raster;
  raster.width = width;
  raster.height = height;
  raster.pixels.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 255);

  // digit strings in integer form: y = d_1 + A d_2 + ... + A^{k-1} d_k,
  // point = A^{-k} y; the transform runs in double for pixel mapping only
  RatMatrix invk = RatMatrix::Identity(2, 2);
  for (int i = 0; i < k; ++i) invk = (invk * g.inv).eval();
  const double m00 = to_double(invk(0, 0)), m01 = to_double(invk(0, 1));
  const double m10 = to_double(invk(1, 0)), m11 = to_double(invk(1, 1));

  std::vector<std::array<double, 2>> pts{{0.0, 0.0}};
  std::vector<std::array<double, 2>> digit_d;
  for (const auto& dig : d.digits)
    digit_d.push_back({to_double(dig(0)), to_double(dig(1))});
  const double a00 = to_double(d.matrix(0, 0)), a01 = to_double(d.matrix(0, 1));
  const double a10 = to_double(d.matrix(1, 0)), a11 = to_double(d.matrix(1, 1));
  // integer lattice points stay exactly representable in double up to 2^53;
  // guarded by the cap and desk-scale depths
  for (int level = 0; level < k; ++level) {
    std::vector<std::array<double, 2>> next;
    next.reserve(pts.size() * digit_d.size());
    for (const auto& p : pts) {
      double ax = a00 * p[0] + a01 * p[1];
      double ay = a10 * p[0] + a11 * p[1];
      for (const auto& dd : digit_d) next.push_back({dd[0] + ax, dd[1] + ay});
    }
    pts = std::move(next);
  }

  const double sx = width / (win.x1 - win.x0);
  const double sy = height / (win.y1 - win.y0);
  for (const auto& y : pts) {
    double px = m00 * y[0] + m01 * y[1];
    double py = m10 * y[0] + m11 * y[1];
    int cx = static_cast<int>(std::floor((px - win.x0) * sx));
    int cy = static_cast<int>(std::floor((win.y1 - py) * sy));
    if (cx >= 0 && cx < width && cy >= 0 && cy < height)
      raster.pixels[static_cast<std::size_t>(cy) * width + cx] = 0;
  }
  return raster;
}

inline void write_pgm(const Raster& raster, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "P5\n" << raster.width << " " << raster.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.pixels.data()),
            static_cast<std::streamsize>(raster.pixels.size()));
}

}  // namespace radixtiles::tile
