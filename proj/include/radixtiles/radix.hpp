#pragma once

// Digit expansion by the Euclidean algorithm with cycle detection, the
// absorbing-ball bound, and the exact decision procedure for "A yields a
// radix representation with digit set D".

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "radixtiles/digits.hpp"
#include "radixtiles/errors.hpp"
#include "radixtiles/numeric.hpp"
#include "radixtiles/types.hpp"

namespace radixtiles::radix {

inline constexpr std::uint64_t kDefaultPointCap = 10'000'000;
inline constexpr std::uint64_t kDefaultStepBudget = 1'000'000;

struct RadixExpansion {
  enum class Status { Terminated, Cycle };
  IntVector input;
  std::vector<IntVector> digits;  // least-significant first
  Status status = Status::Terminated;
  // cycle data (entry measured in steps from the input state)
  std::size_t entry_index = 0;
  std::size_t period = 0;
  std::vector<IntVector> cycle_states;

  std::size_t length() const { return digits.size(); }
};

// x_{j+1} = A^{-1}(x_j - r_j) until the state reaches 0 or revisits itself.
inline RadixExpansion expand(const IntVector& x, const digits::DigitSet& d,
                             std::uint64_t max_steps = kDefaultStepBudget) {
  if (max_steps < 1) throw std::invalid_argument("expand: max_steps must be >= 1");
  if (x.size() != d.dim()) throw DimensionError("expand: dimension mismatch");
  RadixExpansion e;
  e.input = x;

  std::unordered_map<IntVector, std::size_t, VectorHash<Int>, VectorEq<Int>> seen;
  std::vector<IntVector> path;
  IntVector state = x;
  for (std::uint64_t step = 0; step <= max_steps; ++step) {
    bool zero = true;
    for (Eigen::Index i = 0; i < state.size(); ++i)
      if (state(i) != 0) zero = false;
    if (zero) {
      e.status = RadixExpansion::Status::Terminated;
      return e;
    }
    auto it = seen.find(state);
    if (it != seen.end()) {
      e.status = RadixExpansion::Status::Cycle;
      e.entry_index = it->second;
      e.period = path.size() - it->second;
      e.cycle_states.assign(path.begin() + static_cast<std::ptrdiff_t>(it->second), path.end());
      return e;
    }
    if (step == max_steps) break;
    seen.emplace(state, path.size());
    path.push_back(state);
    auto [digit, next] = digits::digit_for(state, d);
    e.digits.push_back(digit);
    state = next;
  }
  throw StepBudgetExceededError(max_steps);
}

// Exact Horner evaluation of sum_j A^j d_j; must reproduce the input.
inline IntVector reconstruct(const RadixExpansion& e, const IntMatrix& a) {
  if (e.status != RadixExpansion::Status::Terminated) throw NotTerminatedError();
  IntVector acc = IntVector::Zero(a.rows());
  for (auto it = e.digits.rbegin(); it != e.digits.rend(); ++it) acc = IntVector(a * acc + *it);
  return acc;
}

// Completeness bound for the decision procedure. m is the least power with
// a certified ||A^{-m}||_2 <= 1/2 (decided exactly); rho = 2K + s with
// K = C * sum_{i<=m} ||A^{-i}|| and s = (max_{i<=m} ||A^{-i}||) * 2K + K.
// Every digit-step orbit eventually enters the ball of radius rho and stays,
// so all eventually-periodic states lie inside it.
struct AbsorbingBall {
  double rho = 0.0;
  int m = 0;
  double digit_norm_max = 0.0;        // C
  double tail_sum = 0.0;              // K
  double max_inv_norm = 0.0;          // max_{1<=i<=m} ||A^{-i}||
  std::vector<double> inv_norms;      // ||A^{-i}|| upper bounds, i = 1..m
};

inline AbsorbingBall absorbing_ball(const digits::DigitSet& d) {
  if (!spectral::is_dilation_matrix(d.matrix))
    throw std::invalid_argument("absorbing_ball requires a dilation matrix");
  AbsorbingBall ball;

  Rat c2 = 0;  // max squared digit norm, exact
  for (const auto& dig : d.digits) {
    Rat s = 0;
    for (Eigen::Index i = 0; i < dig.size(); ++i) s += Rat(dig(i)) * Rat(dig(i));
    if (s > c2) c2 = s;
  }
  ball.digit_norm_max = numeric::nudge_up(std::sqrt(numeric::rat_upper(c2)));

  RatMatrix inv = lattice::rational_inverse(d.matrix);
  RatMatrix power = inv;
  constexpr int kMaxContractionPower = 64;
  for (int i = 1; i <= kMaxContractionPower; ++i) {
    double norm = numeric::operator_norm_upper(power);
    ball.inv_norms.push_back(norm);
    if (numeric::operator_norm_at_most_half(power)) {
      ball.m = i;
      break;
    }
    power = (power * inv).eval();
  }
  if (ball.m == 0)
    throw InternalError("no contracting power found; matrix is not expanding");

  double k = 0.0, maxn = 0.0;
  for (double norm : ball.inv_norms) {
    k += norm;
    maxn = std::max(maxn, norm);
  }
  k = numeric::nudge_up(k * ball.digit_norm_max);
  ball.tail_sum = k;
  ball.max_inv_norm = maxn;
  double slack = numeric::nudge_up(maxn * 2.0 * k + k);
  ball.rho = numeric::nudge_up(2.0 * k + slack);
  return ball;
}

struct Witness {
  IntVector state;                 // lexicographically smallest cycle state
  std::vector<IntVector> cycle;    // one full period starting at `state`
};

struct DecisionReport {
  bool yields = false;
  double ball_radius = 0.0;
  std::uint64_t points_checked = 0;
  std::vector<Witness> witnesses;
  int m_contraction = 0;
  std::uint64_t max_expansion_steps = 0;  // max N(x) over the ball, empirical
};

namespace detail {

// Digit-step machinery over a plain scalar. The int64 instantiation is used
// whenever precomputed bounds certify that no intermediate can overflow;
// arithmetic stays exact either way.
template <class S>
struct Stepper {
  Eigen::Index n;
  Matrix<S> adj;
  S det;
  Matrix<S> u;
  std::vector<S> snf_diag;
  std::vector<Vector<S>> digit_list;
  std::unordered_map<S, int> digit_by_coset;

  int digit_index_of(const Vector<S>& x) const {
    Vector<S> ux = u * x;
    S flat = S(0);
    for (Eigen::Index i = 0; i < n; ++i) {
      S r = ux(i) % snf_diag[static_cast<std::size_t>(i)];
      if (r < S(0)) r += snf_diag[static_cast<std::size_t>(i)];
      flat = flat * snf_diag[static_cast<std::size_t>(i)] + r;
    }
    return digit_by_coset.at(flat);
  }

  Vector<S> step(const Vector<S>& x, int idx) const {
    Vector<S> y = adj * (x - digit_list[static_cast<std::size_t>(idx)]);
    for (Eigen::Index i = 0; i < n; ++i) y(i) /= det;
    return y;
  }
};

template <class S>
Stepper<S> make_stepper(const digits::DigitSet& d) {
  const auto& t = *d.table;
  Stepper<S> s;
  s.n = t.n;
  auto conv = [](const Int& v) {
    if constexpr (std::is_same_v<S, Int>)
      return v;
    else
      return static_cast<S>(to_i64_checked(v));
  };
  s.adj.resize(t.n, t.n);
  s.u.resize(t.n, t.n);
  for (Eigen::Index i = 0; i < t.n; ++i)
    for (Eigen::Index j = 0; j < t.n; ++j) {
      s.adj(i, j) = conv(t.adjugate(i, j));
      s.u(i, j) = conv(t.snf.U(i, j));
    }
  s.det = conv(t.det);
  for (Eigen::Index i = 0; i < t.n; ++i) s.snf_diag.push_back(conv(t.snf.diag(i)));
  for (const auto& dig : t.digit_list) {
    Vector<S> v(t.n);
    for (Eigen::Index i = 0; i < t.n; ++i) v(i) = conv(dig(i));
    s.digit_list.push_back(std::move(v));
  }
  for (const auto& [flat, idx] : t.digit_by_coset) s.digit_by_coset.emplace(conv(flat), idx);
  return s;
}

// Memoized orbit classification across many start points. Status per state:
// terminates (with distance-to-zero for the N(x) statistic) or eventually
// cyclic. Cycles are recorded once, keyed by their lexicographically
// smallest state.
template <class S>
struct OrbitWalker {
  const Stepper<S>& stepper;
  std::uint64_t step_budget;
  struct Entry {
    bool terminates;
    std::uint64_t dist;  // steps to zero when terminates
  };
  std::unordered_map<Vector<S>, Entry, VectorHash<S>, VectorEq<S>> memo;
  std::vector<std::vector<Vector<S>>> cycles;
  std::uint64_t max_steps_seen = 0;

  explicit OrbitWalker(const Stepper<S>& st, std::uint64_t budget)
      : stepper(st), step_budget(budget) {}

  static bool is_zero(const Vector<S>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v(i) != S(0)) return false;
    return true;
  }

  // classify one start; updates memo, cycles, max_steps_seen
  void visit(Vector<S> state) {
    std::vector<Vector<S>> path;
    std::unordered_map<Vector<S>, std::size_t, VectorHash<S>, VectorEq<S>> on_path;
    bool terminates = false;
    std::uint64_t tail_dist = 0;

    for (;;) {
      if (is_zero(state)) {
        terminates = true;
        tail_dist = 0;
        break;
      }
      auto mit = memo.find(state);
      if (mit != memo.end()) {
        terminates = mit->second.terminates;
        tail_dist = mit->second.dist;
        break;
      }
      auto pit = on_path.find(state);
      if (pit != on_path.end()) {
        // new cycle: path[pit->second ..] closes on itself
        std::vector<Vector<S>> cyc(path.begin() + static_cast<std::ptrdiff_t>(pit->second),
                                   path.end());
        std::size_t best = 0;
        for (std::size_t i = 1; i < cyc.size(); ++i)
          if (lex_less<S>(cyc[i], cyc[best])) best = i;
        std::rotate(cyc.begin(), cyc.begin() + static_cast<std::ptrdiff_t>(best), cyc.end());
        cycles.push_back(std::move(cyc));
        terminates = false;
        break;
      }
      if (path.size() >= step_budget) throw StepBudgetExceededError(step_budget);
      on_path.emplace(state, path.size());
      path.push_back(state);
      state = stepper.step(state, stepper.digit_index_of(state));
    }

    for (std::size_t i = path.size(); i-- > 0;) {
      std::uint64_t dist = terminates ? tail_dist + (path.size() - i) : 0;
      memo.emplace(path[i], Entry{terminates, dist});
    }
    if (terminates && !path.empty()) {
      std::uint64_t total = tail_dist + path.size();
      max_steps_seen = std::max(max_steps_seen, total);
    }
    if (terminates && path.empty()) max_steps_seen = std::max(max_steps_seen, tail_dist);
  }

  bool start_terminates(const Vector<S>& state) {
    if (is_zero(state)) return true;
    return memo.at(state).terminates;
  }
};

inline IntVector to_int_vector(const Vector<std::int64_t>& v) {
  IntVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = Int(v(i));
  return out;
}

inline IntVector to_int_vector(const IntVector& v) { return v; }

// Lattice points with ||x||_2 <= radius, lexicographic order. The radius
// comparison is exact: ||x||^2 (integer) against ceil(radius^2).
template <class Visit>
void for_each_ball_point(Eigen::Index n, double radius, Visit&& visit) {
  const std::int64_t r = static_cast<std::int64_t>(std::floor(numeric::nudge_up(radius)));
  const double r2 = numeric::nudge_up(radius * radius);
  std::vector<std::int64_t> x(static_cast<std::size_t>(n), -r);
  for (;;) {
    double norm2 = 0;
    for (std::int64_t c : x) norm2 += static_cast<double>(c) * static_cast<double>(c);
    if (norm2 <= r2) visit(x);
    Eigen::Index pos = n - 1;
    while (pos >= 0) {
      if (x[static_cast<std::size_t>(pos)] < r) {
        ++x[static_cast<std::size_t>(pos)];
        break;
      }
      x[static_cast<std::size_t>(pos)] = -r;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace detail

// Sound and complete decision: every orbit of the digit-step map eventually
// enters the absorbing ball, so expanding every lattice point inside it
// either certifies termination everywhere or exhibits every cycle.
inline DecisionReport decide_radix(const digits::DigitSet& d,
                                   std::uint64_t cap = kDefaultPointCap) {
  AbsorbingBall ball = absorbing_ball(d);
  const Eigen::Index n = d.dim();
  DecisionReport report;
  report.ball_radius = ball.rho;
  report.m_contraction = ball.m;

  // bail out before enumerating when even the bounding box dwarfs the cap
  double box_volume = 1;
  for (Eigen::Index i = 0; i < n; ++i) box_volume *= 2.0 * std::floor(ball.rho) + 1.0;
  if (box_volume > 64.0 * static_cast<double>(cap))
    throw ResourceLimitError(
        "absorbing ball holds too many lattice points",
        static_cast<std::uint64_t>(std::min(box_volume, 1e18)), cap);

  std::uint64_t count = 0;
  detail::for_each_ball_point(n, ball.rho, [&](const std::vector<std::int64_t>&) { ++count; });
  if (count > cap)
    throw ResourceLimitError("absorbing ball holds too many lattice points", count, cap);
  report.points_checked = count;

  // all states reachable from ball starts stay within this radius
  const double orbit_radius = numeric::nudge_up(
      std::max(ball.rho, ball.max_inv_norm * ball.rho + ball.tail_sum));

  // a terminating or repeating orbit cannot visit more distinct states than
  // the orbit region holds
  double region_points = 1;
  for (Eigen::Index i = 0; i < n; ++i)
    region_points *= 2.0 * std::floor(orbit_radius) + 1.0;
  const std::uint64_t budget =
      region_points > 1e18 ? std::uint64_t(1) << 62
                           : static_cast<std::uint64_t>(region_points) + 2;

  // int64 fast path when every intermediate provably fits
  const auto& table = *d.table;
  Int max_abs = 0;
  auto bump = [&](const Int& v) {
    Int a = v < 0 ? Int(-v) : v;
    if (a > max_abs) max_abs = a;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      bump(table.adjugate(i, j));
      bump(table.snf.U(i, j));
    }
  Int digit_abs = 0;
  for (const auto& dig : d.digits)
    for (Eigen::Index i = 0; i < n; ++i) {
      Int a = dig(i) < 0 ? Int(-dig(i)) : dig(i);
      if (a > digit_abs) digit_abs = a;
    }
  bool fits_i64 = orbit_radius < 9e15;
  if (fits_i64) {
    const Int state_bound = Int(static_cast<long long>(std::ceil(orbit_radius)) + 1);
    const Int intermediate = Int(n) * max_abs * (state_bound + digit_abs);
    fits_i64 = intermediate < (Int(1) << 62) && table.q < (Int(1) << 62);
  }

  auto run = [&](auto scalar_tag) {
    using S = decltype(scalar_tag);
    auto stepper = detail::make_stepper<S>(d);
    detail::OrbitWalker<S> walker(stepper, budget);
    detail::for_each_ball_point(n, ball.rho, [&](const std::vector<std::int64_t>& pt) {
      Vector<S> v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = S(pt[static_cast<std::size_t>(i)]);
      walker.visit(v);
    });
    report.max_expansion_steps = walker.max_steps_seen;
    for (const auto& cyc : walker.cycles) {
      Witness w;
      w.state = detail::to_int_vector(cyc.front());
      for (const auto& st : cyc) w.cycle.push_back(detail::to_int_vector(st));
      report.witnesses.push_back(std::move(w));
    }
  };
  if (fits_i64)
    run(std::int64_t{});
  else
    run(Int{});

  std::sort(report.witnesses.begin(), report.witnesses.end(),
            [](const Witness& a, const Witness& b) { return lex_less<Int>(a.state, b.state); });

  // replay every witness with the exact stepper regardless of fast path
  for (const auto& w : report.witnesses) {
    IntVector state = w.state;
    for (const auto& expected : w.cycle) {
      if (!exact_equal<Int>(state, expected))
        throw InternalError("witness cycle failed exact replay");
      auto [dig, next] = digits::digit_for(state, d);
      state = next;
    }
    if (!exact_equal<Int>(state, w.state))
      throw InternalError("witness cycle does not close under replay");
  }

  report.yields = report.witnesses.empty();
  return report;
}

struct DkSet {
  int k = 0;
  std::vector<IntVector> members;
};

// All sums d_0 + A d_1 + ... + A^{k-1} d_{k-1}; exactly q^k distinct points.
inline DkSet enumerate_Dk(const digits::DigitSet& d, int k,
                          std::uint64_t cap = kDefaultPointCap) {
  if (k < 1) throw std::invalid_argument("enumerate_Dk: k must be >= 1");
  double expected = 1;
  for (int i = 0; i < k; ++i) expected *= to_double(d.q());
  if (expected > static_cast<double>(cap))
    throw ResourceLimitError("q^k exceeds the enumeration cap",
                             static_cast<std::uint64_t>(std::min(expected, 1e18)), cap);

  std::vector<IntVector> members{IntVector::Zero(d.dim())};
  for (int level = 0; level < k; ++level) {
    std::vector<IntVector> next;
    next.reserve(members.size() * d.digits.size());
    for (const auto& m : members) {
      IntVector am = d.matrix * m;
      for (const auto& dig : d.digits) next.push_back(IntVector(dig + am));
    }
    members = std::move(next);
  }

  std::unordered_map<IntVector, bool, VectorHash<Int>, VectorEq<Int>> dedup;
  for (const auto& m : members) dedup.emplace(m, true);
  if (dedup.size() != members.size())
    throw InternalError("distinct digit strings produced colliding expansions");

  return DkSet{k, std::move(members)};
}

}  // namespace radixtiles::radix
