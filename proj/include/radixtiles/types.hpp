#pragma once

// Core scalar and dense-matrix types. All lattice arithmetic is exact:
// integers are GMP-backed arbitrary precision, rationals are exact
// quotients. Floating point appears only in estimates and sampling.

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace radixtiles {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using RatMatrix = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;

inline Int numerator(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rat& r) { return boost::multiprecision::denominator(r); }

// mpz '%' truncates toward zero; digit/coset logic needs least nonnegative
// residues, so floor variants are spelled out.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int floor_mod(const Int& a, const Int& b) {
  Int r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

inline double to_double(const Int& v) { return static_cast<double>(v); }
inline double to_double(const Rat& v) { return static_cast<double>(v); }

inline std::int64_t to_i64_checked(const Int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline RatMatrix to_rational(const IntMatrix& m) { return m.cast<Rat>(); }
inline RatVector to_rational(const IntVector& v) { return v.cast<Rat>(); }

template <class Scalar>
bool exact_equal(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

template <class Scalar>
bool exact_equal(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return false;
  return true;
}

template <class Scalar>
bool lex_less(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  for (Eigen::Index i = 0; i < a.size() && i < b.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return a.size() < b.size();
}

template <class Scalar>
struct VectorHash {
  std::size_t operator()(const Vector<Scalar>& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    std::hash<Scalar> hs;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      h = h * 0x100000001b3ull ^ hs(v(i));
    return h;
  }
};

template <class Scalar>
struct VectorEq {
  bool operator()(const Vector<Scalar>& a, const Vector<Scalar>& b) const {
    return exact_equal<Scalar>(a, b);
  }
};

inline IntMatrix matrix_power(const IntMatrix& a, unsigned e) {
  IntMatrix result = IntMatrix::Identity(a.rows(), a.cols());
  IntMatrix base = a;
  while (e > 0) {
    if (e & 1u) result = (result * base).eval();
    base = (base * base).eval();
    e >>= 1u;
  }
  return result;
}

inline std::string int_to_string(const Int& v) { return v.str(); }

inline Int int_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("sign without digits: " + s);
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("not a decimal integer: " + s);
  return Int(s);
}

// Deterministic RNG helpers. mt19937_64 output is pinned by the standard;
// distributions are not, so uniform draws are built from raw bits.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // rejection sampling keeps the draw exactly uniform
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

}  // namespace radixtiles
