#pragma once

// Digit sets: the canonical set A(F) ∩ Z^n for the half-open cube
// F = [-1/2, 1/2)^n, validation of user digit sets as complete residue
// systems containing 0, and the digit map x -> (digit, A^{-1}(x - digit)).

#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "radixtiles/errors.hpp"
#include "radixtiles/lattice.hpp"
#include "radixtiles/spectral.hpp"
#include "radixtiles/types.hpp"

namespace radixtiles::digits {

// Exact membership in F = [-1/2, 1/2)^n.
inline bool fundamental_domain_contains(const RatVector& f) {
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (f(i) < Rat(-1, 2) || f(i) >= Rat(1, 2)) return false;
  return true;
}

namespace detail {

// Shared immutable coset machinery for a fixed (A, D): Smith form for coset
// indexing, the adjugate for the exact digit step, and a flat-index lookup
// from coset to digit.
struct CosetTable {
  Eigen::Index n = 0;
  Int det;
  Int q;
  lattice::SmithDecomposition snf;
  IntMatrix adjugate;
  std::vector<IntVector> digit_list;
  std::unordered_map<Int, int> digit_by_coset;

  Int flatten(const IntVector& x) const {
    IntVector ux = snf.U * x;
    Int flat = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      flat = flat * snf.diag(i) + floor_mod(ux(i), snf.diag(i));
    return flat;
  }

  int digit_index_of(const IntVector& x) const {
    auto it = digit_by_coset.find(flatten(x));
    if (it == digit_by_coset.end())
      throw InternalError("coset table lookup failed; digit set is not a complete residue system");
    return it->second;
  }

  // successor = A^{-1}(x - d), exactly integral by the coset match
  IntVector step(const IntVector& x, int digit_idx) const {
    IntVector y = adjugate * (x - digit_list[static_cast<std::size_t>(digit_idx)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (y(i) % det != 0) throw InternalError("digit step is not integral");
      y(i) /= det;
    }
    return y;
  }
};

inline std::shared_ptr<const CosetTable> build_coset_table(const IntMatrix& a,
                                                           const std::vector<IntVector>& digits) {
  auto t = std::make_shared<CosetTable>();
  t->n = a.rows();
  t->det = lattice::det_exact(a);
  if (t->det == 0) throw SingularMatrixError("digit set over a singular matrix");
  t->q = t->det < 0 ? Int(-t->det) : t->det;
  t->snf = lattice::smith_normal_form(a);
  t->adjugate = lattice::adjugate(a);
  t->digit_list = digits;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i].size() != t->n) throw DimensionError("digit dimension mismatch");
    Int flat = t->flatten(digits[i]);
    auto [it, fresh] = t->digit_by_coset.emplace(flat, static_cast<int>(i));
    if (!fresh) throw DuplicateCosetError(static_cast<std::size_t>(it->second), i);
  }
  return t;
}

}  // namespace detail

struct DigitSet {
  IntMatrix matrix;
  std::vector<IntVector> digits;
  bool canonical = false;
  std::shared_ptr<const detail::CosetTable> table;

  Eigen::Index dim() const { return matrix.rows(); }
  Int q() const { return table->q; }
};

// Validates |D| = q, pairwise-distinct cosets, 0 in D. Preserves input order.
inline DigitSet validate_digit_set(const IntMatrix& a, std::vector<IntVector> digits) {
  Int det = lattice::det_exact(a);
  if (det == 0) throw SingularMatrixError("digit set over a singular matrix");
  Int q = det < 0 ? Int(-det) : det;
  if (Int(digits.size()) != q)
    throw WrongCountError("digit set has " + std::to_string(digits.size()) +
                          " digits but |det A| = " + q.str());
  bool has_zero = false;
  for (const auto& d : digits) {
    if (d.size() != a.rows()) throw DimensionError("digit dimension mismatch");
    bool zero = true;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (d(i) != 0) zero = false;
    if (zero) has_zero = true;
  }
  if (!has_zero) throw MissingZeroError();
  DigitSet ds;
  ds.matrix = a;
  ds.digits = std::move(digits);
  ds.table = detail::build_coset_table(a, ds.digits);  // throws DuplicateCosetError
  return ds;
}

// D = A(F) ∩ Z^n, enumerated over the integer bounding box of A(F)
// (coordinate i spans [-sum_j |A_ij| / 2, sum_j |A_ij| / 2]) and filtered by
// exact rational membership of A^{-1} z in F.
inline DigitSet canonical_digits(const IntMatrix& a) {
  if (!spectral::is_dilation_matrix(a))
    throw std::invalid_argument("canonical_digits requires a dilation matrix");
  const Eigen::Index n = a.rows();
  RatMatrix inv = lattice::rational_inverse(a);

  std::vector<Int> half_width(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Int s = 0;
    for (Eigen::Index j = 0; j < n; ++j) s += a(i, j) < 0 ? Int(-a(i, j)) : a(i, j);
    half_width[static_cast<std::size_t>(i)] = floor_div(s, 2);
  }

  std::vector<IntVector> digits;
  IntVector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = -half_width[static_cast<std::size_t>(i)];
  for (;;) {
    RatVector f = inv * to_rational(z);
    if (fundamental_domain_contains(f)) digits.push_back(z);
    Eigen::Index pos = n - 1;
    while (pos >= 0) {
      if (z(pos) < half_width[static_cast<std::size_t>(pos)]) {
        z(pos) += 1;
        break;
      }
      z(pos) = -half_width[static_cast<std::size_t>(pos)];
      --pos;
    }
    if (pos < 0) break;
  }

  DigitSet ds;
  try {
    ds = validate_digit_set(a, std::move(digits));
  } catch (const std::invalid_argument& e) {
    throw InternalError(std::string("canonical digit enumeration failed validation: ") + e.what());
  }
  ds.canonical = true;
  return ds;
}

// The unique d in D with x ≡ d (mod A Z^n) and the successor A^{-1}(x - d).
inline std::pair<IntVector, IntVector> digit_for(const IntVector& x, const DigitSet& d) {
  if (x.size() != d.dim()) throw DimensionError("digit_for: dimension mismatch");
  int idx = d.table->digit_index_of(x);
  return {d.digits[static_cast<std::size_t>(idx)], d.table->step(x, idx)};
}

}  // namespace radixtiles::digits
