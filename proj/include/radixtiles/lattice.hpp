#pragma once

// Exact integer linear algebra over Z^n: determinants, Smith normal form,
// coset indexing for Z^n / A(Z^n), and exact rational solves.

#include <optional>
#include <utility>
#include <vector>

#include "radixtiles/errors.hpp"
#include "radixtiles/types.hpp"

namespace radixtiles::lattice {

// Fraction-free (Bareiss) elimination; every division below is exact.
template <class Scalar>
Scalar det_exact_of(Matrix<Scalar> m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw DimensionError("determinant of a non-square matrix");
  if (n == 0) return Scalar(1);
  Scalar prev = Scalar(1);
  int sign = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index pivot = -1;
      for (Eigen::Index r = k + 1; r < n; ++r)
        if (m(r, k) != 0) {
          pivot = r;
          break;
        }
      if (pivot < 0) return Scalar(0);
      m.row(k).swap(m.row(pivot));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      m(i, k) = Scalar(0);
    }
    prev = m(k, k);
  }
  Scalar d = m(n - 1, n - 1);
  return sign < 0 ? Scalar(-d) : d;
}

inline Int det_exact(const IntMatrix& a) { return det_exact_of<Int>(a); }

struct SmithDecomposition {
  IntMatrix U;  // unimodular row transform
  IntMatrix S;  // diagonal, s_1 | s_2 | ... | s_n, nonnegative
  IntMatrix V;  // unimodular column transform
  Eigen::Index dim() const { return S.rows(); }
  Int diag(Eigen::Index i) const { return S(i, i); }
};

// U*A*V = S with the pivot rule: smallest-magnitude nonzero entry of the
// trailing submatrix, ties broken by lowest (row, column). Deterministic.
inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw DimensionError("Smith normal form of a non-square matrix");
  if (det_exact(a) == 0) throw SingularMatrixError("Smith normal form requires det != 0");

  IntMatrix s = a;
  IntMatrix u = IntMatrix::Identity(n, n);
  IntMatrix v = IntMatrix::Identity(n, n);

  auto abs_of = [](const Int& x) { return x < 0 ? Int(-x) : x; };

  for (Eigen::Index k = 0; k < n; ++k) {
    for (;;) {
      Eigen::Index pr = -1, pc = -1;
      Int best = 0;
      for (Eigen::Index i = k; i < n; ++i)
        for (Eigen::Index j = k; j < n; ++j) {
          if (s(i, j) == 0) continue;
          Int mag = abs_of(s(i, j));
          if (pr < 0 || mag < best) {
            best = mag;
            pr = i;
            pc = j;
          }
        }
      if (pr < 0) throw InternalError("SNF: zero trailing block despite det != 0");
      if (pr != k) {
        s.row(k).swap(s.row(pr));
        u.row(k).swap(u.row(pr));
      }
      if (pc != k) {
        s.col(k).swap(s.col(pc));
        v.col(k).swap(v.col(pc));
      }

      bool reduced = false;
      for (Eigen::Index i = k + 1; i < n; ++i) {
        if (s(i, k) == 0) continue;
        Int q = floor_div(s(i, k), s(k, k));
        if (q != 0) {
          s.row(i) -= (q * s.row(k)).eval();
          u.row(i) -= (q * u.row(k)).eval();
        }
        if (s(i, k) != 0) reduced = true;  // nonzero remainder, re-pivot
      }
      for (Eigen::Index j = k + 1; j < n; ++j) {
        if (s(k, j) == 0) continue;
        Int q = floor_div(s(k, j), s(k, k));
        if (q != 0) {
          s.col(j) -= (q * s.col(k)).eval();
          v.col(j) -= (q * v.col(k)).eval();
        }
        if (s(k, j) != 0) reduced = true;
      }
      if (reduced) continue;

      // pivot must divide the whole trailing block for the chain s_i | s_{i+1}
      bool fixed = false;
      for (Eigen::Index i = k + 1; i < n && !fixed; ++i)
        for (Eigen::Index j = k + 1; j < n && !fixed; ++j)
          if (s(i, j) % s(k, k) != 0) {
            s.row(k) += s.row(i);
            u.row(k) += u.row(i);
            fixed = true;
          }
      if (!fixed) break;
    }
  }

  for (Eigen::Index k = 0; k < n; ++k)
    if (s(k, k) < 0) {
      s.row(k) = (-s.row(k)).eval();
      u.row(k) = (-u.row(k)).eval();
    }

  return SmithDecomposition{std::move(u), std::move(s), std::move(v)};
}

struct CosetIndex {
  std::vector<Int> residues;  // 0 <= r_i < s_i
  bool operator==(const CosetIndex& o) const { return residues == o.residues; }
  bool operator!=(const CosetIndex& o) const { return !(*this == o); }
};

inline CosetIndex coset_index(const IntVector& x, const SmithDecomposition& snf) {
  const Eigen::Index n = snf.dim();
  if (x.size() != n) throw DimensionError("coset_index: dimension mismatch");
  IntVector ux = snf.U * x;
  CosetIndex idx;
  idx.residues.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx.residues.push_back(floor_mod(ux(i), snf.diag(i)));
  return idx;
}

// Mixed-radix flattening of a coset index; bijective with Z^n / A(Z^n).
inline Int coset_index_flat(const IntVector& x, const SmithDecomposition& snf) {
  const Eigen::Index n = snf.dim();
  if (x.size() != n) throw DimensionError("coset_index_flat: dimension mismatch");
  IntVector ux = snf.U * x;
  Int flat = 0;
  for (Eigen::Index i = 0; i < n; ++i) flat = flat * snf.diag(i) + floor_mod(ux(i), snf.diag(i));
  return flat;
}

// Exact rational inverse. Eigen's full-pivot LU over exact rationals has no
// rounding; the product is verified anyway so a pivoting bug cannot slip by.
inline RatMatrix rational_inverse(const IntMatrix& a) {
  if (det_exact(a) == 0) throw SingularMatrixError();
  RatMatrix ar = to_rational(a);
  Eigen::FullPivLU<RatMatrix> lu(ar);
  RatMatrix inv = lu.inverse();
  RatMatrix check = ar * inv;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (check(i, j) != Rat(i == j ? 1 : 0))
        throw InternalError("rational inverse failed verification");
  return inv;
}

// det(A) * A^{-1}, exactly integral.
inline IntMatrix adjugate(const IntMatrix& a) {
  Int det = det_exact(a);
  if (det == 0) throw SingularMatrixError();
  RatMatrix scaled = rational_inverse(a) * Rat(det);
  IntMatrix adj(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Rat& e = scaled(i, j);
      if (denominator(e) != 1) throw InternalError("adjugate entry not integral");
      adj(i, j) = numerator(e);
    }
  return adj;
}

// z with A*z = b when an integral solution exists, empty otherwise.
inline std::optional<IntVector> solve_integral(const IntMatrix& a, const IntVector& b) {
  if (a.rows() != b.size()) throw DimensionError("solve_integral: dimension mismatch");
  if (det_exact(a) == 0) throw SingularMatrixError();
  Eigen::FullPivLU<RatMatrix> lu(to_rational(a));
  RatVector x = lu.solve(to_rational(b));
  IntVector z(b.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (denominator(x(i)) != 1) return std::nullopt;
    z(i) = numerator(x(i));
  }
  if (!exact_equal<Int>(IntVector(a * z), b))
    throw InternalError("solve_integral: exact solve failed verification");
  return z;
}

inline bool same_coset(const IntVector& x, const IntVector& y, const IntMatrix& a) {
  if (x.size() != y.size()) throw DimensionError("same_coset: dimension mismatch");
  return solve_integral(a, IntVector(x - y)).has_value();
}

}  // namespace radixtiles::lattice
