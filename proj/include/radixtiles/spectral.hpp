#pragma once

// Exact dilation and mu > 2 certificates plus a floating-point singular
// value estimate. The exact paths decide; the float path only advises.

#include <vector>

#include "radixtiles/errors.hpp"
#include "radixtiles/lattice.hpp"
#include "radixtiles/types.hpp"

namespace radixtiles::spectral {

// Characteristic polynomial det(lambda*I - A), coefficients ascending
// (constant term first), monic. Faddeev-LeVerrier over exact rationals.
inline std::vector<Int> char_poly(const IntMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw DimensionError("char_poly of a non-square matrix");
  RatMatrix ar = to_rational(a);
  RatMatrix m = RatMatrix::Identity(n, n);
  std::vector<Rat> coeff(static_cast<std::size_t>(n) + 1);
  coeff[static_cast<std::size_t>(n)] = 1;
  for (Eigen::Index k = 1; k <= n; ++k) {
    RatMatrix am = ar * m;
    Rat c = -am.trace() / Rat(k);
    coeff[static_cast<std::size_t>(n - k)] = c;
    m = am + c * RatMatrix::Identity(n, n);
  }
  std::vector<Int> out(coeff.size());
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    if (denominator(coeff[i]) != 1)
      throw InternalError("characteristic polynomial coefficient not integral");
    out[i] = numerator(coeff[i]);
  }
  // independent route: p(0) = (-1)^n det(A)
  Int d = lattice::det_exact(a);
  if (out[0] != ((n % 2 == 0) ? d : Int(-d)))
    throw InternalError("characteristic polynomial disagrees with determinant");
  return out;
}

// Schur-Cohn: all roots of c_0 + c_1 z + ... + c_m z^m strictly inside the
// open unit disk. At each step the transform T f = (lead*f - const*rev f)/z
// drops the degree by one; strict |const| < |lead| at every level is
// equivalent to the root condition. Exact integer arithmetic throughout.
inline bool schur_cohn_all_in_unit_disk(std::vector<Int> c) {
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  if (c.size() <= 1) return true;  // constant: no roots
  auto abs_of = [](const Int& x) { return x < 0 ? Int(-x) : x; };
  while (c.size() > 1) {
    const std::size_t m = c.size() - 1;
    const Int lead = c[m];
    const Int cst = c[0];
    if (abs_of(cst) >= abs_of(lead)) return false;
    std::vector<Int> next(m);
    for (std::size_t i = 0; i < m; ++i) next[i] = lead * c[i + 1] - cst * c[m - 1 - i];
    c = std::move(next);
  }
  return true;
}

// Every eigenvalue strictly outside the closed unit disk: the reversed
// characteristic polynomial z^n p(1/z) must have all roots strictly inside.
inline bool is_dilation_matrix(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("is_dilation_matrix: non-square matrix");
  if (lattice::det_exact(a) == 0) return false;  // zero eigenvalue
  std::vector<Int> p = char_poly(a);
  std::vector<Int> reversed(p.rbegin(), p.rend());
  return schur_cohn_all_in_unit_disk(std::move(reversed));
}

// sigma_min(A) > 2, exactly: A^T A - 4I positive definite by Sylvester's
// criterion (all leading principal minors positive).
inline bool mu_exceeds_two(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("mu_exceeds_two: non-square matrix");
  const Eigen::Index n = a.rows();
  IntMatrix g = a.transpose() * a - 4 * IntMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    IntMatrix minor = g.topLeftCorner(k, k);
    if (lattice::det_exact(minor) <= 0) return false;
  }
  return true;
}

// Advisory float estimate of sigma_min; never used for decisions.
inline double smallest_singular_value_estimate(const IntMatrix& a) {
  if (lattice::det_exact(a) == 0) throw SingularMatrixError();
  Eigen::MatrixXd ad = a.cast<double>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ad);
  return svd.singularValues().minCoeff();
}

struct SpectralReport {
  Int q;                     // |det A|
  bool is_dilation = false;
  bool mu_exceeds_two = false;
  double mu_estimate = 0.0;  // 0 when A is singular
  std::vector<Int> char_poly;
};

inline SpectralReport spectral_report(const IntMatrix& a) {
  SpectralReport r;
  Int d = lattice::det_exact(a);
  r.q = d < 0 ? Int(-d) : d;
  r.char_poly = char_poly(a);
  r.is_dilation = is_dilation_matrix(a);
  r.mu_exceeds_two = mu_exceeds_two(a);
  r.mu_estimate = (d == 0) ? 0.0 : smallest_singular_value_estimate(a);
  return r;
}

}  // namespace radixtiles::spectral
