#pragma once

// One-way MANOVA of Y on a single predictor x: the total and error SSCP
// matrices and Pillai's trace V = tr{(T - E) T^{-1}}.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pillai/error.hpp"
#include "pillai/linalg.hpp"
#include "pillai/random.hpp"
#include "pillai/regression.hpp"

namespace pillai {

struct PillaiResult {
  Matrix error_sscp;       ///< E
  Matrix total_sscp;       ///< T
  Matrix hypothesis_sscp;  ///< T - E
  double trace;            ///< V
};

/// T = Y^T (I - 11^T/n) Y
inline Matrix total_sscp(const Matrix& y) {
  if (y.rows() < 2) throw TooFewRows(y.rows(), 0);
  return centered_gram(y);
}

/// Y columns with their projection onto span(1, x) removed.
inline Matrix residualize_on_predictor(const Vector& x, const Matrix& y) {
  if (x.size() != y.rows()) {
    throw std::invalid_argument("residualize_on_predictor: row mismatch");
  }
  if (is_constant(x)) {
    throw DegenerateX("x is constant: det(B^T B) = n x^T x - (1^T x)^2 = 0");
  }
  const Vector xc = center(x);
  const double sxx = dot(xc, xc);
  const Matrix yc = center_columns(y);
  const Vector cross = multiply_transposed(yc, xc);
  std::vector<double> r(y.rows() * y.cols());
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j)
      r[i * y.cols() + j] = yc(i, j) - (cross[j] / sxx) * xc[i];
  return Matrix(y.rows(), y.cols(), std::move(r));
}

/// E = Y^T {I - B (B^T B)^{-1} B^T} Y with B = (1, x), formed from residuals
/// rather than the n x n projector.
inline Matrix error_sscp(const Vector& x, const Matrix& y) {
  return gram(residualize_on_predictor(x, y));
}

/// Pillai's trace, computed as tr(T^{-1} (T - E)) from one Cholesky
/// factorization of T and k column solves.
inline PillaiResult pillai_trace(const Vector& x, const Matrix& y) {
  if (x.size() != y.rows()) {
    throw std::invalid_argument("pillai_trace: x and Y row counts differ");
  }
  Matrix t = total_sscp(y);
  Matrix e = symmetrize(error_sscp(x, y));
  Matrix h = symmetrize(subtract(t, e));

  double v = 0.0;
  try {
    const Cholesky chol(t);
    v = trace(chol.solve(h));
  } catch (const NotPositiveDefinite& err) {
    throw RankDeficient(err.pivot(),
                        "total SSCP is singular: centered Y column " +
                            std::to_string(err.pivot()) +
                            " is constant or collinear with the preceding "
                            "columns");
  }
  if (!(v >= -kUnitIntervalSlack && v <= 1.0 + kUnitIntervalSlack)) {
    throw ConsistencyError("pillai_trace: V = " + std::to_string(v) +
                           " outside [0, 1]");
  }
  return PillaiResult{std::move(e), std::move(t), std::move(h), v};
}

/// Probe directions for checking positive semidefiniteness without an
/// eigendecomposition: 8 fixed unit vectors followed by 8 unit vectors drawn
/// from `seed`.
inline std::vector<Vector> psd_probe_vectors(std::size_t k,
                                             std::uint64_t seed = 0x5eed) {
  std::vector<Vector> probes;
  probes.reserve(16);
  auto normalized = [](std::vector<double> v) {
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    for (double& e : v) e /= norm;
    return Vector(std::move(v));
  };
  for (std::size_t p = 0; p < 8; ++p) {
    std::vector<double> v(k);
    for (std::size_t j = 0; j < k; ++j) {
      v[j] = std::cos(static_cast<double>((p + 1) * (j + 1)));
    }
    if (p < k) v[p] += 2.0;
    probes.push_back(normalized(std::move(v)));
  }
  for (std::uint64_t p = 0; p < 8; ++p) {
    GaussianSampler g(derive_stream(seed, p));
    std::vector<double> v(k);
    for (double& e : v) e = g();
    probes.push_back(normalized(std::move(v)));
  }
  return probes;
}

/// True when every diagonal entry is >= -diag_tol and v^T M v >= -quad_tol
/// for every probe direction.
inline bool passes_psd_probes(const Matrix& m, double diag_tol,
                              double quad_tol) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m(i, i) < -diag_tol) return false;
  }
  for (const Vector& v : psd_probe_vectors(m.rows())) {
    if (dot(v, multiply(m, v)) < -quad_tol) return false;
  }
  return true;
}

}  // namespace pillai
