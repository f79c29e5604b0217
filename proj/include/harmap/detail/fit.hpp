#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace harmap::detail {

/// Least-squares coefficients for y ~ sum_j c_j * basis_j(x) by Householder QR.
///
/// Columns are scaled to unit norm first; the basis sets used here span several
/// orders of magnitude (1, 1/log n, 1/(n log n)).
inline std::vector<double> least_squares(const std::vector<double>& x, const std::vector<double>& y,
                                         const std::vector<std::function<double(double)>>& basis) {
  const std::size_t m = x.size();
  const std::size_t k = basis.size();
  if (m < k || k == 0) throw std::invalid_argument("least_squares: underdetermined system");

  std::vector<std::vector<double>> a(k, std::vector<double>(m));
  std::vector<double> scale(k);
  for (std::size_t j = 0; j < k; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      a[j][i] = basis[j](x[i]);
      norm += a[j][i] * a[j][i];
    }
    scale[j] = norm > 0.0 ? 1.0 / std::sqrt(norm) : 1.0;
    for (double& v : a[j]) v *= scale[j];
  }
  std::vector<double> b = y;

  std::vector<double> rdiag(k);
  for (std::size_t j = 0; j < k; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < m; ++i) norm += a[j][i] * a[j][i];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::runtime_error("least_squares: rank-deficient basis");
    const double alpha = a[j][j] > 0 ? -norm : norm;
    std::vector<double> v(a[j].begin() + static_cast<std::ptrdiff_t>(j), a[j].end());
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double t : v) vnorm2 += t * t;
    auto reflect = [&](std::vector<double>& col) {
      if (vnorm2 == 0.0) return;
      double dot = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * col[j + i];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = 0; i < v.size(); ++i) col[j + i] -= f * v[i];
    };
    for (std::size_t c = j; c < k; ++c) reflect(a[c]);
    reflect(b);
    rdiag[j] = a[j][j];
  }

  std::vector<double> coef(k);
  for (std::size_t jj = k; jj-- > 0;) {
    double s = b[jj];
    for (std::size_t c = jj + 1; c < k; ++c) s -= a[c][jj] * coef[c];
    coef[jj] = s / rdiag[jj];
  }
  for (std::size_t j = 0; j < k; ++j) coef[j] *= scale[j];
  return coef;
}

}  // namespace harmap::detail
