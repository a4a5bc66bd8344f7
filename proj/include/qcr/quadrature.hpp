#pragma once

// One-dimensional Gaussian quadrature rules.  Nodes start from the
// Golub-Welsch eigenvalues of the Jacobi matrix and are polished by Newton
// steps on the orthonormal-polynomial recurrence; weights are the inverse
// Christoffel sums 1 / sum_k phi_k(x)^2.  The eigenvector-squared weight
// formula is avoided on purpose: it loses all relative accuracy in the tail
// nodes, which matters when the weights multiply exponentially large
// integrand values.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qcr {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline std::vector<double> jacobi_eigenvalues(const std::vector<double>& offdiag) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    jacobi(i, i + 1) = offdiag[i];
    jacobi(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("quadrature: eigensolver failed");
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = es.eigenvalues()[i];
  return nodes;
}

/// Orthonormal Hermite functions (weight exp(-x^2)) up to degree m at x;
/// returns phi_m and phi_{m-1}.
inline void hermite_pair(int m, double x, double& phi_m, double& phi_m1) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  for (int k = 0; k < m; ++k) {
    const double next =
        x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  phi_m = cur;
  phi_m1 = prev;
}

}  // namespace detail

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
inline QuadRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  if (n > 300) throw std::invalid_argument("gauss_hermite: node count beyond double-precision range");
  std::vector<double> off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
  QuadRule rule;
  rule.nodes = detail::jacobi_eigenvalues(off);
  rule.weights.resize(n);
  const double deriv_scale = std::sqrt(2.0 * n);
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    for (int iter = 0; iter < 3; ++iter) {
      double pm, pm1;
      detail::hermite_pair(n, x, pm, pm1);
      const double deriv = deriv_scale * pm1;
      if (deriv == 0.0) break;
      x -= pm / deriv;
    }
    rule.nodes[i] = x;
    // Christoffel number: w = 1 / sum_{k<n} phi_k(x)^2.
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    double sumsq = cur * cur;
    for (int k = 0; k + 1 < n; ++k) {
      const double next =
          x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
      sumsq += next * next;
    }
    rule.weights[i] = 1.0 / sumsq;
  }
  // The rule is symmetric; average the mirror pairs so odd integrands cancel
  // exactly.
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Gauss-Legendre rule for the weight 1 on [-1, 1].
inline QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  std::vector<double> off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  QuadRule rule;
  rule.nodes = detail::jacobi_eigenvalues(off);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    // Newton steps on the orthonormal Legendre recurrence, then the
    // Christoffel weight.
    for (int iter = 0; iter < 3; ++iter) {
      double prev = 0.0;
      double cur = std::sqrt(0.5);
      for (int k = 0; k < n; ++k) {
        const double a = std::sqrt((2.0 * k + 1.0) * (2.0 * k + 3.0)) / (k + 1.0);
        const double b = (k == 0) ? 0.0
                                  : (static_cast<double>(k) / (k + 1.0)) *
                                        std::sqrt((2.0 * k + 3.0) / (2.0 * k - 1.0));
        const double next = a * x * cur - b * prev;
        prev = cur;
        cur = next;
      }
      // phi_n' (x) from phi_n and phi_{n-1} via the differential relation.
      const double denom = 1.0 - x * x;
      if (denom <= 0.0) break;
      const double scale = n * std::sqrt((2.0 * n + 1.0) / (2.0 * n - 1.0));
      const double deriv = (scale * prev - n * x * cur) / denom;
      if (deriv == 0.0) break;
      x -= cur / deriv;
    }
    rule.nodes[i] = x;
    double prev = 0.0;
    double cur = std::sqrt(0.5);
    double sumsq = cur * cur;
    for (int k = 0; k + 1 < n; ++k) {
      const double a = std::sqrt((2.0 * k + 1.0) * (2.0 * k + 3.0)) / (k + 1.0);
      const double b = (k == 0) ? 0.0
                                : (static_cast<double>(k) / (k + 1.0)) *
                                      std::sqrt((2.0 * k + 3.0) / (2.0 * k - 1.0));
      const double next = a * x * cur - b * prev;
      prev = cur;
      cur = next;
      sumsq += next * next;
    }
    rule.weights[i] = 1.0 / sumsq;
  }
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace qcr
