#pragma once

// Matrix realization of the classical side for K = SU(n): points of the
// cotangent bundle as (unitary, skew-Hermitian traceless) pairs, the polar
// embedding into SL(n, C), the momentum map of the conjugation action,
// conjugation of zero-momentum points to torus normal form, three independent
// regularity classifiers, the adjoint-determinant identity on the torus
// complement, and orientation signs of normalizer elements.
//
// The Lie algebra su(n) carries the inner product <X, Y> = -tr(XY); with
// H = i diag(theta) the root alpha_{jk} pairs as theta_j - theta_k and has
// squared length 2, matching the abstract A_{n-1} normalization.

#include <qcr/laurent.hpp>
#include <qcr/rng.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace qcr {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct CotangentPoint {
  CMat x;   ///< unitary with unit determinant
  CMat xi;  ///< skew-Hermitian, traceless
};

inline constexpr double cotangent_tol = 1e-10;
inline constexpr double momentum_tol = 1e-8;

inline void validate_cotangent(const CotangentPoint& p) {
  const auto n = p.x.rows();
  if (p.x.cols() != n || p.xi.rows() != n || p.xi.cols() != n || n < 2) {
    throw std::invalid_argument("CotangentPoint: matrices must be square of equal size >= 2");
  }
  if ((p.x.adjoint() * p.x - CMat::Identity(n, n)).norm() > cotangent_tol) {
    throw std::invalid_argument("CotangentPoint: x is not unitary");
  }
  if (std::abs(p.x.determinant() - cplx(1.0, 0.0)) > cotangent_tol) {
    throw std::invalid_argument("CotangentPoint: det x != 1");
  }
  if ((p.xi + p.xi.adjoint()).norm() > cotangent_tol) {
    throw std::invalid_argument("CotangentPoint: xi is not skew-Hermitian");
  }
  if (std::abs(p.xi.trace()) > cotangent_tol) {
    throw std::invalid_argument("CotangentPoint: xi has nonzero trace");
  }
}

/// Bridge between su(n) diagonal data and the rank n-1 coordinate
/// realization: theta(h) lists the diagonal angles of the torus element with
/// coordinates h, so that <alpha_{jk}, h> = theta_j - theta_k.
class WeightDictionary {
 public:
  explicit WeightDictionary(const RootSystem& rs) : n_(rs.rank() + 1) {
    const int r = rs.rank();
    Mat std_roots = Mat::Zero(n_, r);  // columns e_j - e_{j+1}
    for (int j = 0; j < r; ++j) {
      std_roots(j, j) = 1.0;
      std_roots(j + 1, j) = -1.0;
    }
    Mat simple(r, r);
    for (int j = 0; j < r; ++j) simple.col(j) = rs.simple_roots()[j];
    u_ = std_roots * simple.inverse();
  }

  int n() const { return n_; }

  /// Diagonal angles of the coordinate vector h; the image is traceless.
  Vec theta(const Vec& h) const { return u_ * h; }

  /// Coordinates of a traceless angle vector (left inverse of theta).
  Vec coords(const Vec& theta) const { return u_.transpose() * theta; }

  /// Torus element exp(i diag(theta(h1))).
  CMat torus_element(const Vec& h1) const {
    const Vec t = theta(h1);
    CMat x = CMat::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) x(j, j) = std::exp(cplx(0.0, t[j]));
    return x;
  }

  /// Cartan element i diag(theta(h2)) of su(n).
  CMat cartan_element(const Vec& h2) const {
    const Vec t = theta(h2);
    CMat xi = CMat::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) xi(j, j) = cplx(0.0, t[j]);
    return xi;
  }

 private:
  int n_;
  Mat u_;
};

/// Polar embedding of the cotangent bundle into SL(n, C): g = x exp(-i xi).
inline CMat polar_embed(const CotangentPoint& p) {
  validate_cotangent(p);
  const CMat h = cplx(0.0, -1.0) * p.xi;  // Hermitian
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("polar_embed: eigensolver failed");
  CMat expn = es.eigenvectors() *
              es.eigenvalues().array().exp().matrix().asDiagonal() *
              es.eigenvectors().adjoint();
  CMat g = p.x * expn;
  if (std::abs(g.determinant() - cplx(1.0, 0.0)) > 1e-8) {
    throw std::runtime_error("polar_embed: determinant drifted from 1");
  }
  return g;
}

/// Momentum of the conjugation action: phi(x, xi) = Ad_x(xi) - xi.
inline CMat momentum(const CotangentPoint& p) {
  return p.x * p.xi * p.x.adjoint() - p.xi;
}

struct TorusNormalForm {
  Vec theta1;  ///< angles of x, mod-2pi class, sum 0
  Vec theta2;  ///< xi = i diag(theta2), sum 0
  CMat y;      ///< unitary with y x y^-1 and y xi y^-1 diagonal
};

namespace detail {

/// Clusters unit-circle eigenvalues whose chordal distance is below the gap
/// threshold; input order is by angle, and the wrap-around pair is merged.
inline std::vector<std::vector<int>> cluster_unit_eigenvalues(const CVec& d, double gap) {
  const int n = static_cast<int>(d.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::arg(d[a]) < std::arg(d[b]); });
  std::vector<std::vector<int>> clusters;
  for (int idx : order) {
    if (!clusters.empty() && std::abs(d[idx] - d[clusters.back().back()]) <= gap) {
      clusters.back().push_back(idx);
    } else {
      clusters.push_back({idx});
    }
  }
  if (clusters.size() > 1 &&
      std::abs(d[clusters.front().front()] - d[clusters.back().back()]) <= gap) {
    for (int idx : clusters.back()) clusters.front().push_back(idx);
    clusters.pop_back();
  }
  return clusters;
}

}  // namespace detail

/// Conjugates a zero-momentum point into the torus: x is diagonalized first
/// (unit-circle eigenvalue clusters at gap 1e-8), then xi within each
/// eigenspace of x.  Angles are sorted by (theta2 desc, theta1 desc) so the
/// normal form picks one reproducible Weyl-orbit representative.
inline TorusNormalForm conjugate_to_torus(const CotangentPoint& p) {
  validate_cotangent(p);
  const int n = static_cast<int>(p.x.rows());
  if (momentum(p).norm() > momentum_tol) {
    throw std::invalid_argument("conjugate_to_torus: momentum is not zero within tolerance");
  }

  Eigen::ComplexSchur<CMat> schur(p.x, true);
  if (schur.info() != Eigen::Success) throw std::runtime_error("conjugate_to_torus: Schur failed");
  CMat q = schur.matrixU();
  const CVec d = schur.matrixT().diagonal();

  // x is normal, so the Schur form is diagonal up to roundoff.
  if ((schur.matrixT() - CMat(d.asDiagonal())).norm() > 1e-8 * n) {
    throw std::runtime_error("conjugate_to_torus: x is not normal");
  }

  for (const auto& cluster : detail::cluster_unit_eigenvalues(d, 1e-8)) {
    if (cluster.size() == 1) continue;
    const int m = static_cast<int>(cluster.size());
    CMat qc(n, m);
    for (int c = 0; c < m; ++c) qc.col(c) = q.col(cluster[c]);
    const CMat block = cplx(0.0, -1.0) * (qc.adjoint() * p.xi * qc);  // Hermitian
    Eigen::SelfAdjointEigenSolver<CMat> es((block + block.adjoint()) / 2.0);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("conjugate_to_torus: block eigensolver failed");
    }
    qc = qc * es.eigenvectors();
    for (int c = 0; c < m; ++c) q.col(cluster[c]) = qc.col(c);
  }

  const CMat dx = q.adjoint() * p.x * q;
  const CMat dxi = q.adjoint() * p.xi * q;
  const double resid = (dxi - CMat(dxi.diagonal().asDiagonal())).norm() +
                       (dx - CMat(dx.diagonal().asDiagonal())).norm();
  if (resid > 1e-6 * (1.0 + p.xi.norm())) {
    throw std::runtime_error("conjugate_to_torus: joint diagonalization failed; point is not in the zero set");
  }

  Vec theta1(n), theta2(n);
  for (int j = 0; j < n; ++j) {
    theta1[j] = std::arg(dx(j, j));
    theta2[j] = dxi(j, j).imag();
  }
  // Bring the angle sum back to zero without moving the diagonal entries:
  // det x = 1 forces the sum into 2 pi Z, and the excess is folded into the
  // largest angle.
  const double excess = theta1.sum();
  const long wraps = std::lround(excess / (2.0 * std::numbers::pi));
  if (wraps != 0) {
    int arg_max = 0;
    for (int j = 1; j < n; ++j) {
      if (theta1[j] > theta1[arg_max]) arg_max = j;
    }
    theta1[arg_max] -= 2.0 * std::numbers::pi * wraps;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (theta2[a] != theta2[b]) return theta2[a] > theta2[b];
    return theta1[a] > theta1[b];
  });
  TorusNormalForm nf;
  nf.theta1.resize(n);
  nf.theta2.resize(n);
  CMat perm = CMat::Zero(n, n);
  for (int row = 0; row < n; ++row) {
    nf.theta1[row] = theta1[order[row]];
    nf.theta2[row] = theta2[order[row]];
    perm(row, order[row]) = 1.0;
  }
  nf.y = perm * q.adjoint();
  return nf;
}

struct RegularityReport {
  bool via_theorem = false;
  bool via_rss = false;
  bool via_stabilizer_dim = false;
  bool indeterminate = false;  ///< some root factor fell in [eps/10, 10 eps]
  int stabilizer_dim = 0;
  double min_root_gap = 0.0;  ///< min over roots of |phi_alpha(z) - 1|
};

namespace detail {

/// Fixed orthonormal basis of su(n) under <X,Y> = -tr(XY): first the
/// Cartan directions, then the off-diagonal real/imaginary pairs in
/// lexicographic (j, k) order.  The off-diagonal sub-basis also fixes the
/// orientation of the torus complement; signs are basis-dependent, so this
/// ordering is part of the contract.
inline std::vector<CMat> su_cartan_basis(int n) {
  std::vector<CMat> basis;
  for (int l = 1; l < n; ++l) {
    CMat m = CMat::Zero(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) m(j, j) = cplx(0.0, scale);
    m(l, l) = cplx(0.0, -scale * l);
    basis.push_back(m);
  }
  return basis;
}

inline std::vector<CMat> su_offdiag_basis(int n) {
  std::vector<CMat> basis;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      CMat re = CMat::Zero(n, n);
      re(j, k) = cplx(s, 0.0);
      re(k, j) = cplx(-s, 0.0);
      basis.push_back(re);
      CMat im = CMat::Zero(n, n);
      im(j, k) = cplx(0.0, s);
      im(k, j) = cplx(0.0, s);
      basis.push_back(im);
    }
  }
  return basis;
}

inline double su_inner(const CMat& a, const CMat& b) { return -(a * b).trace().real(); }

}  // namespace detail

/// Classifies a zero-momentum point as regular or not by three independent
/// routes: the angle-gap criterion, the root-homomorphism values at the polar
/// image, and the stabilizer dimension from a rank computation.
inline RegularityReport classify_regular(const CotangentPoint& p) {
  validate_cotangent(p);
  if (momentum(p).norm() > momentum_tol) {
    throw std::invalid_argument("classify_regular: momentum is not zero within tolerance");
  }
  const int n = static_cast<int>(p.x.rows());
  const TorusNormalForm nf = conjugate_to_torus(p);

  RegularityReport rep;
  rep.via_theorem = true;
  rep.via_rss = true;
  rep.min_root_gap = std::numeric_limits<double>::infinity();
  const double two_pi = 2.0 * std::numbers::pi;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const double g1 = nf.theta1[j] - nf.theta1[k];
      const double g2 = nf.theta2[j] - nf.theta2[k];
      const double d1 = std::abs(g1 - two_pi * std::round(g1 / two_pi));
      if (d1 <= regularity_tol && std::abs(g2) <= regularity_tol) rep.via_theorem = false;
      // phi_alpha at the polar image z = exp(H1) exp(-i H2).
      const cplx phi = std::exp(cplx(g2, g1));
      const double gap = std::abs(phi - cplx(1.0, 0.0));
      rep.min_root_gap = std::min(rep.min_root_gap, gap);
      if (gap <= regularity_tol) rep.via_rss = false;
      if (gap >= regularity_tol / 10.0 && gap <= 10.0 * regularity_tol) rep.indeterminate = true;
    }
  }

  // Stabilizer dimension: kernel of eta -> (Ad_x eta - eta, [xi, eta]) on
  // su(n), computed from the original matrices.
  std::vector<CMat> basis = detail::su_cartan_basis(n);
  for (CMat& m : detail::su_offdiag_basis(n)) basis.push_back(std::move(m));
  const int dim = static_cast<int>(basis.size());
  Mat stacked(2 * dim, dim);
  for (int col = 0; col < dim; ++col) {
    const CMat ad = p.x * basis[col] * p.x.adjoint() - basis[col];
    const CMat br = p.xi * basis[col] - basis[col] * p.xi;
    for (int row = 0; row < dim; ++row) {
      stacked(row, col) = detail::su_inner(basis[row], ad);
      stacked(dim + row, col) = detail::su_inner(basis[row], br);
    }
  }
  Eigen::JacobiSVD<Mat> svd(stacked);
  const double sv_tol = 1e-7 * std::max(1.0, svd.singularValues()[0]);
  int nullity = 0;
  for (int i = 0; i < dim; ++i) {
    if (svd.singularValues()[i] <= sv_tol) ++nullity;
  }
  rep.stabilizer_dim = nullity;
  rep.via_stabilizer_dim = (nullity == n - 1);
  return rep;
}

/// Builds Ad_{z^-1} on the off-diagonal part of sl(n, C) by conjugating each
/// elementary matrix, and returns (det(Ad_{z^-1} - I), (-1)^m sigma_C(z)^2).
/// The two agree: pairing the roots alpha, -alpha turns the eigenvalue
/// product into the squared denominator.
inline std::pair<cplx, cplx> det_contraction(const RootSystem& rs, const TorusPointC& z, int n) {
  if (rs.rank() != n - 1) {
    throw std::invalid_argument("det_contraction: rank and matrix size are inconsistent");
  }
  const WeightDictionary dict(rs);
  const Vec t1 = dict.theta(z.h1);
  const Vec t2 = dict.theta(z.h2);
  CVec diag(n);
  for (int j = 0; j < n; ++j) diag[j] = std::exp(cplx(t2[j], t1[j]));

  const int m2 = n * n - n;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(m2);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j != k) pairs.emplace_back(j, k);
    }
  }
  CMat ad = CMat::Zero(m2, m2);
  CMat zmat = CMat::Zero(n, n), zinv = CMat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    zmat(j, j) = diag[j];
    zinv(j, j) = 1.0 / diag[j];
  }
  for (int col = 0; col < m2; ++col) {
    CMat e = CMat::Zero(n, n);
    e(pairs[col].first, pairs[col].second) = 1.0;
    const CMat im = zinv * e * zmat;
    for (int row = 0; row < m2; ++row) {
      ad(row, col) = im(pairs[row].first, pairs[row].second);
    }
  }
  const cplx det = (ad - CMat::Identity(m2, m2)).determinant();

  cplx sigma = sigma_product(rs, z);
  cplx sigma_sq = sigma * sigma;
  if (rs.num_positive_roots() % 2 == 1) sigma_sq = -sigma_sq;
  return {det, sigma_sq};
}

/// Sign of det(Ad_y) restricted to the orthogonal complement of the diagonal
/// torus algebra, in the fixed off-diagonal basis.  Equals the sign of the
/// Weyl element induced by y.
inline int orientation_sign(const CMat& y) {
  const int n = static_cast<int>(y.rows());
  if (y.cols() != n || n < 2 || (y.adjoint() * y - CMat::Identity(n, n)).norm() > cotangent_tol) {
    throw std::invalid_argument("orientation_sign: y must be unitary");
  }
  const auto cartan = detail::su_cartan_basis(n);
  const auto offdiag = detail::su_offdiag_basis(n);
  // y must normalize the torus: Ad_y of each Cartan element stays diagonal.
  for (const CMat& h : cartan) {
    const CMat im = y * h * y.adjoint();
    CMat off = im;
    off.diagonal().setZero();
    if (off.norm() > 1e-10) {
      throw std::invalid_argument("orientation_sign: y does not normalize the torus");
    }
  }
  const int m2 = static_cast<int>(offdiag.size());
  Mat rep(m2, m2);
  for (int col = 0; col < m2; ++col) {
    const CMat im = y * offdiag[col] * y.adjoint();
    for (int row = 0; row < m2; ++row) {
      rep(row, col) = detail::su_inner(offdiag[row], im);
    }
  }
  const double det = rep.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-6) {
    throw std::runtime_error("orientation_sign: restricted action is not orthogonal");
  }
  return det > 0.0 ? 1 : -1;
}

/// Haar-distributed element of SU(n) from a counter-based stream: QR of a
/// Ginibre matrix with the phase convention fixed, then determinant
/// normalization.
inline CMat haar_su(int n, const CounterRng& rng, std::uint64_t stream) {
  CMat g(n, n);
  std::uint64_t slot = 0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double a, b;
      rng.normal_pair(stream, slot, a, b);
      slot += 2;
      g(j, k) = cplx(a, b);
    }
  }
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : cplx(1.0, 0.0);
  }
  const cplx det = q.determinant();
  q *= std::pow(std::conj(det), 1.0 / n);
  return q;
}

/// Random zero-momentum point y . (t, H) with t, H drawn from continuous
/// distributions on the torus data and y Haar on SU(n).
inline CotangentPoint random_zero_momentum(const RootSystem& rs, const CounterRng& rng,
                                           std::uint64_t stream, double h_scale = 1.0) {
  const WeightDictionary dict(rs);
  const int n = dict.n();
  Vec raw1(n), raw2(n);
  for (int j = 0; j < n; ++j) {
    raw1[j] = (2.0 * rng.uniform(stream, 100 + j) - 1.0) * std::numbers::pi;
  }
  for (int j = 0; j < n; j += 2) {
    double a, b;
    rng.normal_pair(stream, 200 + j, a, b);
    raw2[j] = h_scale * a;
    if (j + 1 < n) raw2[j + 1] = h_scale * b;
  }
  raw1.array() -= raw1.mean();
  raw2.array() -= raw2.mean();

  CMat x = CMat::Zero(n, n), xi = CMat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    x(j, j) = std::exp(cplx(0.0, raw1[j]));
    xi(j, j) = cplx(0.0, raw2[j]);
  }
  const CMat y = haar_su(n, rng, stream * 2654435761ULL + 17);
  return CotangentPoint{y * x * y.adjoint(), y * xi * y.adjoint()};
}

}  // namespace qcr
