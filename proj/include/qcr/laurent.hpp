#pragma once

// Sparse Laurent class functions on the complexified torus.  A function is a
// finite sum  sum_lambda c_lambda f_lambda  over integral weights, where
//   f_lambda(exp(H)) = exp(i <lambda, H>),    H in the complexified t.
// Points of the complexified torus are written z = exp(H1) exp(-i H2) with
// H1, H2 in t, so a monomial evaluates to exp(i<lambda,H1>) exp(<lambda,H2>).
//
// Supports are kept exact: keys are integer coordinate vectors in the
// fundamental-weight basis, ordered lexicographically.  All roundoff lives
// in the complex coefficients.

#include <qcr/root_system.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>

namespace qcr {

using cplx = std::complex<double>;

/// Below this magnitude of sigma_C a torus point counts as singular; the
/// regularity classifiers use the same scale.
inline constexpr double regularity_tol = 1e-9;

/// Point of the complexified torus, z = exp(H1) exp(-i H2).
struct TorusPointC {
  Vec h1;  ///< compact direction (radian-valued coordinates)
  Vec h2;  ///< noncompact direction
};

class LaurentClassFunction {
 public:
  using TermMap = std::map<WeightKey, cplx>;

  LaurentClassFunction() = default;
  explicit LaurentClassFunction(TermMap terms) : terms_(std::move(terms)) { prune(); }

  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  cplx coeff(const WeightKey& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
  }

  void add_term(const WeightKey& k, cplx c) {
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) == 0.0) terms_.erase(it);
  }

  LaurentClassFunction& operator*=(cplx s) {
    if (std::abs(s) == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  LaurentClassFunction& operator+=(const LaurentClassFunction& other) {
    for (const auto& [k, c] : other.terms_) add_term(k, c);
    return *this;
  }

  friend LaurentClassFunction operator*(cplx s, LaurentClassFunction f) {
    f *= s;
    return f;
  }

  friend LaurentClassFunction operator+(LaurentClassFunction a, const LaurentClassFunction& b) {
    a += b;
    return a;
  }

  /// Per-dimension bandwidth: max |n_j| over the support.  These are the
  /// integer frequencies of the function in torus lattice coordinates.
  std::vector<int> bandwidth(int rank) const {
    std::vector<int> b(rank, 0);
    for (const auto& [k, c] : terms_) {
      for (int j = 0; j < rank; ++j) b[j] = std::max(b[j], std::abs(k[j]));
    }
    return b;
  }

 private:
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) == 0.0) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
  }

  TermMap terms_;
};

/// Evaluates f at z as the finite exponential sum in the class invariant.
inline cplx evaluate(const RootSystem& rs, const LaurentClassFunction& f, const TorusPointC& z) {
  if (z.h1.size() != rs.rank() || z.h2.size() != rs.rank()) {
    throw std::invalid_argument("evaluate: torus point dimension mismatch");
  }
  // <lambda, h> = sum_j n_j <fw_j, h>; precompute the fundamental pairings.
  const Vec p = rs.fundamental_weights().transpose() * z.h1;
  const Vec q = rs.fundamental_weights().transpose() * z.h2;
  cplx acc(0.0, 0.0);
  for (const auto& [k, c] : f.terms()) {
    double re = 0.0, im = 0.0;
    for (int j = 0; j < rs.rank(); ++j) {
      im += k[j] * p[j];
      re += k[j] * q[j];
    }
    acc += c * std::exp(cplx(re, im));
  }
  return acc;
}

/// Product formula for the analytically continued Weyl denominator:
/// sigma_C(z) = (2i)^m prod_{alpha > 0} sin(<alpha, H1 - i H2> / 2).
inline cplx sigma_product(const RootSystem& rs, const TorusPointC& z) {
  if (z.h1.size() != rs.rank() || z.h2.size() != rs.rank()) {
    throw std::invalid_argument("sigma_product: torus point dimension mismatch");
  }
  cplx prod(1.0, 0.0);
  for (const Vec& alpha : rs.positive_roots()) {
    const cplx arg(alpha.dot(z.h1), -alpha.dot(z.h2));
    prod *= std::sin(arg / 2.0);
  }
  const cplx two_i(0.0, 2.0);
  cplx scale(1.0, 0.0);
  for (int i = 0; i < rs.num_positive_roots(); ++i) scale *= two_i;
  return scale * prod;
}

/// Alternating orbit sum N_lambda = sum_w sign(w) f_{w lambda} for a strictly
/// dominant integral lambda.  Has exactly |W| terms with coefficients +-1.
inline LaurentClassFunction weyl_numerator(const RootSystem& rs, const WeightKey& lambda) {
  if (!RootSystem::is_strictly_dominant(lambda)) {
    throw std::invalid_argument("weyl_numerator: lambda must be strictly dominant (orbit degenerates on walls)");
  }
  LaurentClassFunction out;
  for (const WeylElement& w : rs.weyl_elements()) {
    out.add_term(rs.apply(w, lambda), cplx(static_cast<double>(w.sign), 0.0));
  }
  if (out.size() != static_cast<size_t>(rs.weyl_order())) {
    throw std::invalid_argument("weyl_numerator: orbit degenerate; lambda lies on a wall");
  }
  return out;
}

inline LaurentClassFunction weyl_numerator(const RootSystem& rs, const Vec& lambda) {
  return weyl_numerator(rs, rs.key(lambda));
}

/// Convolution of sparse supports; exact on the lattice, bilinear.
inline LaurentClassFunction multiply(const LaurentClassFunction& f, const LaurentClassFunction& g) {
  LaurentClassFunction out;
  for (const auto& [kf, cf] : f.terms()) {
    for (const auto& [kg, cg] : g.terms()) {
      WeightKey k(kf.size());
      for (size_t j = 0; j < kf.size(); ++j) k[j] = kf[j] + kg[j];
      out.add_term(k, cf * cg);
    }
  }
  return out;
}

/// Weight-multiplicity expansion of the irreducible character chi_mu on the
/// complexified torus, computed by synthetic division of N_{mu+delta} by
/// N_delta in the Laurent algebra.  Exact: multiply(result, N_delta) equals
/// N_{mu+delta} on the nose.
///
/// The division uses the group order (grade by <., delta>, lexicographic
/// tie-break).  It is translation invariant and delta strictly maximizes the
/// grade over each numerator orbit, so the leading remainder term always has
/// the form (quotient term) + delta and the loop strictly descends.
inline LaurentClassFunction character_coeffs(const RootSystem& rs, const WeightKey& mu) {
  if (static_cast<int>(mu.size()) != rs.rank()) {
    throw std::invalid_argument("character_coeffs: dimension mismatch");
  }
  if (!RootSystem::is_dominant(mu)) {
    throw std::invalid_argument("character_coeffs: mu must be dominant");
  }
  WeightKey top(mu);
  for (int& n : top) n += 1;  // mu + delta
  const LaurentClassFunction numerator = weyl_numerator(rs, top);
  const LaurentClassFunction denom = weyl_numerator(rs, rs.delta_key());

  const Mat fw_gram = rs.gram().inverse();
  auto grade = [&](const WeightKey& k) {
    double h = 0.0;
    for (int i = 0; i < rs.rank(); ++i)
      for (int j = 0; j < rs.rank(); ++j) h += fw_gram(i, j) * k[i];
    return h;
  };

  LaurentClassFunction::TermMap remainder = numerator.terms();
  LaurentClassFunction quotient;
  long guard = 4L * 1000L * 1000L;
  while (!remainder.empty()) {
    // Leading term of the remainder under the (grade, lex) group order.
    auto lead = remainder.begin();
    double best = grade(lead->first);
    for (auto it = std::next(remainder.begin()); it != remainder.end(); ++it) {
      const double h = grade(it->first);
      if (h > best + 1e-12 || (h > best - 1e-12 && it->first > lead->first)) {
        lead = it;
        best = h;
      }
    }
    const WeightKey lam = lead->first;
    const cplx c = lead->second;
    WeightKey shift(lam);
    for (int j = 0; j < rs.rank(); ++j) shift[j] -= 1;  // lam - delta
    quotient.add_term(shift, c);
    for (const auto& [kd, cd] : denom.terms()) {
      WeightKey k(shift);
      for (int j = 0; j < rs.rank(); ++j) k[j] += kd[j];
      auto [it, inserted] = remainder.emplace(k, -c * cd);
      if (!inserted) {
        it->second -= c * cd;
        if (std::abs(it->second) == 0.0) remainder.erase(it);
      }
    }
    if (--guard < 0) {
      throw std::runtime_error("character_coeffs: synthetic division failed to terminate");
    }
  }
  return quotient;
}

/// True when coefficients satisfy c_{w lambda} = sign(w) c_lambda for every
/// support weight and Weyl element (tolerance coeff_tol).
inline bool is_alternating(const RootSystem& rs, const LaurentClassFunction& f) {
  for (const auto& [k, c] : f.terms()) {
    for (const WeylElement& w : rs.weyl_elements()) {
      const cplx expected = static_cast<double>(w.sign) * c;
      if (std::abs(f.coeff(rs.apply(w, k)) - expected) > coeff_tol * (1.0 + std::abs(c))) {
        return false;
      }
    }
  }
  return true;
}

/// Expands an alternating function as sum_mu c_mu N_{mu+delta}; returns the
/// map mu -> c_mu over dominant integral mu.  Exact on coefficients.
inline std::map<WeightKey, cplx> decompose_alternating(const RootSystem& rs,
                                                       const LaurentClassFunction& phi) {
  if (!is_alternating(rs, phi)) {
    throw std::invalid_argument("decompose_alternating: input is not Weyl alternating");
  }
  std::map<WeightKey, cplx> out;
  for (const auto& [k, c] : phi.terms()) {
    auto rep = rs.dominant_representative(k);
    if (rep.on_wall) {
      if (std::abs(c) > coeff_tol) {
        throw std::invalid_argument("decompose_alternating: nonzero coefficient on a wall");
      }
      continue;
    }
    if (k == rep.weight) {  // strictly dominant representative of its orbit
      WeightKey mu(k);
      for (int& n : mu) n -= 1;  // lambda - delta
      out.emplace(mu, c);
    }
  }
  return out;
}

/// Rebuilds sum_mu c_mu N_{mu+delta} from decomposition coefficients.
inline LaurentClassFunction synthesize_alternating(const RootSystem& rs,
                                                   const std::map<WeightKey, cplx>& coeffs) {
  LaurentClassFunction out;
  for (const auto& [mu, c] : coeffs) {
    WeightKey top(mu);
    for (int& n : top) n += 1;
    out += c * weyl_numerator(rs, top);
  }
  return out;
}

/// Action of a Weyl element on a torus point, w . (H1, H2) = (w H1, w H2).
inline TorusPointC apply(const RootSystem& rs, const WeylElement& w, const TorusPointC& z) {
  return TorusPointC{rs.apply(w, z.h1), rs.apply(w, z.h2)};
}

}  // namespace qcr
