#pragma once

// The two quantum Hilbert spaces as coefficient spaces, and the map between
// them.
//
// An invariant state is a finite coefficient vector over dominant integral
// weights and represents the holomorphic class function F = sum c_mu chi_mu;
// its squared norm is sum |c_mu|^2 exp(hbar c(mu)) with c(mu) the Laplacian
// shift of the character.  A reduced state is a Weyl-alternating Laurent
// function phi with squared norm (1/|W|) <phi, phi> under the torus heat
// measure.  The map between the spaces multiplies by the Weyl denominator and
// restricts: on coefficients, c_mu goes to c_mu N_{mu+delta}.  The norm ratio
// of a state and its image is the constant exp(-hbar |delta|^2).

#include <qcr/measures.hpp>

#include <json.hpp>

#include <fstream>

namespace qcr {

struct InvariantState {
  std::map<WeightKey, cplx> coeffs;  ///< dominant integral weight -> coefficient
  double hbar = 1.0;
};

struct ReducedState {
  LaurentClassFunction phi;  ///< Weyl alternating, supported off the walls
  double hbar = 1.0;
};

inline void validate_state(const RootSystem& rs, const InvariantState& s) {
  if (!(s.hbar > 0.0)) throw std::invalid_argument("InvariantState: hbar must be positive");
  for (const auto& [mu, c] : s.coeffs) {
    if (static_cast<int>(mu.size()) != rs.rank() || !RootSystem::is_dominant(mu)) {
      throw std::invalid_argument("InvariantState: support weight is not dominant");
    }
  }
}

/// Squared norm of the class function sum c_mu chi_mu on the big group:
/// sum |c_mu|^2 exp(hbar (|mu+delta|^2 - |delta|^2)) by character
/// orthogonality and the heat-operator eigenvalues.
inline double norm_sq_invariant(const RootSystem& rs, const InvariantState& s) {
  validate_state(rs, s);
  double acc = 0.0;
  for (const auto& [mu, c] : s.coeffs) {
    acc += std::norm(c) * std::exp(s.hbar * casimir_shift(rs, mu));
  }
  return acc;
}

/// Multiplication by the Weyl denominator followed by restriction to the
/// torus: c_mu chi_mu goes to c_mu N_{mu+delta}.
inline ReducedState b_map(const RootSystem& rs, const InvariantState& s) {
  validate_state(rs, s);
  ReducedState out;
  out.hbar = s.hbar;
  for (const auto& [mu, c] : s.coeffs) {
    WeightKey top(mu);
    for (int& n : top) n += 1;
    out.phi += c * weyl_numerator(rs, top);
  }
  return out;
}

/// Inverse of b_map: expand the alternating function over numerators and
/// reindex by mu = lambda - delta.  Exact on coefficients.
inline InvariantState b_inverse(const RootSystem& rs, const ReducedState& t) {
  if (!(t.hbar > 0.0)) throw std::invalid_argument("ReducedState: hbar must be positive");
  InvariantState out;
  out.hbar = t.hbar;
  out.coeffs = decompose_alternating(rs, t.phi);
  return out;
}

/// Squared norm (1/|W|) <phi, phi> under the heat measure, by the chosen
/// method.
inline IntegralResult norm_sq_reduced(const RootSystem& rs, const ReducedState& t, Method method,
                                      const QuadratureSpec& spec = {}, long mc_samples = 100000,
                                      std::uint64_t mc_seed = 0) {
  if (!(t.hbar > 0.0)) throw std::invalid_argument("ReducedState: hbar must be positive");
  const HeatMeasure hm(rs, t.hbar);
  IntegralResult res;
  switch (method) {
    case Method::closed_form:
      res = inner_closed_form(rs, t.phi, t.phi, hm);
      break;
    case Method::quadrature:
      res = inner_quadrature(rs, t.phi, t.phi, hm, spec);
      break;
    case Method::monte_carlo:
      res = inner_monte_carlo(rs, t.phi, t.phi, hm, mc_samples, mc_seed);
      break;
  }
  const double scale = 1.0 / rs.weyl_order();
  res.value *= scale;
  res.abs_error *= scale;
  return res;
}

struct UnitarityCheck {
  double ratio = 0.0;     ///< invariant norm over reduced norm
  double expected = 0.0;  ///< exp(-hbar |delta|^2)
  double rel_err = 0.0;
  double norm_invariant = 0.0;
  IntegralResult norm_reduced;
};

/// Compares the two squared norms of a state across the map; their ratio is
/// the constant exp(-hbar |delta|^2) independent of the state.
inline UnitarityCheck unitarity_check(const RootSystem& rs, const InvariantState& s, Method method,
                                      const QuadratureSpec& spec = {}, long mc_samples = 100000,
                                      std::uint64_t mc_seed = 0) {
  validate_state(rs, s);
  if (s.coeffs.empty()) throw std::invalid_argument("unitarity_check: state is zero");
  UnitarityCheck out;
  out.norm_invariant = norm_sq_invariant(rs, s);
  out.norm_reduced = norm_sq_reduced(rs, b_map(rs, s), method, spec, mc_samples, mc_seed);
  out.ratio = out.norm_invariant / out.norm_reduced.value.real();
  out.expected = std::exp(-s.hbar * rs.norm_sq(rs.delta_key()));
  out.rel_err = std::abs(out.ratio / out.expected - 1.0);
  return out;
}

/// Pointwise magnitude of the reduced section at a regular point:
/// |phi(z)| exp(-|H2|^2 / (2 hbar)) / |sigma_C(z)|^{1/2}.
inline double reduced_pointwise_magnitude(const RootSystem& rs, const ReducedState& t,
                                          const TorusPointC& z) {
  const double sigma_abs = std::abs(sigma_product(rs, z));
  if (sigma_abs <= regularity_tol) {
    throw std::invalid_argument("reduced_pointwise_magnitude: point is in the singular band");
  }
  const double gauss = std::exp(-z.h2.squaredNorm() / (2.0 * t.hbar));
  return std::abs(evaluate(rs, t.phi, z)) * gauss / std::sqrt(sigma_abs);
}

// --- serialization -------------------------------------------------------

/// Terms as a list of {weight, re, im} records, weights in the
/// fundamental-weight basis.
inline nlohmann::json laurent_to_json(const LaurentClassFunction& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : f.terms()) {
    terms.push_back({{"weight", k}, {"re", c.real()}, {"im", c.imag()}});
  }
  return terms;
}

inline LaurentClassFunction laurent_from_json(const nlohmann::json& j) {
  LaurentClassFunction f;
  for (const auto& t : j) {
    f.add_term(t.at("weight").get<WeightKey>(), cplx(t.at("re").get<double>(), t.at("im").get<double>()));
  }
  return f;
}

inline nlohmann::json state_to_json(const InvariantState& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [mu, c] : s.coeffs) {
    coeffs.push_back({{"weight", mu}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"hbar", s.hbar}, {"coeffs", coeffs}};
}

inline InvariantState state_from_json(const nlohmann::json& j) {
  InvariantState s;
  s.hbar = j.at("hbar").get<double>();
  for (const auto& t : j.at("coeffs")) {
    s.coeffs[t.at("weight").get<WeightKey>()] =
        cplx(t.at("re").get<double>(), t.at("im").get<double>());
  }
  return s;
}

inline void save_state(const InvariantState& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_state: cannot open " + path);
  out << state_to_json(s).dump(2) << "\n";
}

inline InvariantState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_state: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return state_from_json(j);
}

/// Seeded random state with the given number of distinct dominant support
/// weights of level at most max_level.
inline InvariantState random_invariant_state(const RootSystem& rs, int n_terms, int max_level,
                                             double hbar, const CounterRng& rng,
                                             std::uint64_t stream) {
  const auto pool = RootSystem::dominant_weights(rs.rank(), max_level);
  if (static_cast<int>(pool.size()) < n_terms) {
    throw std::invalid_argument("random_invariant_state: not enough dominant weights at this level");
  }
  InvariantState s;
  s.hbar = hbar;
  std::uint64_t slot = 0;
  while (static_cast<int>(s.coeffs.size()) < n_terms) {
    const auto idx = static_cast<size_t>(rng.uniform(stream, slot++) * pool.size());
    double a, b;
    rng.normal_pair(stream, 1000 + 2 * slot, a, b);
    s.coeffs.emplace(pool[std::min(idx, pool.size() - 1)], cplx(a, b));
    if (slot > 100000) {
      throw std::runtime_error("random_invariant_state: sampler failed to fill the support");
    }
  }
  return s;
}

}  // namespace qcr
