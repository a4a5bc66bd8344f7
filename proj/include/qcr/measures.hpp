#pragma once

// Inner products on the holomorphic L^2 space of the complexified torus with
// the Gaussian heat measure
//
//   d nu'_hbar = (normalized Haar on T) x (pi hbar)^{-r/2} exp(-|H2|^2/hbar) dH2,
//
// a probability measure.  Monomials with distinct integral weights are
// orthogonal; the squared norm of f_lambda is exp(hbar |lambda|^2).  Three
// independent evaluation routes are provided: the closed form, tensor
// quadrature (uniform torus grid x Gauss-Hermite), and Monte Carlo with
// counter-based streams.

#include <qcr/laurent.hpp>
#include <qcr/quadrature.hpp>
#include <qcr/rng.hpp>

#include <functional>
#include <optional>

namespace qcr {

enum class Method { closed_form, quadrature, monte_carlo };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "?";
}

struct HeatMeasure {
  double hbar;
  int rank;
  std::vector<Vec> lattice_basis;  ///< kernel of exp on t: 2 pi times the (co)roots

  HeatMeasure(const RootSystem& rs, double hbar_in) : hbar(hbar_in), rank(rs.rank()) {
    if (!(hbar > 0.0)) throw std::invalid_argument("HeatMeasure: hbar must be positive");
    for (const Vec& a : rs.simple_roots()) {
      lattice_basis.push_back(2.0 * std::numbers::pi * a);
    }
  }
};

struct IntegralResult {
  cplx value{0.0, 0.0};
  double abs_error = 0.0;  ///< 0 for closed form and certified quadrature; SEM for MC
  Method method = Method::closed_form;
  long nodes_or_samples = 0;
  bool certified = false;  ///< quadrature only: torus rule exact for the declared bandwidth
  bool warning = false;    ///< quadrature only: requested grid violates the exactness rule
};

struct QuadratureSpec {
  int torus_points_per_dim = 0;     ///< 0 = choose 2B+1 from the declared bandwidth
  int hermite_nodes_per_dim = 40;
};

/// exp(hbar <lambda, lambda>), the Gaussian moment
/// (pi hbar)^{-r/2} int exp(2<lambda,H>) exp(-|H|^2/hbar) dH.
inline double gaussian_moment(const Vec& lambda, const HeatMeasure& hm) {
  return std::exp(hm.hbar * lambda.squaredNorm());
}

inline double gaussian_moment(const RootSystem& rs, const WeightKey& lambda, const HeatMeasure& hm) {
  return std::exp(hm.hbar * rs.norm_sq(lambda));
}

/// <f, g> = sum_lambda f_lambda conj(g_lambda) exp(hbar |lambda|^2).
/// Cross-monomial terms vanish because distinct integral weights integrate
/// to zero over T.
inline IntegralResult inner_closed_form(const RootSystem& rs, const LaurentClassFunction& f,
                                        const LaurentClassFunction& g, const HeatMeasure& hm) {
  IntegralResult res;
  res.method = Method::closed_form;
  auto itf = f.terms().begin();
  auto itg = g.terms().begin();
  long hits = 0;
  while (itf != f.terms().end() && itg != g.terms().end()) {
    if (itf->first < itg->first) {
      ++itf;
    } else if (itg->first < itf->first) {
      ++itg;
    } else {
      res.value += itf->second * std::conj(itg->second) * gaussian_moment(rs, itf->first, hm);
      ++hits;
      ++itf;
      ++itg;
    }
  }
  res.nodes_or_samples = hits;
  res.certified = true;
  return res;
}

/// L^2(T, dt) pairing (normalized Haar on the compact torus, no Gaussian):
/// closed form sum_lambda f_lambda conj(g_lambda).
inline cplx inner_l2t_closed_form(const LaurentClassFunction& f, const LaurentClassFunction& g) {
  cplx acc(0.0, 0.0);
  auto itf = f.terms().begin();
  auto itg = g.terms().begin();
  while (itf != f.terms().end() && itg != g.terms().end()) {
    if (itf->first < itg->first) {
      ++itf;
    } else if (itg->first < itf->first) {
      ++itg;
    } else {
      acc += itf->second * std::conj(itg->second);
      ++itf;
      ++itg;
    }
  }
  return acc;
}

namespace detail {

/// 1D uniform-grid trapezoid average of the frequency-d character on the
/// circle, (1/N) sum_k exp(2 pi i d k / N).  Exactly one when N divides d,
/// roundoff-level otherwise; this is the torus factor of the tensor rule.
inline cplx torus_phase_average(int d, int n_points) {
  cplx acc(0.0, 0.0);
  for (int k = 0; k < n_points; ++k) {
    const double arg = 2.0 * std::numbers::pi * static_cast<double>(d) * k / n_points;
    acc += cplx(std::cos(arg), std::sin(arg));
  }
  return acc / static_cast<double>(n_points);
}

/// 1D Gauss-Hermite approximation of
/// (pi hbar)^{-1/2} int exp(b H) exp(-H^2/hbar) dH  =  exp(hbar b^2 / 4)
/// after the substitution H = sqrt(hbar) u.
inline double hermite_exp_moment(const QuadRule& rule, double sqrt_hbar, double b) {
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const double ax = sqrt_hbar * b * rule.nodes[i];
    // exp alone may overflow where the weight underflows; the product is
    // always representable, so fold the weight into the exponent out there.
    acc += (ax < 650.0) ? rule.weights[i] * std::exp(ax)
                        : std::exp(ax + std::log(rule.weights[i]));
  }
  return acc / std::sqrt(std::numbers::pi);
}

inline long tensor_grid_size(int n_torus, int n_hermite, int rank) {
  long total = 1;
  for (int j = 0; j < rank; ++j) total *= n_torus;
  for (int j = 0; j < rank; ++j) total *= n_hermite;
  return total;
}

}  // namespace detail

/// Tensor quadrature of <f, g> for sparse Laurent functions, organized as the
/// per-monomial-pair factorization of the same grid functional: for each pair
/// (lambda, mu) the torus grid contributes the product of the 1D phase
/// averages of lambda - mu and the Gauss-Hermite rule contributes the moment
/// of exp(<lambda + mu, H2>).  The exchange of the (finite) node and term
/// sums is exact, so this is the tensor trapezoid x Gauss-Hermite value.
inline IntegralResult inner_quadrature(const RootSystem& rs, const LaurentClassFunction& f,
                                       const LaurentClassFunction& g, const HeatMeasure& hm,
                                       const QuadratureSpec& spec = {}) {
  const int r = rs.rank();
  const auto bf = f.bandwidth(r);
  const auto bg = g.bandwidth(r);
  std::vector<int> band(r);
  int max_band = 0;
  for (int j = 0; j < r; ++j) {
    band[j] = bf[j] + bg[j];
    max_band = std::max(max_band, band[j]);
  }
  const int n_torus = spec.torus_points_per_dim > 0 ? spec.torus_points_per_dim : 2 * max_band + 1;
  bool certified = true;
  for (int j = 0; j < r; ++j) {
    if (n_torus < 2 * band[j] + 1) certified = false;
  }

  const QuadRule hermite = gauss_hermite(spec.hermite_nodes_per_dim);
  const double sqrt_hbar = std::sqrt(hm.hbar);

  auto evaluate_on_grid = [&](int n_tor) {
    std::map<int, cplx> phase_cache;
    auto phase = [&](int d) {
      auto it = phase_cache.find(d);
      if (it == phase_cache.end()) {
        it = phase_cache.emplace(d, detail::torus_phase_average(d, n_tor)).first;
      }
      return it->second;
    };
    // Orthonormal coordinates of the supports, for the Gaussian factors.
    std::vector<Vec> fw, gw;
    fw.reserve(f.size());
    gw.reserve(g.size());
    for (const auto& [k, c] : f.terms()) fw.push_back(rs.weight(k));
    for (const auto& [k, c] : g.terms()) gw.push_back(rs.weight(k));
    cplx acc(0.0, 0.0);
    size_t fi = 0;
    for (const auto& [kf, cf] : f.terms()) {
      size_t gi = 0;
      for (const auto& [kg, cg] : g.terms()) {
        cplx torus(1.0, 0.0);
        for (int j = 0; j < r; ++j) torus *= phase(kf[j] - kg[j]);
        double gauss = 1.0;
        const Vec b = fw[fi] + gw[gi];
        for (int l = 0; l < r; ++l) gauss *= detail::hermite_exp_moment(hermite, sqrt_hbar, b[l]);
        acc += cf * std::conj(cg) * torus * gauss;
        ++gi;
      }
      ++fi;
    }
    return acc;
  };

  IntegralResult res;
  res.method = Method::quadrature;
  res.value = evaluate_on_grid(n_torus);
  res.nodes_or_samples = detail::tensor_grid_size(n_torus, spec.hermite_nodes_per_dim, r);
  res.certified = certified;
  res.warning = spec.torus_points_per_dim > 0 && !certified;
  if (!certified && n_torus >= 2) {
    res.abs_error = std::abs(res.value - evaluate_on_grid(n_torus / 2));
  }
  return res;
}

/// L^2(T, dt) pairing by uniform-grid trapezoid only (no Gaussian factor).
inline IntegralResult inner_l2t_quadrature(const RootSystem& rs, const LaurentClassFunction& f,
                                           const LaurentClassFunction& g, int torus_points_per_dim = 0) {
  const int r = rs.rank();
  const auto bf = f.bandwidth(r);
  const auto bg = g.bandwidth(r);
  int max_band = 0;
  for (int j = 0; j < r; ++j) max_band = std::max(max_band, bf[j] + bg[j]);
  const int n_torus = torus_points_per_dim > 0 ? torus_points_per_dim : 2 * max_band + 1;

  IntegralResult res;
  res.method = Method::quadrature;
  std::map<int, cplx> cache;
  auto phase = [&](int d) {
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, detail::torus_phase_average(d, n_torus)).first;
    return it->second;
  };
  for (const auto& [kf, cf] : f.terms()) {
    for (const auto& [kg, cg] : g.terms()) {
      cplx torus(1.0, 0.0);
      for (int j = 0; j < r; ++j) torus *= phase(kf[j] - kg[j]);
      res.value += cf * std::conj(cg) * torus;
    }
  }
  bool certified = true;
  for (int j = 0; j < r; ++j)
    if (n_torus < 2 * (bf[j] + bg[j]) + 1) certified = false;
  res.certified = certified;
  res.warning = torus_points_per_dim > 0 && !certified;
  long total = 1;
  for (int j = 0; j < r; ++j) total *= n_torus;
  res.nodes_or_samples = total;
  return res;
}

/// An integrand on the complexified torus for the generic (node-loop)
/// quadrature path.  The bandwidth, when declared, is the per-dimension
/// maximum integer frequency in lattice coordinates and certifies exactness
/// of the torus rule.
struct TorusFunction {
  std::function<cplx(const TorusPointC&)> fn;
  std::optional<std::vector<int>> bandwidth;
};

inline TorusFunction as_torus_function(const RootSystem& rs, const LaurentClassFunction& f) {
  return TorusFunction{[&rs, f](const TorusPointC& z) { return evaluate(rs, f, z); },
                       f.bandwidth(rs.rank())};
}

/// Generic tensor-product quadrature: uniform torus grid composed with
/// Gauss-Hermite in the noncompact directions, evaluating the integrand
/// node by node.  Intended for modest grids and as the cross-check of the
/// factorized path.
inline IntegralResult inner_quadrature(const RootSystem& rs, const TorusFunction& f,
                                       const TorusFunction& g, const HeatMeasure& hm,
                                       const QuadratureSpec& spec = {}) {
  const int r = rs.rank();
  std::vector<int> band(r, 0);
  const bool declared = f.bandwidth.has_value() && g.bandwidth.has_value();
  if (declared) {
    for (int j = 0; j < r; ++j) band[j] = (*f.bandwidth)[j] + (*g.bandwidth)[j];
  }
  int max_band = 0;
  for (int j = 0; j < r; ++j) max_band = std::max(max_band, band[j]);
  int n_torus = spec.torus_points_per_dim;
  if (n_torus <= 0) n_torus = declared ? 2 * max_band + 1 : 16;
  bool certified = declared;
  for (int j = 0; j < r && certified; ++j) {
    if (n_torus < 2 * band[j] + 1) certified = false;
  }

  const QuadRule hermite = gauss_hermite(spec.hermite_nodes_per_dim);
  const double sqrt_hbar = std::sqrt(hm.hbar);
  const double weight_norm = std::pow(std::numbers::pi, -0.5 * r);

  auto run = [&](int n_tor) {
    const int m = static_cast<int>(hermite.nodes.size());
    cplx acc(0.0, 0.0);
    std::vector<int> iu(r, 0), ih(r, 0);
    // Odometer over the torus grid, then over the Hermite tensor grid.
    bool more_u = true;
    while (more_u) {
      Vec h1 = Vec::Zero(r);
      for (int j = 0; j < r; ++j) {
        h1 += (2.0 * std::numbers::pi * iu[j] / n_tor) * rs.simple_roots()[j];
      }
      std::fill(ih.begin(), ih.end(), 0);
      bool more_h = true;
      while (more_h) {
        Vec h2(r);
        double w = 1.0;
        for (int l = 0; l < r; ++l) {
          h2[l] = sqrt_hbar * hermite.nodes[ih[l]];
          w *= hermite.weights[ih[l]];
        }
        const TorusPointC z{h1, h2};
        acc += w * f.fn(z) * std::conj(g.fn(z));
        int l = 0;
        for (; l < r; ++l) {
          if (++ih[l] < m) break;
          ih[l] = 0;
        }
        more_h = l < r;
      }
      int j = 0;
      for (; j < r; ++j) {
        if (++iu[j] < n_tor) break;
        iu[j] = 0;
      }
      more_u = j < r;
    }
    double torus_cells = 1.0;
    for (int j = 0; j < r; ++j) torus_cells *= n_tor;
    return acc * weight_norm / torus_cells;
  };

  IntegralResult res;
  res.method = Method::quadrature;
  res.value = run(n_torus);
  res.nodes_or_samples = detail::tensor_grid_size(n_torus, spec.hermite_nodes_per_dim, r);
  res.certified = certified;
  res.warning = spec.torus_points_per_dim > 0 && declared && !certified;
  if (!certified && n_torus >= 2) {
    res.abs_error = std::abs(res.value - run(n_torus / 2));
  }
  return res;
}

namespace detail {

/// Evaluates a Laurent function from per-dimension power tables of the
/// lattice phases; the tables absorb both the compact phase and the
/// noncompact growth of the sample point.
class LaurentSampler {
 public:
  LaurentSampler(const RootSystem& rs, const LaurentClassFunction& f) : rank_(rs.rank()) {
    terms_.reserve(f.size());
    for (const auto& [k, c] : f.terms()) terms_.push_back({k, c});
    band_ = f.bandwidth(rank_);
  }

  const std::vector<int>& bandwidth() const { return band_; }
  bool empty() const { return terms_.empty(); }

  /// tables[j] must hold t_j^n for n in [-band_j, band_j] at offset band_j.
  cplx eval(const std::vector<std::vector<cplx>>& tables) const {
    cplx acc(0.0, 0.0);
    for (const auto& [k, c] : terms_) {
      cplx mono(1.0, 0.0);
      for (int j = 0; j < rank_; ++j) mono *= tables[j][static_cast<size_t>(k[j] + band_[j])];
      acc += c * mono;
    }
    return acc;
  }

 private:
  int rank_;
  std::vector<std::pair<WeightKey, cplx>> terms_;
  std::vector<int> band_;
};

inline void fill_power_table(std::vector<cplx>& table, int band, cplx base) {
  table.assign(static_cast<size_t>(2 * band + 1), cplx(1.0, 0.0));
  cplx pos(1.0, 0.0), neg(1.0, 0.0);
  const cplx inv = 1.0 / base;
  for (int n = 1; n <= band; ++n) {
    pos *= base;
    neg *= inv;
    table[static_cast<size_t>(band + n)] = pos;
    table[static_cast<size_t>(band - n)] = neg;
  }
}

}  // namespace detail

/// Monte Carlo value of <f, g>: H1 uniform on the fundamental domain of the
/// torus, H2 centered Gaussian with covariance (hbar/2) I, antithetic in H2.
/// Streams are counter-based and keyed by the pair index, so the estimate is
/// bit-identical for any worker count.
inline IntegralResult inner_monte_carlo(const RootSystem& rs, const LaurentClassFunction& f,
                                        const LaurentClassFunction& g, const HeatMeasure& hm,
                                        long n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("inner_monte_carlo: need at least two samples");
  const int r = rs.rank();
  const long n_pairs = n_samples / 2;
  const detail::LaurentSampler sf(rs, f);
  const bool same = &f == &g;
  const detail::LaurentSampler sg_storage = same ? sf : detail::LaurentSampler(rs, g);
  const detail::LaurentSampler& sg = same ? sf : sg_storage;

  std::vector<int> band(r, 0);
  for (int j = 0; j < r; ++j) band[j] = std::max(sf.bandwidth()[j], sg.bandwidth()[j]);

  const CounterRng rng(seed);
  const double sd = std::sqrt(hm.hbar / 2.0);

  const long chunk_size = 4096;
  const long n_chunks = (n_pairs + chunk_size - 1) / chunk_size;
  std::vector<cplx> chunk_sum(static_cast<size_t>(n_chunks), cplx(0.0, 0.0));
  std::vector<double> chunk_sq(static_cast<size_t>(n_chunks), 0.0);

  parallel_chunks(n_chunks, [&](long c) {
    const long begin = c * chunk_size;
    const long end = std::min(n_pairs, begin + chunk_size);
    cplx sum(0.0, 0.0);
    double sq = 0.0;
    std::vector<std::vector<cplx>> tables_plus(r), tables_minus(r);
    std::vector<double> q1(r), q2(r);
    Vec noise(r);
    for (long p = begin; p < end; ++p) {
      for (int j = 0; j < r; ++j) q1[j] = 2.0 * std::numbers::pi * rng.uniform(p, j);
      for (int l = 0; l < r; l += 2) {
        double z0, z1;
        rng.normal_pair(p, static_cast<std::uint64_t>(r + l), z0, z1);
        noise[l] = sd * z0;
        if (l + 1 < r) noise[l + 1] = sd * z1;
      }
      // Lattice phases: <fw_j, H1> = q1_j on the coroot fundamental domain,
      // <fw_j, H2> from the orthonormal coordinates of the Gaussian draw.
      const Vec q2v = rs.fundamental_weights().transpose() * noise;
      for (int j = 0; j < r; ++j) q2[j] = q2v[j];
      for (int j = 0; j < r; ++j) {
        detail::fill_power_table(tables_plus[j], band[j],
                                 std::exp(cplx(q2[j], q1[j])));
        detail::fill_power_table(tables_minus[j], band[j],
                                 std::exp(cplx(-q2[j], q1[j])));
      }
      const cplx fp = sf.eval(tables_plus);
      const cplx gp = same ? fp : sg.eval(tables_plus);
      const cplx fm = sf.eval(tables_minus);
      const cplx gm = same ? fm : sg.eval(tables_minus);
      const cplx v = 0.5 * (fp * std::conj(gp) + fm * std::conj(gm));
      sum += v;
      sq += std::norm(v);
    }
    chunk_sum[static_cast<size_t>(c)] = sum;
    chunk_sq[static_cast<size_t>(c)] = sq;
  });

  cplx total(0.0, 0.0);
  double total_sq = 0.0;
  for (long c = 0; c < n_chunks; ++c) {
    total += chunk_sum[static_cast<size_t>(c)];
    total_sq += chunk_sq[static_cast<size_t>(c)];
  }

  IntegralResult res;
  res.method = Method::monte_carlo;
  res.nodes_or_samples = 2 * n_pairs;
  res.value = total / static_cast<double>(n_pairs);
  if (n_pairs > 1) {
    const double var =
        std::max(0.0, (total_sq - static_cast<double>(n_pairs) * std::norm(res.value)) /
                          static_cast<double>(n_pairs - 1));
    res.abs_error = std::sqrt(var / static_cast<double>(n_pairs));
  }
  return res;
}

/// Heat operator exp(hbar Laplacian / 2) on torus monomials: the coefficient
/// at lambda picks up exp(-hbar |lambda|^2 / 2).
inline LaurentClassFunction sb_scale_torus(const RootSystem& rs, const LaurentClassFunction& f,
                                           double hbar) {
  LaurentClassFunction::TermMap terms;
  for (const auto& [k, c] : f.terms()) {
    terms.emplace(k, c * std::exp(-0.5 * hbar * rs.norm_sq(k)));
  }
  return LaurentClassFunction(std::move(terms));
}

/// Laplacian eigenvalue shift of the irreducible character with highest
/// weight mu: c(mu) = |mu + delta|^2 - |delta|^2.
inline double casimir_shift(const RootSystem& rs, const WeightKey& mu) {
  if (!RootSystem::is_dominant(mu)) {
    throw std::invalid_argument("casimir_shift: mu must be dominant");
  }
  WeightKey top(mu);
  for (int& n : top) n += 1;
  return rs.norm_sq(top) - rs.norm_sq(rs.delta_key());
}

/// Squared L^2 norm of the SU(2) character of highest weight k fw against
/// the normalized Haar measure, by direct quadrature over the group in
/// hyperspherical coordinates (Gauss-Legendre in psi and theta, trapezoid in
/// phi).  Character orthonormality makes the expected value 1.  This route
/// never references the torus reduction, so it serves as the independent
/// oracle for the Weyl integral formula.
inline double haar_norm_su2(int k, int grid) {
  if (k < 0 || grid < 2) throw std::invalid_argument("haar_norm_su2: bad arguments");
  const QuadRule leg = gauss_legendre(grid);
  const double half_pi = 0.5 * std::numbers::pi;
  double acc = 0.0;
  for (int ip = 0; ip < grid; ++ip) {
    const double psi = half_pi * (leg.nodes[ip] + 1.0);
    const double wp = half_pi * leg.weights[ip];
    for (int it = 0; it < grid; ++it) {
      const double theta = half_pi * (leg.nodes[it] + 1.0);
      const double wt = half_pi * leg.weights[it];
      for (int ifi = 0; ifi < grid; ++ifi) {
        const double wf = 2.0 * std::numbers::pi / grid;
        // Group element in quaternion coordinates, u = x0 + i x.sigma with
        // |x| = 1; tr(u) = 2 x0, and a class function sees nothing else.
        const double t = std::cos(psi);
        // Characters from the trace by the degree recursion
        // chi_{j+1} = 2 t chi_j - chi_{j-1}.
        double c_prev = 1.0, c_cur = 2.0 * t;
        double chi = (k == 0) ? 1.0 : c_cur;
        for (int j = 2; j <= k; ++j) {
          const double next = 2.0 * t * c_cur - c_prev;
          c_prev = c_cur;
          c_cur = next;
          chi = next;
        }
        const double density = std::sin(psi) * std::sin(psi) * std::sin(theta) /
                               (2.0 * std::numbers::pi * std::numbers::pi);
        acc += wp * wt * wf * chi * chi * density;
      }
    }
  }
  return acc;
}

}  // namespace qcr
