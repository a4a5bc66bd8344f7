#pragma once

// Batch verification suites.  Each suite runs a seeded battery against one of
// the identities the library implements and returns report rows; the CLI and
// the acceptance runner are thin wrappers around these.

#include <qcr/reduction.hpp>
#include <qcr/report.hpp>
#include <qcr/states.hpp>

#include <chrono>

namespace qcr {

namespace detail {

/// Fresh 64-bit seed derived from the campaign seed and battery indices, so
/// different batteries never reuse variates.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return CounterRng(base).raw(a, b);
}

/// Smallest level whose dominant-weight count reaches ten, per rank: the
/// random-state batteries need ten distinct support weights.
inline int state_level_cap(int rank) {
  switch (rank) {
    case 1: return 9;
    case 2: return 3;
    default: return 2;
  }
}

/// Monte Carlo batteries run at this hbar.  The norm integrand has relative
/// variance about exp(2 hbar |lambda_max|^2), and the sampler only sees the
/// variance-dominating region when hbar |lambda_max|^2 stays near one; this
/// value keeps the heaviest battery (rank one, |lambda_max|^2 = 50) at 1.25,
/// where the reported standard error is trustworthy at 10^6 samples.
inline constexpr double mc_battery_hbar = 0.025;

inline TorusPointC random_torus_point(const RootSystem& rs, const CounterRng& rng,
                                      std::uint64_t stream, double h2_scale = 1.0) {
  const int r = rs.rank();
  Vec h1 = Vec::Zero(r), h2(r);
  for (int j = 0; j < r; ++j) {
    h1 += (2.0 * std::numbers::pi * rng.uniform(stream, j)) * rs.simple_roots()[j];
  }
  for (int j = 0; j < r; j += 2) {
    double a, b;
    rng.normal_pair(stream, 50 + j, a, b);
    h2[j] = h2_scale * a;
    if (j + 1 < r) h2[j + 1] = h2_scale * b;
  }
  return TorusPointC{h1, h2};
}

class RowTimer {
 public:
  explicit RowTimer(bool enabled) : enabled_(enabled) { reset(); }
  void reset() {
    if (enabled_) start_ = std::chrono::steady_clock::now();
  }
  double take() {
    if (!enabled_) return 0.0;
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

inline std::string weight_label(const WeightKey& k) {
  std::string s = "[";
  for (size_t i = 0; i < k.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + "]";
}

inline std::string hbar_label(double hbar) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", hbar);
  return buf;
}

}  // namespace detail

/// Norm-ratio identity rows: per-character cases by all three methods, the
/// seeded random-state battery, and the torus heat-scaling isometry.
inline std::vector<ReportRow> run_isometry(const CampaignConfig& cfg) {
  validate_config(cfg);
  std::vector<ReportRow> rows;
  detail::RowTimer timer(cfg.timings);
  QuadratureSpec spec;
  spec.torus_points_per_dim = cfg.torus_points_per_dim;
  spec.hermite_nodes_per_dim = cfg.hermite_nodes;

  const double tol_closed = check_tolerance(cfg, "isometry_closed", 1e-12);
  const double tol_quad = check_tolerance(cfg, "isometry_quadrature", 1e-8);
  const double tol_state = check_tolerance(cfg, "isometry_state_closed", 1e-10);
  const double tol_sb = check_tolerance(cfg, "isometry_sb_torus", 1e-10);

  for (int rank = 1; rank <= cfg.rank; ++rank) {
    const auto rs = RootSystem::build(cfg.group_type, rank);
    const double delta_sq = rs.norm_sq(rs.delta_key());

    // Character battery.  The Monte Carlo row is emitted only where the
    // estimator's variance region is reachable at the configured sample
    // count; see mc_battery_hbar.
    long mc_emitted = 0, mc_covered = 0;
    for (double hbar : cfg.hbar_list) {
      const double expected_const = std::exp(-hbar * delta_sq);
      for (const WeightKey& mu : RootSystem::dominant_weights(rank, cfg.max_level)) {
        const InvariantState s{{{mu, cplx(1.0, 0.0)}}, hbar};
        const double rhs = norm_sq_invariant(rs, s);
        const ReducedState t = b_map(rs, s);
        const std::string case_base = "A" + std::to_string(rank) + " mu=" + detail::weight_label(mu) +
                                      " hbar=" + detail::hbar_label(hbar);
        timer.reset();
        {
          auto res = norm_sq_reduced(rs, t, Method::closed_form);
          const double lhs = expected_const * res.value.real();
          const double rel = std::abs(lhs / rhs - 1.0);
          rows.push_back({"isometry", case_base, lhs, rhs, rel, "closed_form", rel <= tol_closed,
                          res.abs_error, res.nodes_or_samples, timer.take()});
        }
        if (rank <= 2) {
          timer.reset();
          auto res = norm_sq_reduced(rs, t, Method::quadrature, spec);
          const double lhs = expected_const * res.value.real();
          const double rel = std::abs(lhs / rhs - 1.0);
          rows.push_back({"isometry", case_base, lhs, rhs, rel, "quadrature",
                          rel <= tol_quad && res.certified, res.abs_error, res.nodes_or_samples,
                          timer.take()});
        }
        WeightKey top(mu);
        for (int& n : top) n += 1;
        if (hbar * rs.norm_sq(top) <= 2.5) {
          timer.reset();
          const long n_samples = std::min<long>(cfg.mc_samples, 200000);
          auto mc = norm_sq_reduced(rs, t, Method::monte_carlo, spec, n_samples,
                                    detail::derive_seed(cfg.seed, 7000 + rank, rows.size()));
          auto cf = norm_sq_reduced(rs, t, Method::closed_form);
          const double lhs = expected_const * mc.value.real();
          const double miss = std::abs(mc.value.real() - cf.value.real());
          // Individual rows gate at four standard errors (per-row false-fail
          // rate about 6e-5); the aggregate row counts the three-sigma
          // coverage with its binomial allowance.
          ++mc_emitted;
          mc_covered += (miss <= 3.0 * mc.abs_error) ? 1 : 0;
          const double rel = std::abs(lhs / rhs - 1.0);
          rows.push_back({"isometry", case_base, lhs, rhs, rel, "monte_carlo",
                          miss <= 4.0 * mc.abs_error, expected_const * mc.abs_error,
                          mc.nodes_or_samples, timer.take()});
        }
      }
    }
    if (mc_emitted > 0) {
      const long allowed = std::max<long>(1, mc_emitted / 100);
      rows.push_back({"isometry", "A" + std::to_string(rank) + " character mc coverage",
                      static_cast<double>(mc_covered), static_cast<double>(mc_emitted),
                      1.0 - static_cast<double>(mc_covered) / mc_emitted, "monte_carlo",
                      mc_emitted - mc_covered <= allowed, 0.0, mc_emitted, 0.0});
    }

    // Random-state battery: closed form at the campaign hbar values, Monte
    // Carlo coverage at the dedicated battery hbar.
    const CounterRng rng(detail::derive_seed(cfg.seed, 100, rank));
    double worst_state_rel = 0.0;
    long covered = 0;
    const int n_states = 100;
    timer.reset();
    for (int i = 0; i < n_states; ++i) {
      const double hbar = cfg.hbar_list[i % cfg.hbar_list.size()];
      auto s = random_invariant_state(rs, 10, detail::state_level_cap(rank), hbar, rng, i);
      worst_state_rel = std::max(worst_state_rel,
                                 unitarity_check(rs, s, Method::closed_form).rel_err);
      InvariantState s_mc = s;
      s_mc.hbar = detail::mc_battery_hbar;
      const ReducedState t_mc = b_map(rs, s_mc);
      auto cf = norm_sq_reduced(rs, t_mc, Method::closed_form);
      auto mc = norm_sq_reduced(rs, t_mc, Method::monte_carlo, spec, cfg.mc_samples,
                                detail::derive_seed(cfg.seed, 200 + rank, i));
      if (std::abs(mc.value.real() - cf.value.real()) <= 3.0 * mc.abs_error) ++covered;
    }
    rows.push_back({"isometry", "A" + std::to_string(rank) + " random states worst rel_err",
                    worst_state_rel, 0.0, worst_state_rel, "closed_form",
                    worst_state_rel <= tol_state, 0.0, n_states, timer.take()});
    rows.push_back({"isometry", "A" + std::to_string(rank) + " random states mc coverage",
                    static_cast<double>(covered), static_cast<double>(n_states),
                    1.0 - static_cast<double>(covered) / n_states, "monte_carlo", covered >= 99,
                    0.0, cfg.mc_samples, timer.take()});

    // Torus heat-scaling isometry on random trig polynomials.
    if (rank <= 2) {
      const CounterRng rng_sb(detail::derive_seed(cfg.seed, 300, rank));
      double worst = 0.0;
      timer.reset();
      for (int i = 0; i < 100; ++i) {
        const double hbar = cfg.hbar_list[i % cfg.hbar_list.size()];
        LaurentClassFunction f;
        for (int t = 0; t < 8; ++t) {
          WeightKey k(rank);
          for (int j = 0; j < rank; ++j) {
            k[j] = static_cast<int>(rng_sb.uniform(i, 2 * t + j) * 13) - 6;
          }
          double a, b;
          rng_sb.normal_pair(i, 100 + 2 * t, a, b);
          f.add_term(k, cplx(a, b));
        }
        const double lhs = inner_l2t_closed_form(f, f).real();
        const auto scaled = sb_scale_torus(rs, f, hbar);
        const double rhs =
            inner_closed_form(rs, scaled, scaled, HeatMeasure(rs, hbar)).value.real();
        if (lhs > 0.0) worst = std::max(worst, std::abs(rhs / lhs - 1.0));
      }
      rows.push_back({"isometry", "A" + std::to_string(rank) + " torus heat scaling worst rel_err",
                      worst, 0.0, worst, "closed_form", worst <= tol_sb, 0.0, 100, timer.take()});
    }
  }
  return rows;
}

/// SU(2) Haar character norms against the torus quadrature route.
inline std::vector<ReportRow> run_weyl_integral(const CampaignConfig& cfg) {
  validate_config(cfg);
  std::vector<ReportRow> rows;
  detail::RowTimer timer(cfg.timings);
  const double tol_haar = check_tolerance(cfg, "weyl_haar", 1e-6);
  const double tol_torus = check_tolerance(cfg, "weyl_torus", 1e-12);
  const auto rs = RootSystem::build("A", 1);
  const int grid = 96;
  for (int k = 0; k <= 5; ++k) {
    timer.reset();
    const double haar = haar_norm_su2(k, grid);
    const double rel_haar = std::abs(haar - 1.0);
    rows.push_back({"weyl-integral", "su2 k=" + std::to_string(k) + " haar", haar, 1.0, rel_haar,
                    "quadrature", rel_haar <= tol_haar, 0.0, static_cast<long>(grid) * grid * grid,
                    timer.take()});
    timer.reset();
    const auto num = weyl_numerator(rs, WeightKey{k + 1});
    const auto torus = inner_l2t_quadrature(rs, num, num);
    const double rel_torus = std::abs(torus.value.real() / 2.0 - 1.0);
    rows.push_back({"weyl-integral", "su2 k=" + std::to_string(k) + " torus |sigma chi|^2",
                    torus.value.real(), 2.0, rel_torus, "quadrature", rel_torus <= tol_torus, 0.0,
                    torus.nodes_or_samples, timer.take()});
    const double cross = std::abs(haar - torus.value.real() / 2.0);
    rows.push_back({"weyl-integral", "su2 k=" + std::to_string(k) + " haar vs torus", haar,
                    torus.value.real() / 2.0, cross, "quadrature", cross <= tol_haar, 0.0, 0,
                    0.0});
  }
  return rows;
}

/// Gram diagonality of the numerator basis under both inner-product routes.
inline std::vector<ReportRow> run_orthogonality(const CampaignConfig& cfg) {
  validate_config(cfg);
  std::vector<ReportRow> rows;
  detail::RowTimer timer(cfg.timings);
  const double tol = check_tolerance(cfg, "orthogonality", 1e-10);
  QuadratureSpec spec;
  spec.torus_points_per_dim = cfg.torus_points_per_dim;
  spec.hermite_nodes_per_dim = cfg.hermite_nodes;
  const int level = 4;
  for (int rank = 1; rank <= std::min(cfg.rank, 2); ++rank) {
    const auto rs = RootSystem::build(cfg.group_type, rank);
    std::vector<LaurentClassFunction> nums;
    for (const WeightKey& mu : RootSystem::dominant_weights(rank, level)) {
      WeightKey top(mu);
      for (int& n : top) n += 1;
      nums.push_back(weyl_numerator(rs, top));
    }
    for (double hbar : cfg.hbar_list) {
      const HeatMeasure hm(rs, hbar);
      double worst_cf = 0.0, worst_quad = 0.0;
      timer.reset();
      std::vector<double> diag_cf(nums.size()), diag_quad(nums.size());
      for (size_t i = 0; i < nums.size(); ++i) {
        diag_cf[i] = inner_closed_form(rs, nums[i], nums[i], hm).value.real();
        diag_quad[i] = inner_quadrature(rs, nums[i], nums[i], hm, spec).value.real();
      }
      for (size_t i = 0; i < nums.size(); ++i) {
        for (size_t j = i + 1; j < nums.size(); ++j) {
          const double scale = std::sqrt(diag_cf[i] * diag_cf[j]);
          worst_cf = std::max(
              worst_cf, std::abs(inner_closed_form(rs, nums[i], nums[j], hm).value) / scale);
          worst_quad = std::max(
              worst_quad,
              std::abs(inner_quadrature(rs, nums[i], nums[j], hm, spec).value) / scale);
        }
      }
      const std::string base = "A" + std::to_string(rank) + " hbar=" + detail::hbar_label(hbar) +
                               " level<=" + std::to_string(level);
      const double ms = timer.take();
      rows.push_back({"orthogonality", base + " worst off-diagonal", worst_cf, 0.0, worst_cf,
                      "closed_form", worst_cf <= tol, 0.0,
                      static_cast<long>(nums.size() * nums.size()), ms / 2});
      rows.push_back({"orthogonality", base + " worst off-diagonal", worst_quad, 0.0, worst_quad,
                      "quadrature", worst_quad <= tol, 0.0,
                      static_cast<long>(nums.size() * nums.size()), ms / 2});
    }
  }
  return rows;
}

/// Regularity-classifier agreement, momentum equivariance, and normalizer
/// orientation signs on seeded batteries.  With sample_dump set, every
/// classified sample is appended to a CSV file: matrix size, both angle
/// vectors, the three classifier flags, the stabilizer dimension, |sigma_C|
/// at the polar image, and the adjoint-determinant residual there.
inline std::vector<ReportRow> run_reduction(const CampaignConfig& cfg) {
  validate_config(cfg);
  std::vector<ReportRow> rows;
  detail::RowTimer timer(cfg.timings);
  std::ofstream dump;
  if (!cfg.sample_dump_path.empty()) {
    dump = open_output_file(cfg.sample_dump_path);
    dump << "n,theta1,theta2,via_theorem,via_rss,via_stabilizer_dim,stabilizer_dim,sigma_abs,"
            "det_residual\n";
  }
  const long batch = 10000;
  for (int n = 2; n <= std::min(cfg.rank + 1, 3); ++n) {
    const auto rs = RootSystem::build("A", n - 1);
    const CounterRng rng(detail::derive_seed(cfg.seed, 400, n));
    long agree = 0, classified = 0, irregular = 0;
    double worst_momentum = 0.0;
    timer.reset();

    const WeightDictionary dict(rs);
    std::vector<long> chunk_agree((batch + 255) / 256, 0), chunk_class((batch + 255) / 256, 0),
        chunk_irreg((batch + 255) / 256, 0);
    std::vector<double> chunk_mom((batch + 255) / 256, 0.0);
    std::vector<std::string> chunk_dump(dump.is_open() ? chunk_agree.size() : 0);
    parallel_chunks(static_cast<long>(chunk_agree.size()), [&](long c) {
      const long begin = c * 256, end = std::min(batch, begin + 256);
      for (long i = begin; i < end; ++i) {
        const auto p = random_zero_momentum(rs, rng, static_cast<std::uint64_t>(i));
        chunk_mom[c] = std::max(chunk_mom[c], momentum(p).norm());
        const auto rep = classify_regular(p);
        if (dump.is_open()) {
          const auto nf = conjugate_to_torus(p);
          const TorusPointC z{dict.coords(nf.theta1), dict.coords(nf.theta2)};
          const auto [det, sig] = det_contraction(rs, z, n);
          std::ostringstream line;
          line.precision(17);
          line << n << ",\"";
          for (int j = 0; j < n; ++j) line << (j ? ";" : "") << nf.theta1[j];
          line << "\",\"";
          for (int j = 0; j < n; ++j) line << (j ? ";" : "") << nf.theta2[j];
          line << "\"," << rep.via_theorem << "," << rep.via_rss << ","
               << rep.via_stabilizer_dim << "," << rep.stabilizer_dim << ","
               << std::abs(sigma_product(rs, z)) << "," << std::abs(det - sig) << "\n";
          chunk_dump[c] += line.str();
        }
        if (rep.indeterminate) continue;
        ++chunk_class[c];
        if (rep.via_theorem == rep.via_rss && rep.via_theorem == rep.via_stabilizer_dim) {
          ++chunk_agree[c];
        }
        if (!rep.via_theorem) ++chunk_irreg[c];
      }
    });
    for (size_t c = 0; c < chunk_agree.size(); ++c) {
      agree += chunk_agree[c];
      classified += chunk_class[c];
      irregular += chunk_irreg[c];
      worst_momentum = std::max(worst_momentum, chunk_mom[c]);
      if (dump.is_open()) dump << chunk_dump[c];
    }
    const std::string base = "su" + std::to_string(n) + " ";
    const double ms = timer.take();
    rows.push_back({"reduction", base + "classifier agreement", static_cast<double>(agree),
                    static_cast<double>(classified),
                    classified ? 1.0 - static_cast<double>(agree) / classified : 0.0,
                    "closed_form", agree == classified, 0.0, classified, ms});
    rows.push_back({"reduction", base + "irregular fraction", static_cast<double>(irregular), 0.0,
                    static_cast<double>(irregular) / std::max<long>(classified, 1), "closed_form",
                    irregular == 0, 0.0, classified, 0.0});
    const double tol_mom = check_tolerance(cfg, "reduction_momentum", 1e-10);
    rows.push_back({"reduction", base + "max momentum on zero set", worst_momentum, 0.0,
                    worst_momentum, "closed_form", worst_momentum <= tol_mom, 0.0, batch, 0.0});

    // Orientation signs for all coset representatives of the normalizer.
    timer.reset();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long matches = 0, total = 0;
    do {
      CMat y = CMat::Zero(n, n);
      for (int j = 0; j < n; ++j) y(perm[j], j) = 1.0;
      if (y.determinant().real() < 0.0) y.col(0) *= -1.0;
      int parity = 1;
      {
        std::vector<int> p2 = perm;
        for (size_t i = 0; i < p2.size(); ++i) {
          while (p2[i] != static_cast<int>(i)) {
            std::swap(p2[i], p2[p2[i]]);
            parity = -parity;
          }
        }
      }
      ++total;
      if (orientation_sign(y) == parity) ++matches;
    } while (std::next_permutation(perm.begin(), perm.end()));
    rows.push_back({"reduction", base + "orientation sign = Weyl sign", static_cast<double>(matches),
                    static_cast<double>(total), matches == total ? 0.0 : 1.0, "closed_form",
                    matches == total, 0.0, total, timer.take()});

    // Determinant identity on a battery of its own (the det-identity suite
    // runs an independent stream).
    const double tol_det = check_tolerance(cfg, "det_identity", 1e-10);
    const CounterRng rng_det(detail::derive_seed(cfg.seed, 800, n));
    double worst_det = 0.0;
    timer.reset();
    for (int i = 0; i < 1000; ++i) {
      const auto z = detail::random_torus_point(rs, rng_det, i);
      const auto [det, sig] = det_contraction(rs, z, n);
      worst_det = std::max(worst_det, std::abs(det - sig) / (1.0 + std::abs(sig)));
    }
    rows.push_back({"reduction", base + "adjoint det vs (-1)^m sigma^2", worst_det, 0.0, worst_det,
                    "closed_form", worst_det <= tol_det, 0.0, 1000, timer.take()});
  }
  return rows;
}

/// Determinant identities: product vs orbit-sum denominator, and the adjoint
/// determinant on the torus complement vs the squared denominator.
inline std::vector<ReportRow> run_det_identity(const CampaignConfig& cfg) {
  validate_config(cfg);
  std::vector<ReportRow> rows;
  detail::RowTimer timer(cfg.timings);
  const double tol_dual = check_tolerance(cfg, "denominator_duality", 1e-10);
  const double tol_det = check_tolerance(cfg, "det_identity", 1e-10);

  for (int rank = 1; rank <= cfg.rank; ++rank) {
    const auto rs = RootSystem::build(cfg.group_type, rank);
    const auto n_delta = weyl_numerator(rs, rs.delta_key());
    const CounterRng rng(detail::derive_seed(cfg.seed, 500, rank));
    double worst = 0.0;
    timer.reset();
    for (int i = 0; i < 100; ++i) {
      const auto z = detail::random_torus_point(rs, rng, i);
      const cplx a = sigma_product(rs, z);
      const cplx b = evaluate(rs, n_delta, z);
      worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
    }
    rows.push_back({"det-identity", "A" + std::to_string(rank) + " denominator product vs orbit sum",
                    worst, 0.0, worst, "closed_form", worst <= tol_dual, 0.0, 100, timer.take()});
  }

  for (int n = 2; n <= std::min(cfg.rank + 1, 3); ++n) {
    const auto rs = RootSystem::build("A", n - 1);
    const CounterRng rng(detail::derive_seed(cfg.seed, 600, n));
    double worst = 0.0;
    timer.reset();
    for (int i = 0; i < 1000; ++i) {
      const auto z = detail::random_torus_point(rs, rng, i);
      const auto [det, sig] = det_contraction(rs, z, n);
      worst = std::max(worst, std::abs(det - sig) / (1.0 + std::abs(sig)));
    }
    rows.push_back({"det-identity", "su" + std::to_string(n) + " adjoint det vs (-1)^m sigma^2",
                    worst, 0.0, worst, "closed_form", worst <= tol_det, 0.0, 1000, timer.take()});
    const auto [det0, sig0] =
        det_contraction(rs, TorusPointC{Vec::Zero(n - 1), Vec::Zero(n - 1)}, n);
    const double id_resid = std::abs(det0) + std::abs(sig0);
    rows.push_back({"det-identity", "su" + std::to_string(n) + " identity point vanishes", id_resid,
                    0.0, id_resid, "closed_form", id_resid <= 1e-14, 0.0, 1, 0.0});
  }
  return rows;
}

/// Exact coefficient round trips through the alternating map.  With
/// state_dump set, one sample state and its alternating image are written as
/// JSON (weights in the fundamental-weight basis).
inline std::vector<ReportRow> run_qcr_roundtrip(const CampaignConfig& cfg) {
  validate_config(cfg);
  std::vector<ReportRow> rows;
  detail::RowTimer timer(cfg.timings);
  if (!cfg.state_dump_path.empty()) {
    const auto rs = RootSystem::build(cfg.group_type, cfg.rank);
    const CounterRng rng(detail::derive_seed(cfg.seed, 900, cfg.rank));
    const auto s = random_invariant_state(rs, 10, detail::state_level_cap(cfg.rank),
                                          cfg.hbar_list.front(), rng, 0);
    const auto t = b_map(rs, s);
    nlohmann::json doc{{"state", state_to_json(s)},
                       {"image", {{"hbar", t.hbar}, {"terms", laurent_to_json(t.phi)}}}};
    std::ofstream out = open_output_file(cfg.state_dump_path);
    out << doc.dump(2) << "\n";
  }
  for (int rank = 1; rank <= cfg.rank; ++rank) {
    const auto rs = RootSystem::build(cfg.group_type, rank);
    const CounterRng rng(detail::derive_seed(cfg.seed, 700, rank));
    long exact_forward = 0;
    const int n_states = 100;
    timer.reset();
    for (int i = 0; i < n_states; ++i) {
      const double hbar = cfg.hbar_list[i % cfg.hbar_list.size()];
      auto s = random_invariant_state(rs, 10, detail::state_level_cap(rank), hbar, rng, i);
      auto back = b_inverse(rs, b_map(rs, s));
      bool same = back.coeffs.size() == s.coeffs.size();
      if (same) {
        for (const auto& [mu, c] : s.coeffs) {
          auto it = back.coeffs.find(mu);
          if (it == back.coeffs.end() || it->second != c) {
            same = false;
            break;
          }
        }
      }
      if (same) ++exact_forward;
    }
    rows.push_back({"qcr-roundtrip", "A" + std::to_string(rank) + " inverse(map(s)) = s exactly",
                    static_cast<double>(exact_forward), static_cast<double>(n_states),
                    exact_forward == n_states ? 0.0 : 1.0, "closed_form",
                    exact_forward == n_states, 0.0, n_states, timer.take()});

    long exact_backward = 0;
    timer.reset();
    for (int i = 0; i < n_states; ++i) {
      const double hbar = cfg.hbar_list[i % cfg.hbar_list.size()];
      auto s = random_invariant_state(rs, 10, detail::state_level_cap(rank), hbar, rng, 1000 + i);
      ReducedState t{b_map(rs, s).phi, hbar};
      auto round = b_map(rs, b_inverse(rs, t));
      bool same = round.phi.size() == t.phi.size();
      if (same) {
        for (const auto& [k, c] : t.phi.terms()) {
          if (round.phi.coeff(k) != c) {
            same = false;
            break;
          }
        }
      }
      if (same) ++exact_backward;
    }
    rows.push_back({"qcr-roundtrip", "A" + std::to_string(rank) + " map(inverse(t)) = t exactly",
                    static_cast<double>(exact_backward), static_cast<double>(n_states),
                    exact_backward == n_states ? 0.0 : 1.0, "closed_form",
                    exact_backward == n_states, 0.0, n_states, timer.take()});
  }
  return rows;
}

inline std::vector<ReportRow> run_suite(const std::string& name, const CampaignConfig& cfg) {
  if (name == "isometry") return run_isometry(cfg);
  if (name == "weyl-integral") return run_weyl_integral(cfg);
  if (name == "orthogonality") return run_orthogonality(cfg);
  if (name == "reduction") return run_reduction(cfg);
  if (name == "det-identity") return run_det_identity(cfg);
  if (name == "qcr-roundtrip") return run_qcr_roundtrip(cfg);
  throw ConfigError("unknown suite: " + name);
}

/// All suites, rows merged in deterministic (suite, case) order.
inline std::vector<ReportRow> run_all(const CampaignConfig& cfg) {
  std::vector<ReportRow> rows;
  for (const char* name :
       {"det-identity", "isometry", "orthogonality", "qcr-roundtrip", "reduction", "weyl-integral"}) {
    auto part = run_suite(name, cfg);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

inline bool all_rows_pass(const std::vector<ReportRow>& rows) {
  for (const ReportRow& r : rows) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace qcr
