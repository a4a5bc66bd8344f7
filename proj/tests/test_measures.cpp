#include <catch2/catch_amalgamated.hpp>

#include <qcr/measures.hpp>

#include <random>

using namespace qcr;

TEST_CASE("quadrature node generation", "[measures]") {
  SECTION("Gauss-Hermite integrates low moments of exp(-x^2)") {
    auto r = gauss_hermite(20);
    double m0 = 0, m2 = 0, m1 = 0;
    for (size_t i = 0; i < r.nodes.size(); ++i) {
      m0 += r.weights[i];
      m1 += r.weights[i] * r.nodes[i];
      m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
    }
    REQUIRE(m0 == Catch::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    REQUIRE(m1 == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(m2 == Catch::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
  }
  SECTION("Gauss-Legendre integrates polynomials on [-1,1]") {
    auto r = gauss_legendre(8);
    double m0 = 0, m4 = 0;
    for (size_t i = 0; i < r.nodes.size(); ++i) {
      m0 += r.weights[i];
      m4 += r.weights[i] * std::pow(r.nodes[i], 4);
    }
    REQUIRE(m0 == Catch::Approx(2.0).epsilon(1e-14));
    REQUIRE(m4 == Catch::Approx(2.0 / 5.0).epsilon(1e-13));
  }
}

TEST_CASE("gaussian moment", "[measures]") {
  auto a1 = RootSystem::build("A", 1);
  auto a2 = RootSystem::build("A", 2);

  REQUIRE(gaussian_moment(a1, WeightKey{0}, HeatMeasure(a1, 1.0)) == 1.0);
  // |delta|^2 = 1/2 in rank one
  REQUIRE(gaussian_moment(a1, a1.delta_key(), HeatMeasure(a1, 1.0)) ==
          Catch::Approx(std::exp(0.5)).epsilon(1e-14));
  // |delta|^2 = 2 in rank two
  REQUIRE(gaussian_moment(a2, a2.delta_key(), HeatMeasure(a2, 0.5)) ==
          Catch::Approx(std::exp(1.0)).epsilon(1e-14));
  REQUIRE_THROWS_AS(HeatMeasure(a1, 0.0), std::invalid_argument);
}

TEST_CASE("closed-form inner product", "[measures]") {
  auto a1 = RootSystem::build("A", 1);
  HeatMeasure hm(a1, 1.0);

  LaurentClassFunction one;
  one.add_term(WeightKey{0}, cplx(1, 0));
  REQUIRE(inner_closed_form(a1, one, one, hm).value.real() == Catch::Approx(1.0));

  auto n_delta = weyl_numerator(a1, a1.delta_key());
  auto res = inner_closed_form(a1, n_delta, n_delta, hm);
  REQUIRE(res.value.real() == Catch::Approx(2.0 * std::exp(0.5)).epsilon(1e-14));
  REQUIRE(res.value.imag() == Catch::Approx(0.0).margin(1e-16));
  REQUIRE(res.abs_error == 0.0);

  auto n2 = weyl_numerator(a1, WeightKey{2});
  REQUIRE(std::abs(inner_closed_form(a1, n_delta, n2, hm).value) == 0.0);
}

TEST_CASE("tensor quadrature matches closed form in the exact regime", "[measures]") {
  auto a1 = RootSystem::build("A", 1);
  HeatMeasure hm(a1, 1.0);
  auto n_delta = weyl_numerator(a1, a1.delta_key());

  SECTION("norm of N_delta at N=8, M=40") {
    QuadratureSpec spec;
    spec.torus_points_per_dim = 8;
    spec.hermite_nodes_per_dim = 40;
    auto res = inner_quadrature(a1, n_delta, n_delta, hm, spec);
    REQUIRE(res.certified);
    REQUIRE_FALSE(res.warning);
    REQUIRE(res.value.real() == Catch::Approx(2.0 * std::exp(0.5)).epsilon(1e-12));
  }

  SECTION("oscillatory monomial integrates to zero over T") {
    LaurentClassFunction f, one;
    f.add_term(WeightKey{3}, cplx(1, 0));
    one.add_term(WeightKey{0}, cplx(1, 0));
    auto res = inner_l2t_quadrature(a1, f, one, 8);
    REQUIRE(std::abs(res.value) < 1e-14);
  }

  SECTION("total mass is one") {
    LaurentClassFunction one;
    one.add_term(WeightKey{0}, cplx(1, 0));
    auto res = inner_quadrature(a1, one, one, hm);
    REQUIRE(res.value.real() == Catch::Approx(1.0).epsilon(1e-13));
  }

  SECTION("undersampled grid flags a warning and reports a grid-difference error") {
    QuadratureSpec spec;
    spec.torus_points_per_dim = 3;  // bandwidth of |N_delta|^2 needs N >= 5
    auto res = inner_quadrature(a1, n_delta, n_delta, hm, spec);
    REQUIRE_FALSE(res.certified);
    REQUIRE(res.warning);
    REQUIRE(res.abs_error > 0.0);
  }
}

TEST_CASE("factorized and node-loop quadrature agree", "[measures]") {
  for (int rank : {1, 2}) {
    auto rs = RootSystem::build("A", rank);
    HeatMeasure hm(rs, 0.5);
    auto n_delta = weyl_numerator(rs, rs.delta_key());
    WeightKey two(rank, 2);
    auto f = weyl_numerator(rs, two);
    QuadratureSpec spec;
    spec.hermite_nodes_per_dim = 24;
    auto fast = inner_quadrature(rs, f, n_delta, hm, spec);
    auto slow = inner_quadrature(rs, as_torus_function(rs, f), as_torus_function(rs, n_delta), hm, spec);
    REQUIRE(fast.certified);
    REQUIRE(slow.certified);
    REQUIRE(std::abs(fast.value - slow.value) < 1e-12 * (1.0 + std::abs(fast.value)));

    auto self_fast = inner_quadrature(rs, f, f, hm, spec);
    auto self_slow = inner_quadrature(rs, as_torus_function(rs, f), as_torus_function(rs, f), hm, spec);
    REQUIRE(std::abs(self_fast.value - self_slow.value) <
            1e-12 * (1.0 + std::abs(self_fast.value)));
  }
}

TEST_CASE("method agreement on numerator norms", "[measures][property]") {
  for (int rank : {1, 2}) {
    auto rs = RootSystem::build("A", rank);
    for (double hbar : {0.1, 0.5, 1.0}) {
      HeatMeasure hm(rs, hbar);
      for (const WeightKey& mu : RootSystem::dominant_weights(rank, 5)) {
        WeightKey top(mu);
        for (int& n : top) n += 1;
        auto num = weyl_numerator(rs, top);
        const double expected = rs.weyl_order() * std::exp(hbar * rs.norm_sq(top));
        auto cf = inner_closed_form(rs, num, num, hm);
        REQUIRE(cf.value.real() == Catch::Approx(expected).epsilon(1e-12));
        QuadratureSpec spec;
        spec.hermite_nodes_per_dim = 128;
        auto quad = inner_quadrature(rs, num, num, hm, spec);
        REQUIRE(quad.certified);
        REQUIRE(quad.value.real() == Catch::Approx(expected).epsilon(1e-9));
        // The sampler sees its own variance region only for moderate
        // exponents; there the seeded estimate must cover the closed form.
        if (hbar * rs.norm_sq(top) <= 2.5) {
          auto mc = inner_monte_carlo(rs, num, num, hm, 200000, 17);
          REQUIRE(std::abs(mc.value.real() - expected) <= 3.0 * mc.abs_error);
        }
      }
    }
  }
}

TEST_CASE("eigenvalue shift across the two norm routes", "[measures][property]") {
  // |N_{mu+delta}|^2 under the heat measure equals exp(hbar |mu+delta|^2)
  // times the plain torus norm |sigma chi_mu|^2_{L2(T)} = |W|.
  for (int rank : {1, 2}) {
    auto rs = RootSystem::build("A", rank);
    for (double hbar : {0.1, 1.0}) {
      HeatMeasure hm(rs, hbar);
      for (const WeightKey& mu : RootSystem::dominant_weights(rank, 3)) {
        WeightKey top(mu);
        for (int& n : top) n += 1;
        auto num = weyl_numerator(rs, top);
        const double heat = inner_closed_form(rs, num, num, hm).value.real();
        const double torus = inner_l2t_quadrature(rs, num, num).value.real();
        REQUIRE(torus == Catch::Approx(static_cast<double>(rs.weyl_order())).epsilon(1e-12));
        REQUIRE(heat ==
                Catch::Approx(std::exp(hbar * rs.norm_sq(top)) * torus).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("monte carlo", "[measures]") {
  auto a1 = RootSystem::build("A", 1);
  HeatMeasure hm(a1, 1.0);

  SECTION("constant integrand is exact with zero error") {
    LaurentClassFunction one;
    one.add_term(WeightKey{0}, cplx(1, 0));
    auto res = inner_monte_carlo(a1, one, one, hm, 1000, 42);
    REQUIRE(res.value.real() == Catch::Approx(1.0).epsilon(1e-15));
    REQUIRE(res.abs_error == Catch::Approx(0.0).margin(1e-15));
  }

  SECTION("norm of N_delta within three standard errors") {
    auto n_delta = weyl_numerator(a1, a1.delta_key());
    const double expected = 2.0 * std::exp(0.5);
    auto res = inner_monte_carlo(a1, n_delta, n_delta, hm, 1000000, 7);
    REQUIRE(std::abs(res.value.real() - expected) <= 3.0 * res.abs_error);
    REQUIRE(res.abs_error < 0.05 * expected);
    REQUIRE(res.value.imag() == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("deterministic for a fixed seed, independent of the worker count") {
    auto n_delta = weyl_numerator(a1, a1.delta_key());
    setenv("QCR_WORKERS", "1", 1);
    auto res1 = inner_monte_carlo(a1, n_delta, n_delta, hm, 20000, 12345);
    setenv("QCR_WORKERS", "7", 1);
    auto res2 = inner_monte_carlo(a1, n_delta, n_delta, hm, 20000, 12345);
    unsetenv("QCR_WORKERS");
    REQUIRE(res1.value.real() == res2.value.real());  // bit identical
    REQUIRE(res1.value.imag() == res2.value.imag());
    REQUIRE(res1.abs_error == res2.abs_error);
  }

  SECTION("sample count below two is rejected") {
    LaurentClassFunction one;
    one.add_term(WeightKey{0}, cplx(1, 0));
    REQUIRE_THROWS_AS(inner_monte_carlo(a1, one, one, hm, 1, 0), std::invalid_argument);
  }
}

TEST_CASE("torus heat scaling", "[measures]") {
  auto a1 = RootSystem::build("A", 1);

  SECTION("constants are fixed") {
    LaurentClassFunction f;
    f.add_term(WeightKey{0}, cplx(2.0, 1.0));
    auto g = sb_scale_torus(a1, f, 1.0);
    REQUIRE(g.coeff({0}) == cplx(2.0, 1.0));
  }

  SECTION("monomial at delta scales by exp(-hbar |delta|^2 / 2)") {
    LaurentClassFunction f;
    f.add_term(a1.delta_key(), cplx(1, 0));
    auto g = sb_scale_torus(a1, f, 1.0);
    REQUIRE(g.coeff(a1.delta_key()).real() == Catch::Approx(std::exp(-0.25)).epsilon(1e-14));
  }

  SECTION("orbit sums scale uniformly") {
    auto n_delta = weyl_numerator(a1, a1.delta_key());
    auto g = sb_scale_torus(a1, n_delta, 1.0);
    for (const auto& [k, c] : n_delta.terms()) {
      REQUIRE(g.coeff(k) == std::exp(-0.25) * c);
    }
  }

  SECTION("isometry onto the heat-measure space") {
    // |f|^2_{L2(T)} = |e^{hbar Lap/2} f|^2_{nu'} for random trig polynomials.
    for (int rank : {1, 2}) {
      auto rs = RootSystem::build("A", rank);
      std::mt19937_64 gen(5 + rank);
      std::uniform_int_distribution<int> idist(-6, 6);
      std::normal_distribution<double> coeff(0.0, 1.0);
      for (double hbar : {0.1, 1.0}) {
        HeatMeasure hm(rs, hbar);
        for (int trial = 0; trial < 25; ++trial) {
          LaurentClassFunction f;
          for (int t = 0; t < 8; ++t) {
            WeightKey k(rank);
            for (int i = 0; i < rank; ++i) k[i] = idist(gen);
            f.add_term(k, cplx(coeff(gen), coeff(gen)));
          }
          const double lhs = inner_l2t_closed_form(f, f).real();
          auto scaled = sb_scale_torus(rs, f, hbar);
          const double rhs = inner_closed_form(rs, scaled, scaled, hm).value.real();
          REQUIRE(rhs == Catch::Approx(lhs).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("casimir shift", "[measures]") {
  auto a1 = RootSystem::build("A", 1);
  auto a2 = RootSystem::build("A", 2);

  REQUIRE(casimir_shift(a1, WeightKey{0}) == Catch::Approx(0.0).margin(1e-14));
  // mu = fw: mu + delta = 2 delta, |2 delta|^2 = 2, shift = 1.5
  REQUIRE(casimir_shift(a1, WeightKey{1}) == Catch::Approx(1.5).epsilon(1e-13));
  // A2 defining representation: |fw1 + delta|^2 - 2
  WeightKey mu{1, 0};
  WeightKey top{2, 1};
  REQUIRE(casimir_shift(a2, mu) == Catch::Approx(a2.norm_sq(top) - 2.0).epsilon(1e-13));
  REQUIRE_THROWS_AS(casimir_shift(a2, WeightKey{-1, 0}), std::invalid_argument);
}

TEST_CASE("SU(2) Haar norms of characters", "[measures]") {
  REQUIRE(haar_norm_su2(0, 32) == Catch::Approx(1.0).epsilon(1e-10));
  REQUIRE(haar_norm_su2(1, 64) == Catch::Approx(1.0).margin(1e-6));
  REQUIRE(haar_norm_su2(4, 128) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("Weyl integral formula at desk scale", "[measures][property]") {
  auto a1 = RootSystem::build("A", 1);
  for (int k = 0; k <= 5; ++k) {
    // sigma chi_k = N_{(k+1) fw}; its L2(T) norm squared is |W| = 2.
    auto num = weyl_numerator(a1, WeightKey{k + 1});
    auto torus = inner_l2t_quadrature(a1, num, num);
    REQUIRE(torus.value.real() == Catch::Approx(2.0).margin(1e-12));
    const double haar = haar_norm_su2(k, 96);
    REQUIRE(haar == Catch::Approx(torus.value.real() / 2.0).margin(1e-6));
  }
}

TEST_CASE("numerator Gram matrices are diagonal", "[measures][property]") {
  for (int rank : {1, 2}) {
    auto rs = RootSystem::build("A", rank);
    HeatMeasure hm(rs, 0.5);
    // All dominant weights of level <= 4.
    std::vector<WeightKey> mus;
    if (rank == 1) {
      for (int a = 0; a <= 4; ++a) mus.push_back({a});
    } else {
      for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b) mus.push_back({a, b});
    }
    std::vector<LaurentClassFunction> nums;
    for (const auto& mu : mus) {
      WeightKey top(mu);
      for (int& n : top) n += 1;
      nums.push_back(weyl_numerator(rs, top));
    }
    QuadratureSpec spec;
    spec.hermite_nodes_per_dim = 96;
    for (size_t i = 0; i < nums.size(); ++i) {
      const double di = inner_closed_form(rs, nums[i], nums[i], hm).value.real();
      for (size_t j = 0; j < nums.size(); ++j) {
        if (i == j) continue;
        const double dj = inner_closed_form(rs, nums[j], nums[j], hm).value.real();
        const double off_cf = std::abs(inner_closed_form(rs, nums[i], nums[j], hm).value);
        const double off_q = std::abs(inner_quadrature(rs, nums[i], nums[j], hm, spec).value);
        REQUIRE(off_cf <= 1e-10 * std::sqrt(di * dj));
        REQUIRE(off_q <= 1e-10 * std::sqrt(di * dj));
      }
    }
  }
}
