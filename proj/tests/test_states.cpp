#include <catch2/catch_amalgamated.hpp>

#include <qcr/states.hpp>

#include <cstdio>
#include <random>

using namespace qcr;

TEST_CASE("invariant norm", "[states]") {
  auto a1 = RootSystem::build("A", 1);

  SECTION("trivial character has norm one") {
    InvariantState s{{{WeightKey{0}, cplx(1, 0)}}, 1.0};
    REQUIRE(norm_sq_invariant(a1, s) == Catch::Approx(1.0).epsilon(1e-14));
  }

  SECTION("fundamental character at hbar 1") {
    InvariantState s{{{WeightKey{1}, cplx(1, 0)}}, 1.0};
    REQUIRE(norm_sq_invariant(a1, s) == Catch::Approx(std::exp(1.5)).epsilon(1e-13));
  }

  SECTION("additive over orthogonal terms") {
    InvariantState s1{{{WeightKey{0}, cplx(0.7, -0.4)}}, 0.5};
    InvariantState s2{{{WeightKey{3}, cplx(-1.1, 0.2)}}, 0.5};
    InvariantState both{{{WeightKey{0}, cplx(0.7, -0.4)}, {WeightKey{3}, cplx(-1.1, 0.2)}}, 0.5};
    REQUIRE(norm_sq_invariant(a1, both) ==
            Catch::Approx(norm_sq_invariant(a1, s1) + norm_sq_invariant(a1, s2)).epsilon(1e-13));
  }

  SECTION("non-dominant support is rejected") {
    InvariantState s{{{WeightKey{-1}, cplx(1, 0)}}, 1.0};
    REQUIRE_THROWS_AS(norm_sq_invariant(a1, s), std::invalid_argument);
  }
}

TEST_CASE("the map to the alternating space", "[states]") {
  auto a1 = RootSystem::build("A", 1);
  auto a2 = RootSystem::build("A", 2);

  SECTION("the vacuum maps to the denominator orbit sum") {
    InvariantState s{{{WeightKey{0}, cplx(1, 0)}}, 1.0};
    auto t = b_map(a1, s);
    auto n_delta = weyl_numerator(a1, a1.delta_key());
    REQUIRE(t.phi.size() == n_delta.size());
    for (const auto& [k, c] : n_delta.terms()) REQUIRE(t.phi.coeff(k) == c);
  }

  SECTION("the fundamental character maps to N_{2 delta}") {
    InvariantState s{{{WeightKey{1}, cplx(1, 0)}}, 1.0};
    auto t = b_map(a1, s);
    auto n2 = weyl_numerator(a1, WeightKey{2});
    for (const auto& [k, c] : n2.terms()) REQUIRE(t.phi.coeff(k) == c);
    // cross-check through the Laurent product sigma * chi
    auto chi = character_coeffs(a1, WeightKey{1});
    auto prod = multiply(chi, weyl_numerator(a1, a1.delta_key()));
    REQUIRE(prod.size() == t.phi.size());
    for (const auto& [k, c] : prod.terms()) REQUIRE(std::abs(t.phi.coeff(k) - c) < 1e-14);
  }

  SECTION("linear in the coefficients") {
    InvariantState s{{{WeightKey{0}, cplx(1, 0)}, {WeightKey{1}, cplx(2, 0)}}, 1.0};
    auto t = b_map(a1, s);
    auto expect = weyl_numerator(a1, a1.delta_key()) + 2.0 * weyl_numerator(a1, WeightKey{2});
    REQUIRE(t.phi.size() == expect.size());
    for (const auto& [k, c] : expect.terms()) REQUIRE(t.phi.coeff(k) == c);
  }

  SECTION("image is alternating with wall-free support") {
    CounterRng rng(2);
    auto s = random_invariant_state(a2, 6, 3, 0.5, rng, 0);
    auto t = b_map(a2, s);
    REQUIRE(is_alternating(a2, t.phi));
  }
}

TEST_CASE("round trips are exact on coefficients", "[states]") {
  for (int rank : {1, 2, 3}) {
    auto rs = RootSystem::build("A", rank);
    CounterRng rng(100 + rank);
    for (std::uint64_t s_idx = 0; s_idx < 20; ++s_idx) {
      auto s = random_invariant_state(rs, 10, rank == 1 ? 9 : (rank == 2 ? 3 : 2), 0.5, rng, s_idx);
      auto back = b_inverse(rs, b_map(rs, s));
      REQUIRE(back.coeffs.size() == s.coeffs.size());
      for (const auto& [mu, c] : s.coeffs) {
        REQUIRE(back.coeffs.at(mu) == c);  // bitwise equality
      }
    }
  }
}

TEST_CASE("inverse rejects invalid input", "[states]") {
  auto a1 = RootSystem::build("A", 1);
  LaurentClassFunction constant;
  constant.add_term(WeightKey{0}, cplx(1, 0));
  REQUIRE_THROWS_AS(b_inverse(a1, ReducedState{constant, 1.0}), std::invalid_argument);
}

TEST_CASE("reduced norm", "[states]") {
  auto a1 = RootSystem::build("A", 1);

  SECTION("N_delta at hbar 1 in closed form") {
    InvariantState s{{{WeightKey{0}, cplx(1, 0)}}, 1.0};
    auto t = b_map(a1, s);
    auto res = norm_sq_reduced(a1, t, Method::closed_form);
    REQUIRE(res.value.real() == Catch::Approx(std::exp(0.5)).epsilon(1e-13));
  }

  SECTION("empty state has norm zero") {
    ReducedState t{LaurentClassFunction{}, 1.0};
    REQUIRE(std::abs(norm_sq_reduced(a1, t, Method::closed_form).value) == 0.0);
  }

  SECTION("quadrature agrees with the closed form in the exact regime") {
    InvariantState s{{{WeightKey{0}, cplx(1, 0)}, {WeightKey{2}, cplx(0.5, 0.25)}}, 0.5};
    auto t = b_map(a1, s);
    auto cf = norm_sq_reduced(a1, t, Method::closed_form);
    QuadratureSpec spec;
    spec.hermite_nodes_per_dim = 64;
    auto quad = norm_sq_reduced(a1, t, Method::quadrature, spec);
    REQUIRE(quad.certified);
    REQUIRE(std::abs(quad.value.real() - cf.value.real()) <= 1e-12 * cf.value.real());
  }
}

TEST_CASE("unitarity constant", "[states]") {
  auto a1 = RootSystem::build("A", 1);

  SECTION("vacuum at hbar 1") {
    InvariantState s{{{WeightKey{0}, cplx(1, 0)}}, 1.0};
    auto chk = unitarity_check(a1, s, Method::closed_form);
    REQUIRE(chk.expected == Catch::Approx(std::exp(-0.5)).epsilon(1e-14));
    REQUIRE(chk.ratio == Catch::Approx(std::exp(-0.5)).epsilon(1e-12));
    REQUIRE(chk.rel_err < 1e-12);
  }

  SECTION("the ratio does not depend on the state") {
    InvariantState s{{{WeightKey{1}, cplx(1, 0)}}, 1.0};
    auto chk = unitarity_check(a1, s, Method::closed_form);
    REQUIRE(chk.ratio == Catch::Approx(std::exp(-0.5)).epsilon(1e-12));
  }

  SECTION("random states across ranks and hbar, closed form") {
    for (int rank : {1, 2, 3}) {
      auto rs = RootSystem::build("A", rank);
      CounterRng rng(7 + rank);
      for (double hbar : {0.1, 0.5, 1.0}) {
        for (std::uint64_t i = 0; i < 10; ++i) {
          auto s = random_invariant_state(rs, 10, rank == 1 ? 9 : (rank == 2 ? 3 : 2), hbar, rng,
                                          1000 * static_cast<std::uint64_t>(hbar * 10) + i);
          auto chk = unitarity_check(rs, s, Method::closed_form);
          REQUIRE(chk.rel_err <= 1e-10);
        }
      }
    }
  }

  SECTION("zero state is rejected") {
    InvariantState s;
    s.hbar = 1.0;
    REQUIRE_THROWS_AS(unitarity_check(a1, s, Method::closed_form), std::invalid_argument);
  }
}

TEST_CASE("pointwise magnitude of reduced sections", "[states]") {
  auto a1 = RootSystem::build("A", 1);
  InvariantState vac{{{WeightKey{0}, cplx(1, 0)}}, 1.0};
  auto t = b_map(a1, vac);

  SECTION("for the vacuum image the magnitude is sqrt|sigma| e^{-|H2|^2/2hbar}") {
    Vec h1 = 0.9 * a1.simple_roots()[0];
    Vec h2 = 0.3 * a1.simple_roots()[0];
    TorusPointC z{h1, h2};
    const double sigma_abs = std::abs(sigma_product(a1, z));
    const double expect = std::sqrt(sigma_abs) * std::exp(-z.h2.squaredNorm() / 2.0);
    REQUIRE(reduced_pointwise_magnitude(a1, t, z) == Catch::Approx(expect).epsilon(1e-12));
  }

  SECTION("scales linearly and is Weyl invariant") {
    InvariantState s{{{WeightKey{0}, cplx(0.3, 0.2)}, {WeightKey{2}, cplx(-1, 1)}}, 0.7};
    auto ts = b_map(a1, s);
    Vec h1 = 1.1 * a1.simple_roots()[0];
    Vec h2 = 0.4 * a1.simple_roots()[0];
    TorusPointC z{h1, h2};
    const double base = reduced_pointwise_magnitude(a1, ts, z);
    ReducedState scaled{2.5 * ts.phi, ts.hbar};
    REQUIRE(reduced_pointwise_magnitude(a1, scaled, z) == Catch::Approx(2.5 * base).epsilon(1e-12));
    for (const WeylElement& w : a1.weyl_elements()) {
      auto wz = apply(a1, w, z);
      REQUIRE(reduced_pointwise_magnitude(a1, ts, wz) == Catch::Approx(base).epsilon(1e-10));
    }
  }

  SECTION("matches the class-function magnitude of the preimage") {
    // |phi| e^{-|H2|^2/2hbar} / sqrt|sigma| = |F| e^{-|H2|^2/2hbar} sqrt|sigma|
    auto a2 = RootSystem::build("A", 2);
    CounterRng rng(13);
    auto s = random_invariant_state(a2, 5, 3, 0.5, rng, 3);
    auto ts = b_map(a2, s);
    LaurentClassFunction f_sum;
    for (const auto& [mu, c] : s.coeffs) f_sum += c * character_coeffs(a2, mu);
    std::mt19937_64 gen(19);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 0.6);
    int done = 0;
    while (done < 100) {
      Vec h1 = Vec::Zero(2), h2(2);
      for (int j = 0; j < 2; ++j) h1 += (2.0 * std::numbers::pi * u01(gen)) * a2.simple_roots()[j];
      h2 << gauss(gen), gauss(gen);
      TorusPointC z{h1, h2};
      if (std::abs(sigma_product(a2, z)) <= 1e-3) continue;
      ++done;
      const double lhs = reduced_pointwise_magnitude(a2, ts, z);
      const double rhs = std::abs(evaluate(a2, f_sum, z)) *
                         std::exp(-z.h2.squaredNorm() / (2.0 * ts.hbar)) *
                         std::sqrt(std::abs(sigma_product(a2, z)));
      REQUIRE(lhs == Catch::Approx(rhs).margin(1e-9 * (1.0 + rhs)));
    }
  }

  SECTION("singular band is rejected") {
    TorusPointC z{Vec::Zero(1), Vec::Zero(1)};
    REQUIRE_THROWS_AS(reduced_pointwise_magnitude(a1, t, z), std::invalid_argument);
  }
}

TEST_CASE("state serialization", "[states]") {
  auto a2 = RootSystem::build("A", 2);
  CounterRng rng(23);
  auto s = random_invariant_state(a2, 6, 3, 0.25, rng, 11);

  auto j = state_to_json(s);
  auto back = state_from_json(j);
  REQUIRE(back.hbar == s.hbar);
  REQUIRE(back.coeffs.size() == s.coeffs.size());
  for (const auto& [mu, c] : s.coeffs) REQUIRE(back.coeffs.at(mu) == c);

  const std::string path = "qcr_state_roundtrip_test.json";
  save_state(s, path);
  auto loaded = load_state(path);
  std::remove(path.c_str());
  REQUIRE(loaded.coeffs.size() == s.coeffs.size());
  for (const auto& [mu, c] : s.coeffs) REQUIRE(loaded.coeffs.at(mu) == c);

  auto t = b_map(a2, s);
  auto terms = laurent_to_json(t.phi);
  auto phi_back = laurent_from_json(terms);
  REQUIRE(phi_back.size() == t.phi.size());
  for (const auto& [k, c] : t.phi.terms()) REQUIRE(phi_back.coeff(k) == c);
}
