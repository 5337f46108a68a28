#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acsol/error.hpp"
#include "acsol/random_fields.hpp"
#include "acsol/verify.hpp"

using namespace acsol;

namespace {

LinkManifold grid_link(const char* g11, int n = 32) {
  LinkSpec s;
  s.grid = {n, n};
  s.metric = {{g11, "0"}, {"0", "1"}};
  return build_link(s);
}

ExpansionCoefficients run(const LinkManifold& link, int order, std::optional<double> f0 = {}) {
  ExpandOptions o;
  o.order = order;
  o.f0 = f0;
  return expand(link, o);
}

}  // namespace

TEST_CASE("weighted Bianchi identities") {
  auto flat = grid_link("1");
  auto zero = TensorField::scalar(flat.domain, 0.0);
  auto r0 = bianchi_weighted_residual(flat, zero);
  CHECK(r0.weighted.max_abs() == 0.0);
  CHECK(r0.soliton.max_abs() == 0.0);

  auto s = TensorField::sample(flat.domain, 0, 0, [](std::span<const int>, std::span<const double> x) {
    return std::sin(x[0]);
  });
  CHECK(bianchi_weighted_residual(flat, s).weighted.max_abs() < 1e-10);

  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto link = random_grid_link(2, 32, seed);
    auto f = random_analytic_scalar(link.domain, seed + 100);
    auto r = bianchi_weighted_residual(link, f);
    CHECK(r.weighted.max_abs() < 1e-7);
    CHECK(r.soliton.max_abs() < 1e-7);
  }
  auto link3 = random_grid_link(3, 24, 50);
  auto r3 = bianchi_weighted_residual(link3, random_analytic_scalar(link3.domain, 51));
  CHECK(r3.weighted.max_abs() < 1e-7);

  CHECK_THROWS_AS(bianchi_weighted_residual(flat, flat.metric), Error);
}

TEST_CASE("S vanishes on exact expansions") {
  for (int n = 2; n <= 4; ++n) {
    auto link = build_link("sphere(" + std::to_string(n) + ",1)");
    auto c = run(link, 3, -(n + 1.0));
    CHECK(scalar_constant(c) == 0.0);
    CHECK(series_max_abs(soliton_scalar_series(c).value) < 1e-13);
    auto d = run(link, 3);
    CHECK(scalar_constant(d) == doctest::Approx(-2.0));
    CHECK(series_max_abs(normalized_scalar_series(d).value) < 1e-13);
  }
  auto s2 = run(build_link("sphere(2,2)"), 4);
  Residual s = normalized_scalar_series(s2);
  for (const auto& [e, t] : s.value.terms()) CHECK(t.max_abs() < 1e-12);

  auto grid = run(grid_link("1+0.1*sin(x2)"), 4);
  CHECK(normalized_scalar_series(grid).max_relative() < 1e-8);
  CHECK(x_series(grid).max_relative() < 1e-8);
}

TEST_CASE("S responds linearly to a corrupted coefficient") {
  auto base = run(build_link("sphere(2,2)"), 2);
  double lead[2];
  int exponent[2];
  for (int k = 0; k < 2; ++k) {
    auto c = base;
    c.f[1] += TensorField::scalar(c.link.domain, (k + 1) * 1e-3);
    auto t = leading_term(normalized_scalar_series(c));
    lead[k] = t.coefficient.max_abs();
    exponent[k] = t.exponent;
  }
  CHECK(exponent[0] == exponent[1]);
  CHECK(lead[1] / lead[0] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("decay slope") {
  auto link = grid_link("1+0.1*sin(x2)");
  auto fit1 = constraint_decay_slope(run(link, 1), 10, 1000, 20);
  CHECK(fit1.slope >= -7.3);
  CHECK(fit1.slope <= -6.8);
  CHECK(fit1.leading_exponent == -7);
  CHECK(fit1.samples.size() == 20);
  for (std::size_t i = 1; i < fit1.samples.size(); ++i) CHECK(fit1.samples[i].r > fit1.samples[i - 1].r);

  auto fit2 = constraint_decay_slope(run(link, 2), 10, 1000, 20);
  CHECK(fit2.slope <= -8.8);

  try {
    constraint_decay_slope(run(build_link("sphere(2,1)"), 1), 10, 1000);
    FAIL("expected AllZeroResidual");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AllZeroResidual);
  }
  CHECK_THROWS_AS(constraint_decay_slope(run(link, 1), 10, 1e7), Error);
  CHECK_THROWS_AS(constraint_decay_slope(run(link, 1), 100, 10), Error);
}

TEST_CASE("diagnostics on a correct expansion report no leading term") {
  auto c = run(build_link("sphere(2,2)"), 3);
  auto rep = order_diagnostics(x_series(c), normalized_scalar_series(c), c);
  CHECK(!rep.leading_x);
  CHECK(!rep.leading_s);
  CHECK(rep.x_status == "NoLeadingTerm");
  CHECK(rep.s_status == "NoLeadingTerm");
  CHECK_THROWS_AS(leading_term(x_series(c)), Error);
}

TEST_CASE("injected perturbation bookkeeping") {
  auto link = grid_link("1+0.1*sin(x2)");
  for (int N : {2, 3}) {
    auto c = run(link, N);
    auto phi = partial(random_analytic_scalar(link.domain, 9));
    auto rep = order_diagnostics(inject_x(x_series(c), N, phi), normalized_scalar_series(c), c);
    REQUIRE(rep.n_order);
    CHECK(*rep.n_order == N);
    REQUIRE(rep.leading_radial);
    CHECK(rep.leading_radial->exponent == -N + 1);
    REQUIRE(rep.radial_error);
    CHECK(*rep.radial_error < 1e-8);
    REQUIRE(rep.leading_divergence);
    CHECK(rep.leading_divergence->exponent == -N - 2);
    REQUIRE(rep.divergence_error);
    CHECK(*rep.divergence_error < 1e-8);
  }
}

TEST_CASE("leading diagnostic coefficients are linear in the injection") {
  auto link = grid_link("1+0.1*sin(x2)");
  auto c = run(link, 2);
  auto phi = partial(random_analytic_scalar(link.domain, 13));
  auto x = x_series(c);
  auto s = normalized_scalar_series(c);
  auto a = order_diagnostics(inject_x(x, 3, 1e-3 * phi), s, c);
  auto b = order_diagnostics(inject_x(x, 3, 2e-3 * phi), s, c);
  REQUIRE(a.leading_radial);
  REQUIRE(b.leading_radial);
  CHECK((b.leading_radial->coefficient - 2.0 * a.leading_radial->coefficient).max_abs() <
        1e-6 * b.leading_radial->coefficient.max_abs());
  REQUIRE(a.leading_divergence);
  REQUIRE(b.leading_divergence);
  CHECK((b.leading_divergence->coefficient - 2.0 * a.leading_divergence->coefficient).max_abs() <
        1e-6 * b.leading_divergence->coefficient.max_abs());
}
