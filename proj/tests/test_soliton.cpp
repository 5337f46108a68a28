#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acsol/error.hpp"
#include "acsol/random_fields.hpp"
#include "acsol/soliton.hpp"

using namespace acsol;

namespace {

ExpansionCoefficients run(const LinkManifold& link, int order,
                          SolitonMode mode = SolitonMode::Expander) {
  ExpandOptions o;
  o.order = order;
  o.mode = mode;
  return expand(link, o);
}

LinkManifold curved_torus(int n = 32) {
  LinkSpec s;
  s.grid = {n, n};
  s.metric = {{"1+0.1*sin(x2)", "0"}, {"0", "1"}};
  return build_link(s);
}

double rel(const TensorField& a, const TensorField& b) {
  return (a - b).max_abs() / std::max(b.max_abs(), 1e-300);
}

}  // namespace

TEST_CASE("Einstein links give the Gaussian cone") {
  for (int n = 2; n <= 4; ++n) {
    auto c = run(build_link("sphere(" + std::to_string(n) + ",1)"), 6);
    CHECK(c.f0 == -(n - 1.0));
    for (const auto& h : c.h) CHECK(h.max_abs() < 1e-12);
    for (std::size_t i = 1; i < c.f.size(); ++i) CHECK(c.f[i].max_abs() < 1e-12);
  }
}

TEST_CASE("flat torus low orders") {
  auto c = run(build_link("torus(2)"), 1);
  CHECK(rel(c.h[0], 2.0 * c.link.metric) < 1e-14);
  CHECK(rel(c.h[1], (4.0 / 3.0) * c.link.metric) < 1e-14);
  CHECK(c.f[1]({}) == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(c.f[2]({})) < 1e-14);
}

TEST_CASE("round sphere of radius 2") {
  auto c = run(build_link("sphere(2,2)"), 2);
  CHECK(rel(c.h[0], 1.5 * c.link.metric) < 1e-14);
  CHECK(c.f[1]({}) == doctest::Approx(0.5));
  CHECK(c.f[2]({}) == doctest::Approx(0.15));
}

TEST_CASE("closed form agrees with the recursion") {
  for (const char* id : {"sphere(2,1)", "sphere(3,2)", "torus(3)", "sphere_product(2,1;2,2)"}) {
    CAPTURE(id);
    auto link = build_link(id);
    auto c = run(link, 1);
    auto cf = closed_form_first_terms(link);
    CHECK((c.h[0] - cf.h0).max_abs() < 1e-12);
    CHECK((c.h[1] - cf.h2).max_abs() < 1e-12);
    CHECK((c.f[1] - cf.f2).max_abs() < 1e-12);
    CHECK((c.f[2] - cf.f4).max_abs() < 1e-12);
  }
  auto sphere = closed_form_first_terms(build_link("sphere(3,1)"));
  CHECK(sphere.h0.max_abs() + sphere.h2.max_abs() + sphere.f2.max_abs() + sphere.f4.max_abs() == 0.0);
  auto link = random_grid_link(2, 32, 77);
  auto c = run(link, 1);
  auto cf = closed_form_first_terms(link);
  CHECK(rel(c.h[0], cf.h0) < 1e-6);
  CHECK(rel(c.h[1], cf.h2) < 1e-6);
  CHECK(rel(c.f[1], cf.f2) < 1e-6);
  CHECK(rel(c.f[2], cf.f4) < 1e-6);
}

TEST_CASE("probe divisors") {
  auto c = run(curved_torus(16), 4);
  REQUIRE(c.h_divisors.size() == 5);
  for (int i = 0; i <= 4; ++i) {
    CHECK(std::abs(c.h_divisors[i] - (i + 1)) < 1e-12);
    CHECK(std::abs(c.f_divisors[i] - 2.0 * (2 * i + 2) * (2 * i + 3)) < 1e-12 * c.f_divisors[i]);
  }
}

TEST_CASE("residuals vanish above the floor") {
  auto sphere = run(build_link("sphere(3,1)"), 4);
  CHECK(series_max_abs(residual_evolution(sphere).value) < 1e-14);
  CHECK(series_max_abs(residual_trace(sphere).value) < 1e-14);
  CHECK(series_max_abs(residual_constraint(sphere).value) < 1e-14);

  auto s2 = run(build_link("sphere(2,2)"), 4);
  CHECK(residual_evolution(s2).max_relative() < 1e-12);
  CHECK(residual_trace(s2).max_relative() < 1e-12);
  CHECK(series_max_abs(residual_constraint(s2).value) == 0.0);

  auto grid = run(curved_torus(), 4);
  CHECK(residual_evolution(grid).max_relative() < 1e-8);
  CHECK(residual_trace(grid).max_relative() < 1e-8);
  CHECK(residual_constraint(grid).max_relative() < 1e-8);
  CHECK(residual_evolution(grid).value.floor() == -8);
}

TEST_CASE("the first unsolved constraint order") {
  auto c = run(curved_torus(), 1);
  ResidualOptions opt;
  opt.exact = true;
  Residual r = residual_constraint(c, opt);
  for (const auto& [e, t] : r.value.terms()) {
    if (e >= -6) CHECK(r.relative(e) < 1e-9);
  }
  CHECK(r.relative(-7) > 1e-6);
  CHECK(r.max_odd_relative() > 1e-6);
}

TEST_CASE("input validation") {
  auto link = build_link("sphere(2,1)");
  ExpandOptions o;
  o.order = 9;
  CHECK_THROWS_AS(expand(link, o), Error);
  o.order = -1;
  CHECK_THROWS_AS(expand(link, o), Error);
  o.order = 2;
  o.f0 = 0.3;
  CHECK(expand(link, o).f0 == 0.3);
}

TEST_CASE("shrinker mode either solves or reports a degenerate divisor") {
  auto link = build_link("sphere(2,2)");
  try {
    auto c = run(link, 2, SolitonMode::Shrinker);
    CHECK(residual_evolution(c).max_relative() < 1e-12);
    CHECK(residual_trace(c).max_relative() < 1e-12);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateDivisor);
  }
}

TEST_CASE("spectral and finite-difference expansions agree on a smooth link") {
  auto link = curved_torus(64);
  ExpandOptions o;
  o.order = 2;
  auto a = expand(link, o);
  o.method = DiffMethod::FiniteDifference4;
  auto b = expand(link, o);
  CHECK(rel(b.h[1], a.h[1]) < 1e-4);
  CHECK(rel(b.f[2], a.f[2]) < 1e-4);
}
