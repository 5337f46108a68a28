#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acsol/error.hpp"
#include "acsol/radial_ode.hpp"
#include "acsol/verify.hpp"

using namespace acsol;

namespace {

ExpansionCoefficients run(const std::string& id, int order) {
  ExpandOptions o;
  o.order = order;
  return expand(build_link(id), o);
}

RadialState cone_state(const LinkManifold& link, double r, double f0) {
  RadialState s;
  s.r = r;
  s.H = (r * r) * link.metric;
  s.K = (2 * r) * link.metric;
  s.f = TensorField::scalar(link.domain, -0.25 * r * r + f0);
  s.phi = TensorField::scalar(link.domain, -0.5 * r);
  return s;
}

}  // namespace

TEST_CASE("rhs on hand-computable states") {
  for (int n = 2; n <= 4; ++n) {
    auto link = build_link("sphere(" + std::to_string(n) + ",1)");
    for (double r : {1.0, 7.0, 30.0}) {
      auto d = rhs(link, cone_state(link, r, -(n - 1.0)));
      CHECK((d.H_rr - 2.0 * link.metric).max_abs() < 1e-12 * r * r);
      CHECK(d.f_rr({}) == doctest::Approx(-0.5));
    }
  }
  auto s2 = build_link("sphere(2,1)");
  RadialState still;
  still.r = 1.0;
  still.H = s2.metric;
  still.K = TensorField(s2.domain, 0, 2);
  still.f = TensorField::scalar(s2.domain, 0.0);
  still.phi = TensorField::scalar(s2.domain, 0.0);
  CHECK((rhs(s2, still).H_rr - 3.0 * s2.metric).max_abs() < 1e-14);

  // On the flat torus the bare cone is not stationary.
  auto t2 = build_link("torus(2)");
  auto d = rhs(t2, cone_state(t2, 5.0, 0.0));
  CHECK((d.H_rr - 2.0 * t2.metric).max_abs() > 0.5);
}

TEST_CASE("initial data from the series") {
  auto c = run("sphere(2,1)", 3);
  auto s = init_from_series(c, 4.0);
  auto exact = cone_state(c.link, 4.0, -1.0);
  CHECK((s.H - exact.H).max_abs() < 1e-13);
  CHECK((s.K - exact.K).max_abs() < 1e-13);
  CHECK((s.f - exact.f).max_abs() < 1e-13);
  CHECK((s.phi - exact.phi).max_abs() < 1e-13);

  auto c2 = run("sphere(2,2)", 4);
  auto s2 = init_from_series(c2, 30.0);
  CHECK((s2.H - (900.0 * c2.link.metric + 1.5 * c2.link.metric)).max_abs() < 1e-2);
  try {
    auto tiny = init_from_series(c2, 0.01);
    CHECK(min_eigenvalue(tiny.H) > kMinMetricEigenvalue);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveDefinite);
  }
}

TEST_CASE("the Gaussian cone is stationary") {
  auto c = run("sphere(3,1)", 2);
  IntegrateOptions o;
  o.r_end = 20.0;
  o.step = 0.01;
  o.s_constant = scalar_constant(c);
  auto t = integrate(c.link, init_from_series(c, 5.0), o, &c);
  auto exact = cone_state(c.link, 20.0, -2.0);
  CHECK((t.final_state.H - exact.H).max_abs() < 1e-10 * exact.H.max_abs());
  CHECK(t.final_state.r == 20.0);
  for (const auto& m : t.monitor.samples) {
    CHECK(m.constraint_norm < 1e-12);
    CHECK(m.s_norm < 1e-9);
    CHECK(m.deviation < 1e-10);
  }
  for (std::size_t i = 1; i < t.monitor.samples.size(); ++i) {
    CHECK(t.monitor.samples[i].r > t.monitor.samples[i - 1].r);
  }
}

TEST_CASE("RK4 is fourth order") {
  auto c = run("sphere(2,1)", 2);
  auto start = init_from_series(c, 5.0);
  IntegrateOptions o;
  o.r_end = 20.0;
  TensorField H[3];
  for (int k = 0; k < 3; ++k) {
    o.step = 0.05 / (1 << k);
    H[k] = integrate(c.link, start, o).final_state.H;
  }
  const double ratio = (H[0] - H[2]).max_abs() / (H[1] - H[2]).max_abs();
  CHECK(ratio > 12);
  CHECK(ratio < 20);
}

TEST_CASE("radius 2 sphere follows its series") {
  auto c = run("sphere(2,2)", 4);
  IntegrateOptions o;
  o.r_end = 30.0;
  o.s_constant = scalar_constant(c);
  auto t = integrate(c.link, init_from_series(c, 15.0), o, &c);
  for (const auto& m : t.monitor.samples) CHECK(m.deviation < 1e-5);

  // a lower truncation starts further from the solution
  auto c1 = run("sphere(2,2)", 1);
  auto t1 = integrate(c1.link, init_from_series(c1, 15.0), o, &c);
  CHECK(t1.monitor.samples.front().s_norm > t.monitor.samples.front().s_norm);
}

TEST_CASE("step guards") {
  auto c = run("sphere(2,1)", 1);
  IntegrateOptions o;
  o.r_end = 20.0;
  o.step = 3.0;
  try {
    integrate(c.link, init_from_series(c, 2.0), o);
    FAIL("expected StepTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepTooLarge);
  }
  o.step = -1.0;
  CHECK_THROWS_AS(integrate(c.link, init_from_series(c, 2.0), o), Error);
}

TEST_CASE("inward integration on an inhomogeneous link is reported, not suppressed") {
  LinkSpec s;
  s.grid = {16, 16};
  s.metric = {{"1+0.1*sin(x2)", "0"}, {"0", "1"}};
  ExpandOptions eo;
  eo.order = 2;
  auto c = expand(build_link(s), eo);
  IntegrateOptions o;
  o.r_end = 30.0;
  o.s_constant = scalar_constant(c);
  try {
    auto t = integrate(c.link, init_from_series(c, 40.0), o, &c);
    const double first = t.monitor.samples.front().constraint_norm;
    const double last = t.monitor.samples.back().constraint_norm;
    MESSAGE("inward constraint drift " << first << " -> " << last);
    CHECK(std::isfinite(last));
  } catch (const Error& e) {
    CHECK(is_numerical(e.kind()));
  }
}

TEST_CASE("outward constraint drift on an inhomogeneous link stays bounded") {
  LinkSpec s;
  s.grid = {16, 16};
  s.metric = {{"1+0.1*sin(x2)", "0"}, {"0", "1"}};
  ExpandOptions eo;
  eo.order = 2;
  auto c = expand(build_link(s), eo);
  IntegrateOptions o;
  o.r_end = 40.0;
  o.s_constant = scalar_constant(c);
  auto t = integrate(c.link, init_from_series(c, 30.0), o, &c);
  CHECK(t.monitor.samples.back().constraint_norm < 10 * t.monitor.samples.front().constraint_norm);
}
