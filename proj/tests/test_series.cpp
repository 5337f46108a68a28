#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acsol/error.hpp"
#include "acsol/random_fields.hpp"
#include "acsol/series.hpp"
#include "acsol/soliton.hpp"

using namespace acsol;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("addition keeps both terms") {
  auto link = build_link("sphere(2,1)");
  const TensorField& h = link.metric;
  RadialSeries a = RadialSeries::single(2, h);
  RadialSeries b = RadialSeries::single(0, 3.0 * h);
  RadialSeries s = a + b;
  CHECK(s.terms().size() == 2);
  CHECK(*s.max_exponent() == 2);
  CHECK((s.coefficient(0) - 3.0 * h).max_abs() == 0.0);
  CHECK(series_max_abs(s - s) == 0.0);
}

TEST_CASE("scalar products shift exponents") {
  auto dom = Domain::constant_frame(2);
  auto phi = RadialSeries::single(1, TensorField::scalar(dom, 3.0));
  auto psi = RadialSeries::single(-1, TensorField::scalar(dom, 5.0));
  auto p = mul_scalar(phi, psi);
  CHECK(p.terms().size() == 1);
  CHECK(p.coefficient(0)({}) == 15.0);
}

TEST_CASE("floor propagation") {
  auto link = build_link("sphere(2,1)");
  auto hinv = inverse_metric(link.metric);
  RadialSeries a(link.domain, 0, 2, -2);
  a.set_term(2, link.metric);
  RadialSeries b(link.domain, 2, 0, -6);
  b.set_term(-2, hinv);
  auto p = mul("ij,jk->ik", b, a);
  CHECK(p.floor() == -4);
  CHECK(kind_of([&] { (void)p.coefficient(-6); }) == ErrorKind::FloorUnderflow);
  CHECK(p.coefficient(-4).max_abs() == 0.0);

  // exhaustive small cases: floor = max(fa + mb, fb + ma)
  for (int fa = -6; fa <= 0; fa += 2) {
    for (int fb = -6; fb <= 0; fb += 2) {
      RadialSeries x(link.domain, 0, 0, fa), y(link.domain, 0, 0, fb);
      x.set_term(2, TensorField::scalar(link.domain, 1.0));
      y.set_term(0, TensorField::scalar(link.domain, 1.0));
      CHECK(mul_scalar(x, y).floor() == std::max(fa + 0, fb + 2));
    }
  }
}

TEST_CASE("radial derivatives") {
  auto link = build_link("sphere(2,1)");
  auto d = r_derivative(RadialSeries::single(2, link.metric));
  CHECK(d.terms().size() == 1);
  CHECK((d.coefficient(1) - 2.0 * link.metric).max_abs() == 0.0);
  auto f = RadialSeries::single(2, TensorField::scalar(link.domain, -0.25));
  CHECK(r_derivative(r_derivative(f)).coefficient(0)({}) == -0.5);
  CHECK(r_derivative(RadialSeries::single(0, link.metric)).empty());
}

TEST_CASE("metric inverse") {
  auto link = build_link("sphere(3,2)");
  auto hinv = inverse_metric(link.metric);
  auto inv = metric_inverse(RadialSeries::single(2, link.metric), -20);
  CHECK(inv.terms().size() == 1);
  CHECK((inv.coefficient(-2) - hinv).max_abs() < 1e-15);

  RadialSeries H(link.domain, 0, 2, -4);
  H.set_term(2, link.metric);
  H.set_term(0, 0.7 * link.metric);
  auto i2 = metric_inverse(H);
  CHECK(i2.floor() == -8);
  CHECK((i2.coefficient(-4) + 0.7 * hinv).max_abs() < 1e-15);
  CHECK((i2.coefficient(-6) - 0.49 * hinv).max_abs() < 1e-15);
}

TEST_CASE("H times its inverse is the identity down to the floor") {
  auto link = random_grid_link(2, 16, 21);
  RadialSeries H(link.domain, 0, 2, -6);
  H.set_term(2, link.metric);
  H.set_term(0, random_analytic_metric(link.domain, 22));
  H.set_term(-2, 0.3 * random_analytic_metric(link.domain, 23));
  auto inv = metric_inverse(H);
  auto prod = mul("ij,jk->ik", inv, H);
  CHECK(prod.floor() == -8);
  CHECK((prod.coefficient(0) - TensorField::identity(link.domain)).max_abs() < 1e-13);
  for (const auto& [e, t] : prod.terms()) {
    if (e != 0) CHECK(t.max_abs() < 1e-13);
  }
}

TEST_CASE("series curvature") {
  auto sphere = build_link("sphere(2,1)");
  auto c1 = series_curvature(sphere, RadialSeries::single(2, sphere.metric), -10);
  CHECK(c1.ricci.terms().size() == 1);
  CHECK((c1.ricci.coefficient(0) - sphere.metric).max_abs() < 1e-15);

  // (r^2 + c) h: Ricci is still h, scalar curvature 2 / (r^2 + c) expands in r^-2.
  RadialSeries H(sphere.domain, 0, 2);
  H.set_term(2, sphere.metric);
  H.set_term(0, 0.5 * sphere.metric);
  auto c2 = series_curvature(sphere, H, -12);
  CHECK((c2.ricci.coefficient(0) - sphere.metric).max_abs() < 1e-15);
  double c = 1.0;
  for (int e = -2; e >= -12; e -= 2) {
    CHECK(c2.scalar.coefficient(e)({}) == doctest::Approx(2.0 * c));
    c *= -0.5;
  }

  LinkSpec s;
  s.grid = {8, 8};
  s.metric = {{"1", "0"}, {"0", "1"}};
  auto flat = build_link(s);
  auto c3 = series_curvature(flat, RadialSeries::single(2, flat.metric), -6);
  CHECK(series_max_abs(c3.ricci) == 0.0);
}

TEST_CASE("grid series curvature equals pointwise curvature of the evaluated metric") {
  auto link = random_grid_link(2, 24, 31);
  RadialSeries H(link.domain, 0, 2);
  H.set_term(2, link.metric);
  H.set_term(0, 0.5 * random_analytic_metric(link.domain, 32));
  auto sc = series_curvature(link, H, -40);
  const double r = 6.0;
  auto pointwise = curvature(link_from_metric(H.eval(r)));
  CHECK((sc.ricci.eval(r) - pointwise.ricci).max_abs() < 1e-10);
}

TEST_CASE("evaluation") {
  auto link = build_link("sphere(2,1)");
  CHECK((RadialSeries::single(2, link.metric).eval(3.0) - 9.0 * link.metric).max_abs() == 0.0);
  RadialSeries empty(link.domain, 0, 2);
  CHECK(empty.eval(5.0).max_abs() == 0.0);

  ExpandOptions o;
  o.order = 4;
  auto c = expand(build_link("sphere(2,2)"), o);
  auto Hs = metric_series(c);
  TensorField direct = 100.0 * c.link.metric;
  for (std::size_t i = 0; i < c.h.size(); ++i) direct += std::pow(10.0, -2.0 * i) * c.h[i];
  CHECK((Hs.eval(10.0) - direct).max_abs() < 1e-14 * direct.max_abs());
}

TEST_CASE("rank mismatch on addition") {
  auto link = build_link("sphere(2,1)");
  RadialSeries a = RadialSeries::single(2, link.metric);
  RadialSeries b = RadialSeries::single(0, TensorField::scalar(link.domain, 1.0));
  CHECK_THROWS_AS(a += b, Error);
}
