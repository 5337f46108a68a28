#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acsol/error.hpp"
#include "acsol/geometry.hpp"
#include "acsol/link.hpp"
#include "acsol/random_fields.hpp"

using namespace acsol;

namespace {

LinkManifold grid_link(const char* g11, int n = 32) {
  LinkSpec s;
  s.grid = {n, n};
  s.metric = {{g11, "0"}, {"0", "1"}};
  return build_link(s);
}

// 4th-order periodic central difference along axis 1 of a 2-d grid function.
std::vector<double> fd_axis1(const std::vector<double>& v, int n) {
  const double h = 2 * M_PI / n;
  std::vector<double> out(v.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto at = [&](int jj) { return v[static_cast<std::size_t>(i * n + (jj + n) % n)]; };
      out[static_cast<std::size_t>(i * n + j)] =
          (-at(j + 2) + 8 * at(j + 1) - 8 * at(j - 1) + at(j - 2)) / (12 * h);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("round spheres") {
  for (int n = 2; n <= 4; ++n) {
    for (double a : {1.0, 2.0}) {
      auto link = build_link("sphere(" + std::to_string(n) + "," + std::to_string(a) + ")");
      auto c = curvature(link);
      CHECK((c.ricci - ((n - 1) / (a * a)) * link.metric).max_abs() < 1e-14);
      CHECK(c.scalar({}) == doctest::Approx(n * (n - 1) / (a * a)));
      Connection conn(link);
      CHECK(lichnerowicz(c.ricci, conn, c).max_abs() < 1e-13);
      CHECK(norm_sq(c.ricci, conn.inverse())({}) ==
            doctest::Approx(n * (n - 1.0) * (n - 1.0) / std::pow(a, 4)));
      CHECK(trace(link.metric, conn.inverse())({}) == doctest::Approx(n));
    }
  }
}

TEST_CASE("sphere products have block curvature") {
  auto link = build_link("sphere_product(2,1;3,2)");
  auto c = curvature(link);
  CHECK(c.scalar({}) == doctest::Approx(2.0 + 6.0 / 4.0));
  CHECK(c.ricci({0, 0}) == doctest::Approx(1.0));
  CHECK(c.ricci({3, 3}) == doctest::Approx(0.5 * link.metric({3, 3})));
  CHECK(c.ricci({0, 3}) == 0.0);
}

TEST_CASE("flat torus") {
  auto link = grid_link("1");
  auto c = curvature(link);
  CHECK(c.christoffel.max_abs() == 0.0);
  CHECK(c.riemann.max_abs() == 0.0);
  CHECK(c.scalar.max_abs() == 0.0);
  Connection conn(link);
  TensorField s = TensorField::sample(link.domain, 0, 0, [](std::span<const int>, std::span<const double> x) {
    return std::sin(x[0]);
  });
  CHECK((hessian_laplacian(s, conn).laplacian + s).max_abs() < 1e-13);
}

TEST_CASE("sine-perturbed metrics") {
  // g11 = 1 + 0.1 sin(x1) is a reparametrization of the flat metric.
  auto flat = grid_link("1+0.1*sin(x1)");
  CHECK(min_eigenvalue(flat.metric) == doctest::Approx(0.9).epsilon(1e-3));
  CHECK(curvature(flat).scalar.max_abs() < 1e-12);

  // g = E(x2) dx1^2 + dx2^2 has R = -2 (sqrt E)'' / sqrt E.
  const int n = 256;
  auto link = grid_link("1+0.1*sin(x2)", n);
  auto c = curvature(link);
  std::vector<double> root(link.domain->points());
  for (std::size_t p = 0; p < root.size(); ++p) root[p] = std::sqrt(link.metric({0, 0}, p));
  const auto d2 = fd_axis1(fd_axis1(root, n), n);
  double err = 0.0;
  for (std::size_t p = 0; p < root.size(); ++p) {
    err = std::max(err, std::abs(c.scalar({}, p) + 2 * d2[p] / root[p]));
  }
  CHECK(err < 1e-8);
  CHECK(c.scalar.max_abs() > 0.01);
}

TEST_CASE("spectral and finite-difference curvature agree") {
  auto link = grid_link("1+0.1*sin(x2)", 256);
  auto a = curvature(link);
  auto b = curvature(link, DiffMethod::FiniteDifference4);
  CHECK((a.scalar - b.scalar).max_abs() < 1e-8);
  Connection sa(link), sb(link, DiffMethod::FiniteDifference4);
  CHECK((lichnerowicz(a.ricci, sa, a) - lichnerowicz(b.ricci, sb, b)).max_abs() < 1e-7);
}

TEST_CASE("metric compatibility and contracted Bianchi on random metrics") {
  for (std::uint64_t seed : {3u, 4u}) {
    auto link = random_grid_link(2, 32, seed);
    Connection conn(link);
    CHECK(covariant_derivative(link.metric, conn).max_abs() < 1e-12);
    CHECK(covariant_derivative(TensorField::scalar(link.domain, 1.0), conn).max_abs() == 0.0);
    auto c = curvature(conn);
    TensorField div = einsum("ab,abc->c", conn.inverse(), covariant_derivative(c.ricci, conn));
    CHECK((div - 0.5 * partial(c.scalar)).max_abs() < 1e-8);
    CHECK(lichnerowicz(link.metric, conn, c).max_abs() < 1e-12);
  }
  auto link3 = random_grid_link(3, 16, 9);
  Connection conn3(link3);
  auto c3 = curvature(conn3);
  TensorField div3 = einsum("ab,abc->c", conn3.inverse(), covariant_derivative(c3.ricci, conn3));
  CHECK((div3 - 0.5 * partial(c3.scalar)).max_abs() < 1e-6);
}

TEST_CASE("divergence theorem") {
  auto link = grid_link("1+0.1*sin(x2)");
  Connection conn(link);
  TensorField phi = random_analytic_scalar(link.domain, 5);
  CHECK(std::abs(integrate(hessian_laplacian(phi, conn).laplacian, link.metric)) < 1e-10);
  auto h = hessian_laplacian(phi, conn);
  CHECK(symmetry_defect(h.hessian) < 1e-12);
}

TEST_CASE("lichnerowicz needs a symmetric input") {
  auto link = grid_link("1+0.1*sin(x2)", 16);
  Connection conn(link);
  auto c = curvature(conn);
  TensorField t = TensorField::sample(link.domain, 0, 2, [](std::span<const int> i, std::span<const double>) {
    return i[0] == 0 && i[1] == 1 ? 1.0 : 0.0;
  });
  CHECK_THROWS_AS(lichnerowicz(t, conn, c), Error);
}

TEST_CASE("catalog parsing errors") {
  CHECK_THROWS_AS(build_link("sphere(0,1)"), Error);
  CHECK_THROWS_AS(build_link("sphere(2,-1)"), Error);
  CHECK_THROWS_AS(build_link("cube(2)"), Error);
  LinkSpec s;
  s.grid = {8, 8};
  s.metric = {{"0.5*sin(x1)", "0"}, {"0", "1"}};
  CHECK_THROWS_AS(build_link(s), Error);
}
