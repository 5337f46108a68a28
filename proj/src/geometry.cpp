#include "acsol/geometry.hpp"

#include <cmath>
#include <string>

#include "acsol/error.hpp"

namespace acsol {

namespace {

TensorField lower_riemann(const TensorField& riem13, const TensorField& metric) {
  return einsum("mijk,ml->ijkl", riem13, metric);
}

std::string letters(char first, int count) {
  std::string s;
  for (int i = 0; i < count; ++i) s.push_back(static_cast<char>(first + i));
  return s;
}

}  // namespace

TensorField christoffel_symbols(const TensorField& metric, const TensorField& inverse,
                                DiffMethod method) {
  // dg slots [m, i, j] = d_m g_ij
  const TensorField dg = partial(metric, method);
  // Gamma_{m,ij} = 1/2 (d_i g_jm + d_j g_im - d_m g_ij)
  TensorField first = einsum("ijm->mij", dg);
  first += einsum("jim->mij", dg);
  first -= dg;
  first *= 0.5;
  return einsum("lm,mij->lij", inverse, first);
}

Connection::Connection(const LinkManifold& link, DiffMethod method)
    : Connection(link, link.metric, method) {}

Connection::Connection(const LinkManifold& link, TensorField metric, DiffMethod method)
    : domain_(link.domain), metric_(std::move(metric)), method_(method) {
  if (metric_.up() != 0 || metric_.down() != 2 || !metric_.domain().same_as(*domain_)) {
    throw Error(ErrorKind::RankMismatch, "link_geometry", "curvature",
                "metric must be a (0,2) field on the link domain");
  }
  if (!domain_->is_grid()) frame_riemann_ = *link.frame_riemann;
  init();
}

void Connection::init() {
  inverse_ = inverse_metric(metric_);
  if (domain_->is_grid()) {
    christoffel_ = christoffel_symbols(metric_, inverse_, method_);
  } else {
    christoffel_ = TensorField(domain_, 1, 2);
  }
}

CurvaturePack curvature(const Connection& conn) {
  CurvaturePack pack;
  pack.christoffel = conn.christoffel();
  TensorField riem13;
  if (conn.is_grid()) {
    const TensorField& gamma = conn.christoffel();
    const TensorField dgamma = partial(gamma, conn.method());  // [l, d, j, k]
    riem13 = dgamma;
    riem13 -= einsum("ljik->lijk", dgamma);
    riem13 += einsum("mjk,lim->lijk", gamma, gamma);
    riem13 -= einsum("mik,ljm->lijk", gamma, gamma);
  } else {
    riem13 = conn.frame_riemann();
  }
  pack.riemann = lower_riemann(riem13, conn.metric());
  pack.ricci = symmetrize(einsum("iijk->jk", riem13));
  pack.scalar = einsum("jk,jk->", conn.inverse(), pack.ricci);
  return pack;
}

CurvaturePack curvature(const LinkManifold& link, DiffMethod method) {
  return curvature(Connection(link, method));
}

TensorField covariant_derivative(const TensorField& t, const Connection& conn, int max_rank) {
  if (t.rank() + 1 > max_rank) {
    throw Error(ErrorKind::RankOverflow, "link_geometry", "covariant_derivative",
                "result rank " + std::to_string(t.rank() + 1) + " exceeds " + std::to_string(max_rank));
  }
  if (!t.domain().same_as(*conn.domain())) {
    throw Error(ErrorKind::RankMismatch, "link_geometry", "covariant_derivative", "domain mismatch");
  }
  TensorField out = partial(t, conn.method());
  if (!conn.is_grid()) return out;

  const int up = t.up();
  const int down = t.down();
  const std::string ups = letters('a', up);
  const std::string downs = letters('p', down);
  const std::string out_spec = ups + "m" + downs;
  const TensorField& gamma = conn.christoffel();
  for (int a = 0; a < up; ++a) {
    std::string tin = ups + downs;
    const char u = tin[static_cast<std::size_t>(a)];
    tin[static_cast<std::size_t>(a)] = 's';
    out += einsum(std::string(1, u) + "ms," + tin + "->" + out_spec, gamma, t);
  }
  for (int b = 0; b < down; ++b) {
    std::string tin = ups + downs;
    const char d = tin[static_cast<std::size_t>(up + b)];
    tin[static_cast<std::size_t>(up + b)] = 's';
    out -= einsum(std::string("sm") + d + "," + tin + "->" + out_spec, gamma, t);
  }
  return out;
}

HessianLaplacian hessian_laplacian(const TensorField& phi, const Connection& conn) {
  if (phi.rank() != 0) {
    throw Error(ErrorKind::RankMismatch, "link_geometry", "hessian_laplacian", "expected a scalar field");
  }
  HessianLaplacian out;
  out.hessian = symmetrize(covariant_derivative(partial(phi, conn.method()), conn));
  out.laplacian = trace(out.hessian, conn.inverse());
  return out;
}

TensorField rough_laplacian(const TensorField& t, const Connection& conn) {
  if (t.up() != 0) {
    throw Error(ErrorKind::RankMismatch, "link_geometry", "lichnerowicz", "expected a covariant tensor");
  }
  const TensorField second = covariant_derivative(covariant_derivative(t, conn), conn);
  const std::string rest = letters('p', t.rank());
  return einsum("ab,ba" + rest + "->" + rest, conn.inverse(), second);
}

TensorField lichnerowicz(const TensorField& t, const Connection& conn, const CurvaturePack& curv) {
  if (t.up() != 0 || t.down() != 2) {
    throw Error(ErrorKind::RankMismatch, "link_geometry", "lichnerowicz", "expected a (0,2) tensor");
  }
  if (!is_symmetric(t, 1e-12)) {
    throw Error(ErrorKind::NotSymmetric, "link_geometry", "lichnerowicz",
                "symmetry defect " + std::to_string(symmetry_defect(t)));
  }
  const TensorField& ginv = conn.inverse();
  TensorField out = rough_laplacian(t, conn);
  const TensorField t_up = raise_all(t, ginv);
  out += 2.0 * einsum("ijkl,il->jk", curv.riemann, t_up);
  const TensorField ric_mixed = einsum("jm,ml->lj", curv.ricci, ginv);  // Ric^l_j
  out -= einsum("lj,lk->jk", ric_mixed, t);
  out -= einsum("jl,lk->jk", t, ric_mixed);
  return symmetrize(out);
}

TensorField raise_all(const TensorField& t, const TensorField& inverse) {
  if (t.up() != 0) {
    throw Error(ErrorKind::RankMismatch, "link_geometry", "tensor_algebra", "expected a covariant tensor");
  }
  TensorField out = t;
  const int k = t.rank();
  // Raise slot by slot; raised slots move to the front.
  for (int s = 0; s < k; ++s) {
    const int up = out.up();
    const std::string ups = letters('a', up);
    const std::string downs = letters('p', k - up);
    const char target = downs[0];
    out = einsum(std::string("z") + target + "," + ups + downs + "->" + ups + "z" + downs.substr(1),
                 inverse, out);
  }
  return out;
}

TensorField norm_sq(const TensorField& t, const TensorField& inverse) {
  if (t.rank() == 0) return multiply(t, t);
  const TensorField up = raise_all(t, inverse);
  const std::string idx = letters('a', t.rank());
  return einsum(idx + "," + idx + "->", up, t);
}

TensorField trace(const TensorField& t, const TensorField& inverse) {
  return einsum("ij,ij->", inverse, t);
}

double integrate(const TensorField& scalar, const TensorField& metric) {
  if (scalar.rank() != 0) {
    throw Error(ErrorKind::RankMismatch, "link_geometry", "integrate", "expected a scalar field");
  }
  const int n = metric.dim();
  double cell = 1.0;
  if (scalar.domain().is_grid()) {
    for (int a = 0; a < n; ++a) cell *= scalar.domain().spacing(a);
  }
  double sum = 0.0;
  for (std::size_t p = 0; p < scalar.points(); ++p) {
    double det = 1.0;
    if (n == 1) {
      det = metric({0, 0}, p);
    } else if (n == 2) {
      det = metric({0, 0}, p) * metric({1, 1}, p) - metric({0, 1}, p) * metric({1, 0}, p);
    } else if (n == 3) {
      const auto g = [&](int i, int j) { return metric({i, j}, p); };
      det = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
            g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
            g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
    }
    sum += scalar.at(0, p) * std::sqrt(det) * cell;
  }
  return sum;
}

}  // namespace acsol
