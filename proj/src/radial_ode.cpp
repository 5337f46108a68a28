#include "acsol/radial_ode.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "acsol/error.hpp"

namespace acsol {

namespace {

struct Pieces {
  Connection conn;
  CurvaturePack curv;
  TensorField hinv_k;  // (1,1) H^{il} K_lk
};

Pieces pieces(const LinkManifold& link, const RadialState& s, DiffMethod method) {
  try {
    Connection conn(link, s.H, method);
    CurvaturePack curv = curvature(conn);
    TensorField hk = einsum("il,lk->ik", conn.inverse(), s.K);
    return {std::move(conn), std::move(curv), std::move(hk)};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonPositiveDefinite) throw;
    throw Error(ErrorKind::NonPositiveDefinite, "radial_ode", "rhs",
                "H degenerate at r = " + std::to_string(s.r) + " (" + e.detail() + ")");
  }
}

SecondDerivatives second_derivatives(const Pieces& p, const RadialState& s, int sign) {
  const TensorField& hinv = p.conn.inverse();
  const TensorField trk = trace(s.K, hinv);
  TensorField hrr = 2.0 * p.curv.ricci;
  hrr -= 0.5 * multiply(trk, s.K);
  hrr += einsum("ji,ik->jk", s.K, p.hinv_k);
  hrr += 2.0 * hessian_laplacian(s.f, p.conn).hessian;
  hrr += multiply(s.phi, s.K);
  hrr += static_cast<double>(sign) * s.H;
  SecondDerivatives out;
  out.H_rr = symmetrize(hrr);
  TensorField frr = trace(out.H_rr, hinv);
  frr -= 0.5 * einsum("ik,ki->", p.hinv_k, p.hinv_k);
  out.f_rr = 0.5 * map_pointwise(frr, [sign](double v) { return v - sign; });
  return out;
}

}  // namespace

SecondDerivatives rhs(const LinkManifold& link, const RadialState& state, SolitonMode mode,
                      DiffMethod method) {
  return second_derivatives(pieces(link, state, method), state, mode_sign(mode));
}

RadialState init_from_series(const ExpansionCoefficients& c, double r0) {
  if (!(r0 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "radial_ode", "init_from_series",
                "r0 = " + std::to_string(r0));
  }
  const RadialSeries H = metric_series(c, true);
  const RadialSeries f = potential_series(c, true);
  RadialState s;
  s.r = r0;
  s.H = symmetrize(H.eval(r0));
  s.K = symmetrize(r_derivative(H).eval(r0));
  s.f = f.eval(r0);
  s.phi = r_derivative(f).eval(r0);
  const double lam = min_eigenvalue(s.H);
  if (!(lam > kMinMetricEigenvalue)) {
    throw Error(ErrorKind::NonPositiveDefinite, "radial_ode", "init_from_series",
                "min eigenvalue " + std::to_string(lam) + " of H at r0 = " + std::to_string(r0));
  }
  return s;
}

StateConstraints state_constraints(const LinkManifold& link, const RadialState& s, SolitonMode mode,
                                   double s_constant, DiffMethod method) {
  const int sign = mode_sign(mode);
  const Pieces p = pieces(link, s, method);
  const SecondDerivatives d = second_derivatives(p, s, sign);
  const TensorField& hinv = p.conn.inverse();

  StateConstraints out;
  const TensorField dk = covariant_derivative(s.K, p.conn);  // [i, m, l]
  const TensorField df = partial(s.f, method);
  out.constraint = einsum("im,iml->l", hinv, dk);
  out.constraint -= einsum("im,lim->l", hinv, dk);
  out.constraint += 2.0 * partial(s.phi, method);
  out.constraint -= einsum("ml,m->l", p.hinv_k, df);

  // Second fundamental form of the level sets is K/2.
  const TensorField tr_half = 0.5 * trace(s.K, hinv);
  const TensorField tr_sq = einsum("ik,ki->", p.hinv_k, p.hinv_k);
  TensorField dr_tr = 0.5 * (trace(d.H_rr, hinv) - tr_sq);
  TensorField scal = p.curv.scalar - 2.0 * dr_tr - multiply(tr_half, tr_half) - 0.25 * tr_sq;
  TensorField lap = d.f_rr + multiply(tr_half, s.phi) + hessian_laplacian(s.f, p.conn).laplacian;
  TensorField grad_sq = multiply(s.phi, s.phi) + norm_sq(df, hinv);
  out.s = scal + 2.0 * lap - grad_sq - static_cast<double>(sign) * s.f;
  out.s = map_pointwise(out.s, [s_constant](double v) { return v - s_constant; });
  return out;
}

namespace {

struct Slope {
  TensorField dH, dK, df, dphi;
};

Slope slope_at(const LinkManifold& link, const RadialState& s, int sign, DiffMethod method) {
  const SecondDerivatives d = second_derivatives(pieces(link, s, method), s, sign);
  return {s.K, d.H_rr, s.phi, d.f_rr};
}

RadialState advance(const RadialState& s, double h, const Slope& k) {
  RadialState out = s;
  out.r += h;
  out.H.axpy(h, k.dH);
  out.K.axpy(h, k.dK);
  out.f.axpy(h, k.df);
  out.phi.axpy(h, k.dphi);
  return out;
}

MonitorSample sample(const LinkManifold& link, const RadialState& s, const IntegrateOptions& opt,
                     const RadialSeries* h_series) {
  const StateConstraints c = state_constraints(link, s, opt.mode, opt.s_constant, opt.method);
  MonitorSample m{s.r, c.constraint.max_abs(), c.s.max_abs(),
                  std::numeric_limits<double>::quiet_NaN()};
  if (h_series) {
    const TensorField ref = h_series->eval(s.r);
    m.deviation = (s.H - ref).max_abs() / ref.max_abs();
  }
  return m;
}

}  // namespace

Trajectory integrate(const LinkManifold& link, const RadialState& initial,
                     const IntegrateOptions& opt, const ExpansionCoefficients* reference) {
  if (!(opt.step > 0.0) || !(initial.r > 0.0) || !(opt.r_end > 0.0) || opt.stride < 1) {
    throw Error(ErrorKind::InvalidArgument, "radial_ode", "integrate",
                "need step > 0, r > 0 and stride >= 1 (step " + std::to_string(opt.step) +
                    ", r0 " + std::to_string(initial.r) + ", r_end " + std::to_string(opt.r_end) + ")");
  }
  const int sign = mode_sign(opt.mode);
  const double span = opt.r_end - initial.r;
  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(span) / opt.step - 1e-9)));
  const double h = span / static_cast<double>(steps);

  std::optional<RadialSeries> h_series;
  if (reference) h_series = metric_series(*reference, true);
  const RadialSeries* hs = h_series ? &*h_series : nullptr;

  Trajectory out;
  RadialState s = initial;
  out.monitor.samples.push_back(sample(link, s, opt, hs));
  for (long k = 1; k <= steps; ++k) {
    const Slope k1 = slope_at(link, s, sign, opt.method);
    const Slope k2 = slope_at(link, advance(s, 0.5 * h, k1), sign, opt.method);
    const Slope k3 = slope_at(link, advance(s, 0.5 * h, k2), sign, opt.method);
    const Slope k4 = slope_at(link, advance(s, h, k3), sign, opt.method);
    RadialState next = s;
    next.r = initial.r + h * static_cast<double>(k);
    auto combine = [h](TensorField& y, const TensorField& a, const TensorField& b,
                       const TensorField& c, const TensorField& d) {
      y.axpy(h / 6.0, a);
      y.axpy(h / 3.0, b);
      y.axpy(h / 3.0, c);
      y.axpy(h / 6.0, d);
    };
    combine(next.H, k1.dH, k2.dH, k3.dH, k4.dH);
    combine(next.K, k1.dK, k2.dK, k3.dK, k4.dK);
    combine(next.f, k1.df, k2.df, k3.df, k4.df);
    combine(next.phi, k1.dphi, k2.dphi, k3.dphi, k4.dphi);
    next.H = symmetrize(next.H);
    next.K = symmetrize(next.K);

    const double change = (next.H - s.H).max_abs() / s.H.max_abs();
    if (!std::isfinite(change) || change > opt.max_relative_change) {
      throw Error(ErrorKind::StepTooLarge, "radial_ode", "integrate",
                  "relative change " + std::to_string(change) + " of H at r = " +
                      std::to_string(next.r));
    }
    s = std::move(next);
    if (k % opt.stride == 0 || k == steps) out.monitor.samples.push_back(sample(link, s, opt, hs));
  }
  out.final_state = std::move(s);
  return out;
}

}  // namespace acsol
