#include "acsol/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acsol/error.hpp"

namespace acsol {

BianchiResidual bianchi_weighted_residual(const LinkManifold& manifold, const TensorField& f,
                                          DiffMethod method) {
  if (f.rank() != 0) {
    throw Error(ErrorKind::RankMismatch, "verify", "bianchi_weighted_residual",
                "potential must be a scalar field");
  }
  const Connection conn(manifold, method);
  const CurvaturePack curv = curvature(conn);
  const TensorField& g = conn.metric();
  const TensorField& ginv = conn.inverse();
  const HessianLaplacian hl = hessian_laplacian(f, conn);
  const TensorField df = partial(f, method);
  const TensorField grad_sq = norm_sq(df, ginv);

  auto lhs = [&](const TensorField& b) {
    TensorField div = einsum("ab,abc->c", ginv, covariant_derivative(b, conn));
    const TensorField grad = einsum("ab,a->b", ginv, df);  // (1,0)
    div -= einsum("a,ac->c", grad, b);
    return div;
  };

  TensorField b = curv.ricci + hl.hessian;
  TensorField p = curv.scalar + 2.0 * hl.laplacian - grad_sq;

  BianchiResidual out;
  out.weighted = lhs(b) - 0.5 * partial(p, method);
  b += 0.5 * g;
  p -= f;
  out.soliton = lhs(b) - 0.5 * partial(p, method);
  return out;
}

namespace {

class Terms {
 public:
  Terms(DomainPtr domain, int up, int down) : sum_(std::move(domain), up, down) {}
  void add(const RadialSeries& t) {
    sum_ += t;
    for (const auto& [e, c] : t.terms()) scale_[e] = std::max(scale_[e], c.max_abs());
  }
  Residual finish() && {
    Residual r;
    r.value = std::move(sum_);
    for (const auto& [e, s] : scale_) {
      if (e >= r.value.floor()) r.scale.emplace(e, s);
    }
    return r;
  }

 private:
  RadialSeries sum_;
  std::map<int, double> scale_;
};

std::optional<int> cutoff_for(const ExpansionCoefficients& c, const ResidualOptions& opt) {
  if (!opt.exact) return opt.cutoff;
  return opt.cutoff.value_or(default_exact_cutoff(c.order));
}

}  // namespace

Residual soliton_scalar_series(const ExpansionCoefficients& c, const ResidualOptions& opt) {
  const std::optional<int> cut = cutoff_for(c, opt);
  const RadialSeries H = metric_series(c, opt.exact);
  const RadialSeries f = potential_series(c, opt.exact);
  const SeriesGeometry geo = series_geometry(c.link, H, cut, opt.method);
  const RadialSeries k = 0.5 * r_derivative(H);
  const RadialSeries fr = r_derivative(f);
  const RadialSeries frr = r_derivative(fr);
  const RadialSeries tr_k = mul("jk,jk->", geo.inverse, k, cut);
  const RadialSeries hinv_k = mul("il,lk->ik", geo.inverse, k, cut);
  const RadialSeries df = spatial_partial(f, opt.method);
  const RadialSeries grad = mul("ij,i->j", geo.inverse, df, cut);

  Terms s(H.domain_ptr(), 0, 0);
  // scalar curvature of dr^2 + H(r)
  s.add(geo.scalar);
  s.add(-2.0 * r_derivative(tr_k));
  s.add(-mul_scalar(tr_k, tr_k, cut));
  s.add(-mul("ik,ki->", hinv_k, hinv_k, cut));
  // 2 Lap f
  s.add(2.0 * frr);
  s.add(2.0 * mul_scalar(tr_k, fr, cut));
  s.add(2.0 * mul("jk,jk->", geo.inverse, series_hessian(f, geo, cut), cut));
  // -|grad f|^2
  s.add(-mul_scalar(fr, fr, cut));
  s.add(-mul("j,j->", grad, df, cut));
  s.add(static_cast<double>(-mode_sign(c.mode)) * f);
  return std::move(s).finish();
}

double scalar_constant(const ExpansionCoefficients& c) {
  return -mode_sign(c.mode) * (c.dim() + 1.0 + c.f0);
}

Residual normalized_scalar_series(const ExpansionCoefficients& c, const ResidualOptions& opt) {
  Residual s = soliton_scalar_series(c, opt);
  s.value.add_term(0, TensorField::scalar(c.link.domain, -scalar_constant(c)));
  return s;
}

Residual x_series(const ExpansionCoefficients& c, const ResidualOptions& opt) {
  Residual x = residual_constraint(c, opt);
  x.value *= 0.5;
  for (auto& [e, s] : x.scale) s *= 0.5;
  return x;
}

RadialSeries significant_terms(const Residual& r) {
  RadialSeries out(r.value.domain_ptr(), r.value.up(), r.value.down(), r.value.floor());
  const double scale = r.reference_scale();
  for (const auto& [e, t] : r.value.terms()) {
    if (t.max_abs() > kZeroThreshold * scale) out.set_term(e, t);
  }
  return out;
}

LeadingTerm leading_term(const Residual& r) {
  const RadialSeries sig = significant_terms(r);
  const double largest = series_max_abs(sig);
  for (const auto& [e, t] : sig.terms()) {
    if (largest > 0.0 && t.max_abs() > kZeroThreshold * largest) return {e, t};
  }
  throw Error(ErrorKind::NoLeadingTerm, "verify", "order_diagnostics",
              "all coefficients are numerically zero");
}

DecayFit constraint_decay_slope(const ExpansionCoefficients& c, double r_min, double r_max,
                                int samples, DiffMethod method) {
  if (!(r_min > 0.0) || !(r_max > r_min) || r_max > kMaxDecayRadius || samples < 2) {
    throw Error(ErrorKind::InvalidArgument, "verify", "constraint_decay_slope",
                "need 0 < r_min < r_max <= 1e6 and samples >= 2, got r in [" +
                    std::to_string(r_min) + ", " + std::to_string(r_max) + "], samples " +
                    std::to_string(samples));
  }
  ResidualOptions opt;
  opt.exact = true;
  opt.method = method;
  const RadialSeries constraint = significant_terms(residual_constraint(c, opt));
  if (constraint.empty()) {
    throw Error(ErrorKind::AllZeroResidual, "verify", "constraint_decay_slope",
                "constraint residual of link '" + c.link.catalog_id + "' vanishes identically");
  }
  const RadialSeries s = significant_terms(normalized_scalar_series(c, opt));

  DecayFit fit;
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.leading_exponent = *constraint.max_exponent();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double lo = std::log(r_min);
  const double hi = std::log(r_max);
  for (int k = 0; k < samples; ++k) {
    const double lr = lo + (hi - lo) * k / (samples - 1);
    const double r = std::exp(lr);
    const double cn = constraint.eval(r).max_abs();
    const double sn = s.empty() ? 0.0 : s.eval(r).max_abs();
    fit.samples.push_back({r, cn, sn});
    const double ly = std::log(cn);
    sx += lr;
    sy += ly;
    sxx += lr * lr;
    sxy += lr * ly;
  }
  const double m = samples;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

Residual inject_x(const Residual& x, int order, const TensorField& phi) {
  Residual out = x;
  out.value.add_term(-order, phi);
  double& s = out.scale[-order];
  s = std::max(s, phi.max_abs());
  return out;
}

DiagnosticsReport order_diagnostics(const Residual& x, const Residual& s,
                                    const ExpansionCoefficients& c, DiffMethod method) {
  DiagnosticsReport rep;
  rep.x_series = significant_terms(x);
  rep.s_series = significant_terms(s);
  try {
    rep.leading_x = leading_term(x);
    rep.x_status = "leading term found";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoLeadingTerm) throw;
    rep.x_status = to_string(ErrorKind::NoLeadingTerm);
  }
  try {
    rep.leading_s = leading_term(s);
    rep.s_status = "leading term found";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoLeadingTerm) throw;
    rep.s_status = to_string(ErrorKind::NoLeadingTerm);
  }
  if (rep.leading_x) rep.n_order = -rep.leading_x->exponent;
  if (rep.leading_s) rep.m_order = -rep.leading_s->exponent;
  if (rep.n_order && rep.m_order) {
    rep.m_at_most_n_minus_1 = *rep.m_order <= *rep.n_order - 1;
    rep.m_at_least_n_plus_1 = *rep.m_order >= *rep.n_order + 1;
  }
  if (!rep.leading_x) return rep;

  // Transport and divergence identities assembled on the significant part of X.
  const RadialSeries& X = rep.x_series;
  const RadialSeries H = metric_series(c);
  const RadialSeries f = potential_series(c);
  const SeriesGeometry geo = series_geometry(c.link, H, std::nullopt, method);
  const RadialSeries hr = r_derivative(H);
  const RadialSeries fr = r_derivative(f);

  Terms radial(H.domain_ptr(), 0, 1);
  radial.add(r_derivative(X));
  radial.add(-0.5 * mul("ji,j->i", mul("jk,ki->ji", geo.inverse, hr), X));
  radial.add(-mul_scalar(fr, X));
  const Residual radial_lhs = std::move(radial).finish();

  Terms divergence(H.domain_ptr(), 0, 0);
  divergence.add(mul("ij,ji->", geo.inverse, series_covariant_derivative(X, geo)));
  divergence.add(-mul("ij,ji->", geo.inverse, mul("j,i->ji", spatial_partial(f, method), X)));
  const Residual divergence_lhs = std::move(divergence).finish();

  const TensorField& phi = rep.leading_x->coefficient;
  const double phi_norm = std::max(phi.max_abs(), 1e-300);
  try {
    rep.leading_radial = leading_term(radial_lhs);
    const TensorField expected = (0.5 * mode_sign(c.mode)) * phi;
    if (rep.leading_radial->exponent == -*rep.n_order + 1) {
      rep.radial_error = (rep.leading_radial->coefficient - expected).max_abs() / phi_norm;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoLeadingTerm) throw;
  }
  try {
    rep.leading_divergence = leading_term(divergence_lhs);
    const Connection conn(c.link, method);
    const TensorField expected = einsum("ij,ji->", conn.inverse(), covariant_derivative(phi, conn));
    if (rep.leading_divergence->exponent == -*rep.n_order - 2) {
      rep.divergence_error =
          (rep.leading_divergence->coefficient - expected).max_abs() / phi_norm;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoLeadingTerm) throw;
  }
  return rep;
}

}  // namespace acsol
