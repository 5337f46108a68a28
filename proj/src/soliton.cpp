#include "acsol/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acsol/error.hpp"

namespace acsol {

const char* to_string(SolitonMode m) { return m == SolitonMode::Expander ? "expander" : "shrinker"; }

SolitonMode parse_mode(const std::string& s) {
  if (s == "expander") return SolitonMode::Expander;
  if (s == "shrinker") return SolitonMode::Shrinker;
  throw Error(ErrorKind::InvalidArgument, "cli", "run", "unknown mode '" + s + "'");
}

int default_exact_cutoff(int order) { return -2 * order - 30; }

// ---------------------------------------------------------------------------
// residual bookkeeping

double Residual::reference_scale() const {
  double m = 0.0;
  for (const auto& [e, v] : scale) m = std::max(m, v);
  return m;
}

double Residual::relative(int exponent) const {
  const double norm = value.coefficient(exponent).max_abs();
  if (norm == 0.0) return 0.0;
  const double s = reference_scale();
  return s > 0.0 ? norm / s : INFINITY;
}

double Residual::max_relative() const {
  double m = 0.0;
  for (const auto& [e, t] : value.terms()) m = std::max(m, relative(e));
  return m;
}

double Residual::max_odd_relative() const {
  double m = 0.0;
  for (const auto& [e, t] : value.terms()) {
    if (e % 2 != 0) m = std::max(m, relative(e));
  }
  return m;
}

namespace {

class TermSum {
 public:
  TermSum(DomainPtr domain, int up, int down) : sum_(std::move(domain), up, down) {}

  void add(const RadialSeries& term) {
    sum_ += term;
    for (const auto& [e, t] : term.terms()) {
      double& s = scale_[e];
      s = std::max(s, t.max_abs());
    }
  }

  Residual finish(bool symmetric) && {
    Residual r;
    r.value = symmetric ? symmetrize(sum_) : std::move(sum_);
    for (const auto& [e, s] : scale_) {
      if (e >= r.value.floor()) r.scale.emplace(e, s);
    }
    return r;
  }

 private:
  RadialSeries sum_;
  std::map<int, double> scale_;
};

struct Derivatives {
  RadialSeries hr, hrr, fr, frr;
};

Derivatives radial_derivatives(const RadialSeries& H, const RadialSeries& f) {
  Derivatives d;
  d.hr = r_derivative(H);
  d.hrr = r_derivative(d.hr);
  d.fr = r_derivative(f);
  d.frr = r_derivative(d.fr);
  return d;
}

RadialSeries constant_scalar_series(const DomainPtr& dom, int exponent, double value) {
  return RadialSeries::single(exponent, TensorField::scalar(dom, value));
}

}  // namespace

Residual evolution_lhs(const LinkManifold& link, const RadialSeries& H, const RadialSeries& f,
                       int sign, std::optional<int> cutoff, DiffMethod method) {
  const SeriesGeometry geo = series_geometry(link, H, cutoff, method);
  const Derivatives d = radial_derivatives(H, f);
  const RadialSeries trk = mul("jk,jk->", geo.inverse, d.hr, cutoff);
  const RadialSeries hinv_k = mul("il,lk->ik", geo.inverse, d.hr, cutoff);

  TermSum sum(H.domain_ptr(), 0, 2);
  sum.add(-d.hrr);
  sum.add(2.0 * geo.ricci);
  sum.add(-0.5 * mul_scalar(trk, d.hr, cutoff));
  sum.add(mul("ji,ik->jk", d.hr, hinv_k, cutoff));
  sum.add(2.0 * series_hessian(f, geo, cutoff));
  sum.add(mul_scalar(d.fr, d.hr, cutoff));
  sum.add(static_cast<double>(sign) * H);
  return std::move(sum).finish(true);
}

Residual trace_lhs(const LinkManifold& link, const RadialSeries& H, const RadialSeries& f, int sign,
                   std::optional<int> cutoff, DiffMethod method) {
  const RadialSeries inv = metric_inverse(H, cutoff);
  const Derivatives d = radial_derivatives(H, f);
  const RadialSeries hinv_k = mul("il,lk->ik", inv, d.hr, cutoff);

  TermSum sum(H.domain_ptr(), 0, 0);
  sum.add(-mul("jk,jk->", inv, d.hrr, cutoff));
  sum.add(0.5 * mul("ik,ki->", hinv_k, hinv_k, cutoff));
  sum.add(2.0 * d.frr);
  sum.add(constant_scalar_series(H.domain_ptr(), 0, static_cast<double>(sign)));
  (void)link;
  (void)method;
  return std::move(sum).finish(false);
}

Residual constraint_lhs(const LinkManifold& link, const RadialSeries& H, const RadialSeries& f,
                        std::optional<int> cutoff, DiffMethod method) {
  const SeriesGeometry geo = series_geometry(link, H, cutoff, method);
  const Derivatives d = radial_derivatives(H, f);
  const RadialSeries dk = series_covariant_derivative(d.hr, geo, cutoff);  // [i, m, l]
  const RadialSeries hinv_k = mul("il,lk->ik", geo.inverse, d.hr, cutoff);
  const RadialSeries df = spatial_partial(f, method);

  TermSum sum(H.domain_ptr(), 0, 1);
  sum.add(mul("im,iml->l", geo.inverse, dk, cutoff));
  sum.add(-mul("im,lim->l", geo.inverse, dk, cutoff));
  sum.add(2.0 * spatial_partial(d.fr, method));
  sum.add(-mul("ml,m->l", hinv_k, df, cutoff));
  return std::move(sum).finish(false);
}

// ---------------------------------------------------------------------------
// series assembly

namespace {

RadialSeries build_h_series(const LinkManifold& link, const std::vector<TensorField>& h, int floor) {
  RadialSeries H(link.domain, 0, 2, floor);
  H.set_term(2, link.metric);
  for (std::size_t i = 0; i < h.size(); ++i) H.set_term(-2 * static_cast<int>(i), h[i]);
  return H;
}

RadialSeries build_f_series(const LinkManifold& link, int sign, const std::vector<TensorField>& f,
                            int floor) {
  RadialSeries F(link.domain, 0, 0, floor);
  F.set_term(2, TensorField::scalar(link.domain, -0.25 * sign));
  for (std::size_t i = 0; i < f.size(); ++i) F.set_term(-2 * static_cast<int>(i), f[i]);
  return F;
}

}  // namespace

RadialSeries metric_series(const ExpansionCoefficients& c, bool exact) {
  return build_h_series(c.link, c.h, exact ? kExactFloor : -2 * c.order);
}

RadialSeries potential_series(const ExpansionCoefficients& c, bool exact) {
  return build_f_series(c.link, mode_sign(c.mode), c.f, exact ? kExactFloor : -2 * c.order - 2);
}

namespace {

std::optional<int> residual_cutoff(const ExpansionCoefficients& c, const ResidualOptions& opt) {
  if (!opt.exact) return opt.cutoff;
  return opt.cutoff.value_or(default_exact_cutoff(c.order));
}

}  // namespace

Residual residual_evolution(const ExpansionCoefficients& c, const ResidualOptions& opt) {
  return evolution_lhs(c.link, metric_series(c, opt.exact), potential_series(c, opt.exact),
                       mode_sign(c.mode), residual_cutoff(c, opt), opt.method);
}

Residual residual_trace(const ExpansionCoefficients& c, const ResidualOptions& opt) {
  return trace_lhs(c.link, metric_series(c, opt.exact), potential_series(c, opt.exact),
                   mode_sign(c.mode), residual_cutoff(c, opt), opt.method);
}

Residual residual_constraint(const ExpansionCoefficients& c, const ResidualOptions& opt) {
  return constraint_lhs(c.link, metric_series(c, opt.exact), potential_series(c, opt.exact),
                        residual_cutoff(c, opt), opt.method);
}

// ---------------------------------------------------------------------------
// recursion

namespace {

// Extended accumulator: on large grids the plain sum loses the last digits of
// the divisor.
double dot(const TensorField& a, const TensorField& b) {
  long double s = 0.0L;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    s += static_cast<long double>(a.data()[k]) * b.data()[k];
  }
  return static_cast<double>(s);
}

TensorField h_probe(const LinkManifold& link) {
  if (!link.is_grid()) return link.metric;
  const int n = link.dim();
  TensorField bump = TensorField::sample(
      link.domain, 0, 2, [n](std::span<const int> idx, std::span<const double> x) {
        double sum = 0.0;
        for (int a = 0; a < n; ++a) sum += x[static_cast<std::size_t>(a)];
        if (idx[0] == idx[1]) return 0.1 * std::sin(x[static_cast<std::size_t>(idx[0])]);
        return 0.05 * std::cos(sum);
      });
  return link.metric + bump;
}

TensorField f_probe(const LinkManifold& link) {
  if (!link.is_grid()) return TensorField::scalar(link.domain, 1.0);
  return TensorField::sample(link.domain, 0, 0, [](std::span<const int>, std::span<const double> x) {
    return 1.0 + 0.5 * std::sin(x[0]);
  });
}

struct ProbeResult {
  double divisor;
  TensorField solution;
};

// Solves  base + d * X = 0  for the unknown coefficient X given the residual
// coefficient with X = 0 and with X = P.
template <typename Residual0, typename ResidualP>
ProbeResult probe_solve(const TensorField& probe_shape, Residual0 at_zero, ResidualP at_probe,
                        const std::string& step, int order, std::optional<double> expected) {
  const TensorField k0 = at_zero();
  TensorField probe = probe_shape;
  probe *= std::max(1.0, k0.max_abs());
  const TensorField kp = at_probe(probe);
  const TensorField response = kp - k0;
  const double d = dot(response, probe) / dot(probe, probe);
  const std::string where = step + " at order " + std::to_string(order);
  if (std::abs(d) < 1e-8) {
    throw Error(ErrorKind::DegenerateDivisor, "soliton_expand", "expand",
                where + ": probe divisor " + std::to_string(d));
  }
  TensorField defect = response;
  defect.axpy(-d, probe);
  const double rel = defect.max_abs() / (std::abs(d) * probe.max_abs());
  if (rel > 1e-10) {
    throw Error(ErrorKind::NonlinearResponse, "soliton_expand", "expand",
                where + ": response departs from a multiple of the probe by " + std::to_string(rel));
  }
  if (expected && std::abs(d - *expected) > 1e-9 * std::abs(*expected)) {
    throw Error(ErrorKind::NonlinearResponse, "soliton_expand", "expand",
                where + ": probe divisor " + std::to_string(d) + " differs from " +
                    std::to_string(*expected));
  }
  const double divisor = expected.value_or(d);
  return {d, (-1.0 / divisor) * k0};
}

}  // namespace

ExpansionCoefficients expand(const LinkManifold& link, const ExpandOptions& options) {
  if (options.order < 0 || options.order > options.max_order) {
    throw Error(ErrorKind::InvalidArgument, "soliton_expand", "expand",
                "order " + std::to_string(options.order) + " outside [0, " +
                    std::to_string(options.max_order) + "]");
  }
  const int n = link.dim();
  const int sign = mode_sign(options.mode);
  const bool expander = options.mode == SolitonMode::Expander;

  ExpansionCoefficients c;
  c.link = link;
  c.mode = options.mode;
  c.order = options.order;
  c.f0 = options.f0.value_or(-static_cast<double>(n - 1));
  c.f.push_back(TensorField::scalar(link.domain, c.f0));

  const TensorField hp = h_probe(link);
  const TensorField fp = f_probe(link);
  const TensorField zero2(link.domain, 0, 2);
  const TensorField zero0(link.domain, 0, 0);

  for (int i = 0; i <= options.order; ++i) {
    const int e = -2 * i;
    // h_{2i} from the r^{-2i} coefficient of the evolution equation.
    {
      const RadialSeries F = build_f_series(link, sign, c.f, e);
      auto residual_with = [&](const TensorField& x) {
        std::vector<TensorField> h = c.h;
        h.push_back(x);
        return evolution_lhs(link, build_h_series(link, h, e), F, sign, std::nullopt, options.method)
            .value.coefficient(e);
      };
      const std::optional<double> expected =
          expander ? std::optional<double>(i + 1.0) : std::nullopt;
      ProbeResult pr = probe_solve(
          hp, [&] { return residual_with(zero2); }, residual_with, "h-step", i, expected);
      c.h_divisors.push_back(pr.divisor);
      c.h.push_back(symmetrize(pr.solution));
    }
    // f_{2i+2} from the r^{-2i-4} coefficient of the trace equation.
    {
      const RadialSeries H = build_h_series(link, c.h, e);
      auto residual_with = [&](const TensorField& x) {
        std::vector<TensorField> f = c.f;
        f.push_back(x);
        return trace_lhs(link, H, build_f_series(link, sign, f, e - 2), sign, std::nullopt,
                         options.method)
            .value.coefficient(e - 4);
      };
      const std::optional<double> expected =
          expander ? std::optional<double>(2.0 * (2 * i + 2) * (2 * i + 3)) : std::nullopt;
      ProbeResult pr = probe_solve(
          fp, [&] { return residual_with(zero0); }, residual_with, "f-step", i, expected);
      c.f_divisors.push_back(pr.divisor);
      c.f.push_back(std::move(pr.solution));
    }
  }
  return c;
}

ClosedFormTerms closed_form_first_terms(const LinkManifold& link, DiffMethod method) {
  const Connection conn(link, method);
  const CurvaturePack curv = curvature(conn);
  const double n = link.dim();
  const TensorField& h = link.metric;
  const TensorField& ric = curv.ricci;
  const TensorField& R = curv.scalar;
  const HessianLaplacian hr = hessian_laplacian(R, conn);

  ClosedFormTerms out;
  out.h0 = -2.0 * (ric - (n - 1.0) * h);

  TensorField h2 = -1.0 * lichnerowicz(ric, conn, curv);
  h2 += (1.0 / 3.0) * hr.hessian;
  h2 += (4.0 / 3.0) * multiply(R, h);
  h2 -= 4.0 * ric;
  h2 -= (4.0 * (n / 3.0 - 1.0) * (n - 1.0)) * h;
  out.h2 = symmetrize(h2);

  out.f2 = map_pointwise(R, [n](double v) { return -(v - n * (n - 1.0)) / 3.0; });

  const TensorField ric_sq = norm_sq(ric, conn.inverse());
  TensorField f4 = -1.0 * hr.laplacian;
  f4 -= 2.0 * ric_sq;
  f4 += (2.0 * (3.0 * n - 5.0)) * R;
  f4 *= 0.2;
  const double c = -4.0 * (n - 2.0) * (n - 1.0) * n * 0.2;
  out.f4 = map_pointwise(f4, [c](double v) { return v + c; });
  return out;
}

}  // namespace acsol
