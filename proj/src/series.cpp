#include "acsol/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acsol/error.hpp"

namespace acsol {

namespace {

int shift_floor(int floor, int by) { return floor <= kExactFloor ? kExactFloor : floor + by; }

[[noreturn]] void series_mismatch(const std::string& what) {
  throw Error(ErrorKind::RankMismatch, "rseries", "series_arith", what);
}

}  // namespace

RadialSeries::RadialSeries(DomainPtr domain, int up, int down, int floor)
    : domain_(std::move(domain)), up_(up), down_(down), floor_(std::max(floor, kExactFloor)) {}

RadialSeries RadialSeries::single(int exponent, TensorField coeff, int floor) {
  RadialSeries s(coeff.domain_ptr(), coeff.up(), coeff.down(), floor);
  s.set_term(exponent, std::move(coeff));
  return s;
}

std::optional<int> RadialSeries::max_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

void RadialSeries::check_shape(const TensorField& t) const {
  if (t.up() != up_ || t.down() != down_ || !t.domain().same_as(*domain_)) {
    series_mismatch("coefficient rank (" + std::to_string(t.up()) + "," + std::to_string(t.down()) +
                    ") does not match series rank (" + std::to_string(up_) + "," +
                    std::to_string(down_) + ")");
  }
}

TensorField RadialSeries::coefficient(int exponent) const {
  if (exponent < floor_) {
    throw Error(ErrorKind::FloorUnderflow, "rseries", "coefficient",
                "exponent " + std::to_string(exponent) + " below floor " + std::to_string(floor_));
  }
  auto it = terms_.find(exponent);
  if (it == terms_.end()) return TensorField(domain_, up_, down_);
  return it->second;
}

void RadialSeries::add_term(int exponent, const TensorField& coeff) {
  check_shape(coeff);
  if (exponent < floor_) return;
  auto it = terms_.find(exponent);
  if (it == terms_.end()) {
    terms_.emplace(exponent, coeff);
  } else {
    it->second += coeff;
  }
}

void RadialSeries::set_term(int exponent, TensorField coeff) {
  check_shape(coeff);
  if (exponent < floor_) {
    throw Error(ErrorKind::FloorUnderflow, "rseries", "set_term",
                "exponent " + std::to_string(exponent) + " below floor " + std::to_string(floor_));
  }
  terms_[exponent] = std::move(coeff);
}

void RadialSeries::raise_floor(int floor) {
  if (floor <= floor_) return;
  floor_ = floor;
  for (auto it = terms_.begin(); it != terms_.end();) {
    it = it->first < floor_ ? terms_.erase(it) : std::next(it);
  }
}

RadialSeries& RadialSeries::operator+=(const RadialSeries& rhs) {
  if (rhs.up_ != up_ || rhs.down_ != down_) series_mismatch("sum of series with different ranks");
  raise_floor(rhs.floor_);
  for (const auto& [e, t] : rhs.terms_) add_term(e, t);
  return *this;
}

RadialSeries& RadialSeries::operator-=(const RadialSeries& rhs) {
  if (rhs.up_ != up_ || rhs.down_ != down_) series_mismatch("difference of series with different ranks");
  raise_floor(rhs.floor_);
  for (const auto& [e, t] : rhs.terms_) add_term(e, -1.0 * t);
  return *this;
}

RadialSeries& RadialSeries::operator*=(double s) {
  for (auto& [e, t] : terms_) t *= s;
  return *this;
}

TensorField RadialSeries::eval(double r) const {
  if (!(r > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "rseries", "series_eval", "r = " + std::to_string(r));
  }
  TensorField out(domain_, up_, down_);
  // ascending exponents: small terms first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    out.axpy(std::pow(r, it->first), it->second);
  }
  return out;
}

RadialSeries operator+(RadialSeries a, const RadialSeries& b) { return a += b; }
RadialSeries operator-(RadialSeries a, const RadialSeries& b) { return a -= b; }
RadialSeries operator*(double s, RadialSeries a) { return a *= s; }
RadialSeries operator-(RadialSeries a) { return a *= -1.0; }

namespace {

int product_floor(const RadialSeries& a, const RadialSeries& b, std::optional<int> cutoff) {
  const int ma = a.max_exponent().value_or(a.floor());
  const int mb = b.max_exponent().value_or(b.floor());
  int floor = std::max(shift_floor(a.floor(), mb), shift_floor(b.floor(), ma));
  if (a.empty() && a.exact()) floor = kExactFloor;
  if (b.empty() && b.exact()) floor = kExactFloor;
  if (cutoff) floor = std::max(floor, *cutoff);
  return floor;
}

template <typename Combine>
RadialSeries product(const RadialSeries& a, const RadialSeries& b, int up, int down,
                     std::optional<int> cutoff, Combine combine) {
  if (!a.domain_ptr() || !b.domain_ptr() || !a.domain_ptr()->same_as(*b.domain_ptr())) {
    series_mismatch("product of series on different domains");
  }
  RadialSeries out(a.domain_ptr(), up, down, product_floor(a, b, cutoff));
  for (const auto& [ea, ta] : a.terms()) {
    for (const auto& [eb, tb] : b.terms()) {
      const int e = ea + eb;
      if (e < out.floor()) continue;
      out.add_term(e, combine(ta, tb));
    }
  }
  return out;
}

std::pair<int, int> spec_output_rank(std::string_view spec, const TensorField& a, const TensorField& b) {
  const TensorField probe = einsum(spec, a, b);
  return {probe.up(), probe.down()};
}

}  // namespace

RadialSeries mul(std::string_view spec, const RadialSeries& a, const RadialSeries& b,
                 std::optional<int> cutoff) {
  if (!a.domain_ptr() || !b.domain_ptr()) series_mismatch("product with an uninitialized series");
  // Shape of the result from a contraction of zero fields on one point.
  const DomainPtr tiny = Domain::constant_frame(a.domain_ptr()->dim());
  const auto [up, down] = spec_output_rank(spec, TensorField(tiny, a.up(), a.down()),
                                           TensorField(tiny, b.up(), b.down()));
  return product(a, b, up, down, cutoff,
                 [&](const TensorField& x, const TensorField& y) { return einsum(spec, x, y); });
}

RadialSeries mul_scalar(const RadialSeries& s, const RadialSeries& t, std::optional<int> cutoff) {
  if (s.rank() != 0) series_mismatch("mul_scalar expects a scalar series first");
  return product(s, t, t.up(), t.down(), cutoff,
                 [](const TensorField& x, const TensorField& y) { return multiply(x, y); });
}

RadialSeries mul_fixed(std::string_view spec, const TensorField& a, const RadialSeries& b) {
  const DomainPtr tiny = Domain::constant_frame(a.dim());
  const auto [up, down] = spec_output_rank(spec, TensorField(tiny, a.up(), a.down()),
                                           TensorField(tiny, b.up(), b.down()));
  RadialSeries out(b.domain_ptr(), up, down, b.floor());
  for (const auto& [e, t] : b.terms()) out.add_term(e, einsum(spec, a, t));
  return out;
}

RadialSeries einsum(std::string_view spec, const RadialSeries& a) {
  const DomainPtr tiny = Domain::constant_frame(a.domain_ptr()->dim());
  const TensorField shape = einsum(spec, TensorField(tiny, a.up(), a.down()));
  RadialSeries out(a.domain_ptr(), shape.up(), shape.down(), a.floor());
  for (const auto& [e, t] : a.terms()) out.add_term(e, einsum(spec, t));
  return out;
}

RadialSeries r_derivative(const RadialSeries& s) {
  RadialSeries out(s.domain_ptr(), s.up(), s.down(), shift_floor(s.floor(), -1));
  for (const auto& [e, t] : s.terms()) {
    if (e == 0) continue;
    out.add_term(e - 1, static_cast<double>(e) * t);
  }
  return out;
}

RadialSeries spatial_partial(const RadialSeries& s, DiffMethod method) {
  RadialSeries out(s.domain_ptr(), s.up(), s.down() + 1, s.floor());
  for (const auto& [e, t] : s.terms()) out.add_term(e, partial(t, method));
  return out;
}

RadialSeries symmetrize(const RadialSeries& s) {
  RadialSeries out(s.domain_ptr(), s.up(), s.down(), s.floor());
  for (const auto& [e, t] : s.terms()) out.set_term(e, symmetrize(t));
  return out;
}

RadialSeries metric_inverse(const RadialSeries& H, std::optional<int> cutoff) {
  if (H.up() != 0 || H.down() != 2) {
    series_mismatch("metric_inverse expects a (0,2) series");
  }
  if (!H.has(2) || *H.max_exponent() != 2) {
    throw Error(ErrorKind::InvalidArgument, "rseries", "series_metric_inverse",
                "leading term must sit at exponent 2");
  }
  if (H.exact() && !cutoff) {
    throw Error(ErrorKind::InvalidArgument, "rseries", "series_metric_inverse",
                "an exact series needs an explicit cutoff");
  }
  const DomainPtr& dom = H.domain_ptr();
  const TensorField hinv = inverse_metric(H.terms().at(2));
  // Only terms of M = sum (-A)^k at or above its floor are formed.
  int mfloor = H.exact() ? *cutoff + 2 : H.floor() - 2;
  if (cutoff) mfloor = std::max(mfloor, *cutoff + 2);
  const std::optional<int> mcut = mfloor;

  // -A = -r^{-2} h^{-1} (H - r^2 h), a (1,1) series with exponents <= -2.
  RadialSeries neg_a(dom, 1, 1, mfloor);
  for (const auto& [e, t] : H.terms()) {
    if (e == 2) continue;
    neg_a.add_term(e - 2, -1.0 * einsum("ab,bc->ac", hinv, t));
  }

  RadialSeries m = RadialSeries::single(0, TensorField::identity(dom), mfloor);
  RadialSeries power = m;
  for (int k = 1; k < 4096; ++k) {
    power = mul("ab,bc->ac", power, neg_a, mcut);
    if (power.empty()) break;
    m += power;
  }
  RadialSeries lead = RadialSeries::single(-2, hinv);
  RadialSeries inv = mul("ab,bc->ac", m, lead, cutoff);
  return symmetrize(inv);
}

namespace {

RadialSeries ricci_from_christoffel(const RadialSeries& gamma, std::optional<int> cutoff,
                                    DiffMethod method) {
  const RadialSeries dgamma = spatial_partial(gamma, method);  // [l, d, j, k]
  RadialSeries ric = einsum("iijk->jk", dgamma);
  ric -= einsum("ijik->jk", dgamma);
  const RadialSeries trace_gamma = einsum("iim->m", gamma);
  ric += mul("mjk,m->jk", gamma, trace_gamma, cutoff);
  ric -= mul("mik,ijm->jk", gamma, gamma, cutoff);
  return symmetrize(ric);
}

}  // namespace

SeriesGeometry series_geometry(const LinkManifold& link, const RadialSeries& H,
                               std::optional<int> cutoff, DiffMethod method) {
  SeriesGeometry geo;
  geo.link = &link;
  geo.method = method;
  geo.metric = H;
  geo.inverse = metric_inverse(H, cutoff);
  if (link.is_grid()) {
    const RadialSeries dh = spatial_partial(H, method);  // [m, i, j]
    RadialSeries first = einsum("ijm->mij", dh);
    first += einsum("jim->mij", dh);
    first -= dh;
    first *= 0.5;
    geo.christoffel = mul("lm,mij->lij", geo.inverse, first, cutoff);
    geo.ricci = ricci_from_christoffel(geo.christoffel, cutoff, method);
  } else {
    // A parallel metric shares the Levi-Civita connection of h, hence its
    // (1,3) curvature and Ricci tensor.
    const TensorField ric = symmetrize(einsum("iijk->jk", *link.frame_riemann));
    geo.ricci = RadialSeries::single(0, ric, shift_floor(H.floor(), -2));
    geo.christoffel = RadialSeries(H.domain_ptr(), 1, 2, H.floor());
  }
  geo.scalar = mul("jk,jk->", geo.inverse, geo.ricci, cutoff);
  return geo;
}

SeriesCurvature series_curvature(const LinkManifold& link, const RadialSeries& H,
                                 std::optional<int> cutoff, DiffMethod method) {
  SeriesGeometry geo = series_geometry(link, H, cutoff, method);
  return {std::move(geo.ricci), std::move(geo.scalar)};
}

RadialSeries series_covariant_derivative(const RadialSeries& t, const SeriesGeometry& geo,
                                         std::optional<int> cutoff) {
  if (t.up() != 0) series_mismatch("series covariant derivative expects a covariant series");
  if (t.rank() + 1 > kMaxCovariantRank) {
    throw Error(ErrorKind::RankOverflow, "rseries", "series_covariant_derivative",
                "result rank " + std::to_string(t.rank() + 1));
  }
  RadialSeries out = spatial_partial(t, geo.method);
  if (!geo.link->is_grid()) return out;
  const int k = t.rank();
  std::string downs;
  for (int i = 0; i < k; ++i) downs.push_back(static_cast<char>('p' + i));
  const std::string out_spec = "m" + downs;
  for (int b = 0; b < k; ++b) {
    std::string tin = downs;
    const char d = tin[static_cast<std::size_t>(b)];
    tin[static_cast<std::size_t>(b)] = 's';
    out -= mul(std::string("sm") + d + "," + tin + "->" + out_spec, geo.christoffel, t, cutoff);
  }
  return out;
}

RadialSeries series_hessian(const RadialSeries& phi, const SeriesGeometry& geo,
                            std::optional<int> cutoff) {
  if (phi.rank() != 0) series_mismatch("series Hessian expects a scalar series");
  return symmetrize(series_covariant_derivative(spatial_partial(phi, geo.method), geo, cutoff));
}

double series_max_abs(const RadialSeries& s) {
  double m = 0.0;
  for (const auto& [e, t] : s.terms()) m = std::max(m, t.max_abs());
  return m;
}

}  // namespace acsol
