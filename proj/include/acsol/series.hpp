#pragma once

#include <climits>
#include <map>
#include <optional>
#include <string_view>

#include "acsol/geometry.hpp"
#include "acsol/tensor.hpp"

namespace acsol {

// Exponent floor of an exact series (no truncation).
inline constexpr int kExactFloor = INT_MIN / 4;

// Finite Laurent series  sum_e r^e T_e  with tensor-field coefficients of a
// common rank, plus the truncation floor: coefficients below the floor are
// unknown and may not be queried.
class RadialSeries {
 public:
  RadialSeries() = default;
  RadialSeries(DomainPtr domain, int up, int down, int floor = kExactFloor);

  static RadialSeries single(int exponent, TensorField coeff, int floor = kExactFloor);

  const DomainPtr& domain_ptr() const noexcept { return domain_; }
  int up() const noexcept { return up_; }
  int down() const noexcept { return down_; }
  int rank() const noexcept { return up_ + down_; }
  int floor() const noexcept { return floor_; }
  bool exact() const noexcept { return floor_ <= kExactFloor; }
  bool empty() const noexcept { return terms_.empty(); }

  // Exponents in descending order.
  const std::map<int, TensorField, std::greater<>>& terms() const noexcept { return terms_; }
  std::optional<int> max_exponent() const;

  // Stored coefficient or zero; FloorUnderflow below the floor.
  TensorField coefficient(int exponent) const;
  bool has(int exponent) const { return terms_.count(exponent) != 0; }

  // Adds coeff into the exponent slot (accumulates).
  void add_term(int exponent, const TensorField& coeff);
  void set_term(int exponent, TensorField coeff);
  // Raises the floor and drops terms below it.
  void raise_floor(int floor);

  RadialSeries& operator+=(const RadialSeries& rhs);
  RadialSeries& operator-=(const RadialSeries& rhs);
  RadialSeries& operator*=(double s);

  // Sum over stored terms of r^e T_e.
  TensorField eval(double r) const;

 private:
  void check_shape(const TensorField& t) const;

  DomainPtr domain_;
  int up_ = 0;
  int down_ = 0;
  int floor_ = kExactFloor;
  std::map<int, TensorField, std::greater<>> terms_;
};

RadialSeries operator+(RadialSeries a, const RadialSeries& b);
RadialSeries operator-(RadialSeries a, const RadialSeries& b);
RadialSeries operator*(double s, RadialSeries a);
RadialSeries operator-(RadialSeries a);

// Product contracted per an einsum spec.  The result floor is
// max(floor_a + max_b, floor_b + max_a), raised to `cutoff` when given; only
// terms at or above the floor are formed.
RadialSeries mul(std::string_view spec, const RadialSeries& a, const RadialSeries& b,
                 std::optional<int> cutoff = std::nullopt);
// Pointwise product with a scalar series.
RadialSeries mul_scalar(const RadialSeries& s, const RadialSeries& t,
                        std::optional<int> cutoff = std::nullopt);
// Contraction of one series by a fixed tensor field (exponent-0 factor).
RadialSeries mul_fixed(std::string_view spec, const TensorField& a, const RadialSeries& b);
RadialSeries einsum(std::string_view spec, const RadialSeries& a);

RadialSeries r_derivative(const RadialSeries& s);
// Coordinate partial of every coefficient (derivative slot first covariant).
RadialSeries spatial_partial(const RadialSeries& s, DiffMethod method = DiffMethod::Spectral);
RadialSeries symmetrize(const RadialSeries& s);

// Inverse of a metric series whose leading term r^2 h is positive definite.
// For a truncated H with floor F the result floor is F - 4; an exact H needs
// an explicit cutoff.
RadialSeries metric_inverse(const RadialSeries& H, std::optional<int> cutoff = std::nullopt);

// Levi-Civita data of a metric series H(r) on the link.
struct SeriesGeometry {
  RadialSeries metric;
  RadialSeries inverse;      // (2,0)
  RadialSeries christoffel;  // (1,2), grid links only (empty on ConstantFrame)
  RadialSeries ricci;        // (0,2)
  RadialSeries scalar;       // H^{jk} Ric_jk
  const LinkManifold* link = nullptr;
  DiffMethod method = DiffMethod::Spectral;
};

SeriesGeometry series_geometry(const LinkManifold& link, const RadialSeries& H,
                               std::optional<int> cutoff = std::nullopt,
                               DiffMethod method = DiffMethod::Spectral);

// Ricci and scalar curvature of H(r).
struct SeriesCurvature {
  RadialSeries ricci;
  RadialSeries scalar;
};
SeriesCurvature series_curvature(const LinkManifold& link, const RadialSeries& H,
                                 std::optional<int> cutoff = std::nullopt,
                                 DiffMethod method = DiffMethod::Spectral);

// Covariant derivative of a covariant series w.r.t. H(r) (slot first).
RadialSeries series_covariant_derivative(const RadialSeries& t, const SeriesGeometry& geo,
                                         std::optional<int> cutoff = std::nullopt);
// Hessian of a scalar series w.r.t. H(r).
RadialSeries series_hessian(const RadialSeries& phi, const SeriesGeometry& geo,
                            std::optional<int> cutoff = std::nullopt);

// Largest sup-norm coefficient; 0 for an empty series.
double series_max_abs(const RadialSeries& s);

}  // namespace acsol
