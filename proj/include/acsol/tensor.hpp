#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace acsol {

enum class Backend { ConstantFrame, PeriodicGrid };

// Where tensor components live.  A ConstantFrame domain has a single sample
// (every field is homogeneous); a PeriodicGrid domain samples [0, 2pi)^n on a
// uniform grid, point index axis-major (axis 0 slowest).
class Domain {
 public:
  static std::shared_ptr<const Domain> constant_frame(int dim);
  static std::shared_ptr<const Domain> periodic_grid(std::vector<int> sizes);

  int dim() const noexcept { return dim_; }
  Backend backend() const noexcept { return backend_; }
  const std::vector<int>& sizes() const noexcept { return sizes_; }
  std::size_t points() const noexcept { return points_; }
  bool is_grid() const noexcept { return backend_ == Backend::PeriodicGrid; }

  // Coordinates (x1..xn) of grid point p.  Empty for ConstantFrame.
  std::vector<double> coordinates(std::size_t p) const;
  double spacing(int axis) const;

  bool same_as(const Domain& other) const noexcept;

 private:
  Domain(int dim, Backend backend, std::vector<int> sizes);

  int dim_;
  Backend backend_;
  std::vector<int> sizes_;
  std::size_t points_;
};

using DomainPtr = std::shared_ptr<const Domain>;

inline constexpr int kMaxStoredRank = 8;

// Rank-(up, down) tensor field.  Slots are ordered with all contravariant
// indices first.  Storage is component-major: data[c * points + p], with the
// component multi-index flattened row-major (slot 0 most significant).
class TensorField {
 public:
  TensorField() = default;
  TensorField(DomainPtr domain, int up, int down);

  static TensorField scalar(DomainPtr domain, double value);
  // Fills component idx at every point from fn(idx, x).
  static TensorField sample(
      DomainPtr domain, int up, int down,
      const std::function<double(std::span<const int>, std::span<const double>)>& fn);
  // Kronecker delta as (1,1) tensor.
  static TensorField identity(DomainPtr domain);

  bool empty() const noexcept { return !domain_; }
  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const noexcept { return domain_; }
  int dim() const { return domain_->dim(); }
  int up() const noexcept { return up_; }
  int down() const noexcept { return down_; }
  int rank() const noexcept { return up_ + down_; }
  std::size_t points() const { return domain_->points(); }
  std::size_t components() const noexcept { return components_; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  std::span<double> component(std::size_t c);
  std::span<const double> component(std::size_t c) const;

  std::size_t flat_index(std::span<const int> idx) const;
  double& at(std::size_t c, std::size_t p) { return data_[c * points() + p]; }
  double at(std::size_t c, std::size_t p) const { return data_[c * points() + p]; }
  double& operator()(std::initializer_list<int> idx, std::size_t p = 0);
  double operator()(std::initializer_list<int> idx, std::size_t p = 0) const;

  bool same_shape(const TensorField& other) const;

  TensorField& operator+=(const TensorField& rhs);
  TensorField& operator-=(const TensorField& rhs);
  TensorField& operator*=(double s);
  TensorField& axpy(double a, const TensorField& x);

  // Sup-norm over all components and points.
  double max_abs() const;
  bool is_zero() const;

 private:
  DomainPtr domain_;
  int up_ = 0;
  int down_ = 0;
  std::size_t components_ = 0;
  std::vector<double> data_;
};

TensorField operator+(TensorField a, const TensorField& b);
TensorField operator-(TensorField a, const TensorField& b);
TensorField operator*(double s, TensorField a);
TensorField operator-(TensorField a);

// Index-notation contraction, e.g. einsum("ab,bc->ac", A, B).  A repeated
// letter is summed and must pair one contravariant with one covariant slot.
// Output letters must list contravariant slots first.  An empty operand
// spec denotes a scalar field ("",ij->ij scales pointwise).
TensorField einsum(std::string_view spec, const TensorField& a, const TensorField& b);
TensorField einsum(std::string_view spec, const TensorField& a);

// out slot s takes input slot perm[s]; variance ordering must be preserved.
TensorField permute(const TensorField& t, std::span<const int> perm);
TensorField permute(const TensorField& t, std::initializer_list<int> perm);

// Pointwise scalar-field multiplication and division.
TensorField multiply(const TensorField& scalar, const TensorField& t);
TensorField map_pointwise(const TensorField& scalar, const std::function<double(double)>& fn);

// Rank-2 helpers (both slots of equal variance).
TensorField symmetrize(const TensorField& t);
TensorField antisymmetrize(const TensorField& t);
double symmetry_defect(const TensorField& t);
bool is_symmetric(const TensorField& t, double rel_tol = 1e-13);

// Inverse of a (0,2) metric as a (2,0) field; raises NonPositiveDefinite
// below the eigenvalue threshold.
TensorField inverse_metric(const TensorField& g, double min_eig = 1e-10);
double min_eigenvalue(const TensorField& g);

// Flip the variance of a (0,2) or (2,0) pointwise matrix inverse without
// positivity checks (used for (1,1) endomorphisms too).
TensorField matrix_inverse(const TensorField& m);

}  // namespace acsol
