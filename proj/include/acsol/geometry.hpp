#pragma once

#include "acsol/link.hpp"
#include "acsol/spectral.hpp"
#include "acsol/tensor.hpp"

namespace acsol {

// Sign conventions used throughout:
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
//   R(d_i, d_j) d_k = R^l_{ijk} d_l,   R_{ijkl} = g_{lm} R^m_{ijk},
//   Ric_{jk} = R^i_{ijk} (positive on spheres),   Delta = tr Hess.

// Levi-Civita connection of a metric on a link's domain.  On ConstantFrame
// links the connection coefficients are reported as zero: every field there
// is invariant (parallel), so covariant derivatives vanish and the curvature
// operator is the closed-form frame Riemann tensor of the link.  A metric
// supplied for a ConstantFrame link must itself be parallel (e.g. built from
// the link metric and its curvature).
class Connection {
 public:
  explicit Connection(const LinkManifold& link, DiffMethod method = DiffMethod::Spectral);
  Connection(const LinkManifold& link, TensorField metric, DiffMethod method = DiffMethod::Spectral);

  const DomainPtr& domain() const noexcept { return domain_; }
  int dim() const { return domain_->dim(); }
  const TensorField& metric() const noexcept { return metric_; }
  const TensorField& inverse() const noexcept { return inverse_; }
  // Gamma^l_{ij}, slots [l, i, j].
  const TensorField& christoffel() const noexcept { return christoffel_; }
  DiffMethod method() const noexcept { return method_; }
  bool is_grid() const { return domain_->is_grid(); }
  // Closed-form R^l_{ijk} (ConstantFrame only, empty otherwise).
  const TensorField& frame_riemann() const noexcept { return frame_riemann_; }

 private:
  void init();

  DomainPtr domain_;
  TensorField metric_;
  TensorField inverse_;
  TensorField christoffel_;
  TensorField frame_riemann_;
  DiffMethod method_;
};

// Christoffel symbols of the second kind from a metric and its inverse.
TensorField christoffel_symbols(const TensorField& metric, const TensorField& inverse,
                                DiffMethod method = DiffMethod::Spectral);

struct CurvaturePack {
  TensorField christoffel;  // (1,2) Gamma^l_{ij}
  TensorField riemann;      // (0,4) R_{ijkl}
  TensorField ricci;        // (0,2)
  TensorField scalar;       // (0,0)
};

CurvaturePack curvature(const Connection& conn);
CurvaturePack curvature(const LinkManifold& link, DiffMethod method = DiffMethod::Spectral);

inline constexpr int kMaxCovariantRank = 6;

// (nabla T) with the derivative index inserted as the first covariant slot.
TensorField covariant_derivative(const TensorField& t, const Connection& conn,
                                 int max_rank = kMaxCovariantRank);

struct HessianLaplacian {
  TensorField hessian;    // (0,2), symmetric
  TensorField laplacian;  // scalar
};

HessianLaplacian hessian_laplacian(const TensorField& phi, const Connection& conn);

// Rough Laplacian g^{ab} nabla_a nabla_b T of a (0,k) tensor.
TensorField rough_laplacian(const TensorField& t, const Connection& conn);

// (Delta_L T)_{jk} = Delta T_{jk} + 2 R_{ijkl} T^{il} - Ric_j^l T_{lk} - Ric_k^l T_{jl}.
// Annihilates the metric.  Raises NotSymmetric for non-symmetric input.
TensorField lichnerowicz(const TensorField& t, const Connection& conn, const CurvaturePack& curv);

// Multilinear helpers that need the metric.
TensorField raise_all(const TensorField& t, const TensorField& inverse);
// |T|^2: full contraction of a (0,k) tensor with k inverse metrics.
TensorField norm_sq(const TensorField& t, const TensorField& inverse);
// g^{ij} T_{ij}.
TensorField trace(const TensorField& t, const TensorField& inverse);

// Integral over the grid torus with the Riemannian volume form.
double integrate(const TensorField& scalar, const TensorField& metric);

}  // namespace acsol
