#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acsol/tensor.hpp"

namespace acsol {

// Declarative description of a link, as accepted by build_link.
struct LinkSpec {
  // Catalog entry such as "sphere(2,1.0)", "torus(3)", "sphere_product(2,1;2,2)".
  // Empty for grid links.
  std::string catalog;
  // Grid links: sizes per axis and upper-triangle metric expressions in x1..xn.
  std::vector<int> grid;
  std::vector<std::vector<std::string>> metric;
};

// The compact link (Y, h).  ConstantFrame links are homogeneous: components
// are taken in an h-orthonormal invariant frame, every field is parallel, and
// the curvature is supplied in closed form.  PeriodicGrid links sample
// [0, 2pi)^n.
struct LinkManifold {
  DomainPtr domain;
  TensorField metric;  // (0,2), symmetric positive definite
  // R^l_{ijk} with R(d_i, d_j) d_k = R^l_{ijk} d_l; ConstantFrame only.
  std::optional<TensorField> frame_riemann;
  std::string catalog_id;
  LinkSpec spec;

  int dim() const { return domain->dim(); }
  Backend backend() const { return domain->backend(); }
  bool is_grid() const { return domain->is_grid(); }
};

inline constexpr double kMinMetricEigenvalue = 1e-10;

LinkManifold build_link(const LinkSpec& spec);
// Catalog string shorthand.
LinkManifold build_link(const std::string& catalog);
// Grid link from an already-sampled metric field (random test metrics,
// bianchi checks on arbitrary metrics).
LinkManifold link_from_metric(TensorField metric, std::string label = "sampled");

// Names and parameter signatures of the catalog entries.
std::vector<std::string> catalog_entries();

}  // namespace acsol
