#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acsol/geometry.hpp"
#include "acsol/link.hpp"
#include "acsol/series.hpp"

namespace acsol {

enum class SolitonMode { Expander, Shrinker };

// +1 for expanders (Ric + Hess f = -g/2), -1 for shrinkers.
inline int mode_sign(SolitonMode m) { return m == SolitonMode::Expander ? 1 : -1; }
const char* to_string(SolitonMode m);
SolitonMode parse_mode(const std::string& s);

inline constexpr int kDefaultMaxOrder = 8;

// H = r^2 h + h_0 + r^-2 h_2 + ... + r^-2N h_2N,
// f = -sign r^2/4 + f_0 + r^-2 f_2 + ... + r^-2N-2 f_2N+2.
struct ExpansionCoefficients {
  LinkManifold link;
  SolitonMode mode = SolitonMode::Expander;
  int order = 0;
  double f0 = 0.0;
  std::vector<TensorField> h;  // h[i] = h_{2i}, i = 0..N
  std::vector<TensorField> f;  // f[i] = f_{2i}, i = 0..N+1 (f[0] constant)
  // Measured probe responses per order (filled by expand, not serialized).
  std::vector<double> h_divisors;
  std::vector<double> f_divisors;

  int dim() const { return link.dim(); }
};

struct ExpandOptions {
  int order = 1;
  SolitonMode mode = SolitonMode::Expander;
  std::optional<double> f0;
  int max_order = kDefaultMaxOrder;
  DiffMethod method = DiffMethod::Spectral;
};

ExpansionCoefficients expand(const LinkManifold& link, const ExpandOptions& options = {});

struct ClosedFormTerms {
  TensorField h0, h2, f2, f4;
};

// The four printed low-order formulas, evaluated directly from h.
ClosedFormTerms closed_form_first_terms(const LinkManifold& link,
                                        DiffMethod method = DiffMethod::Spectral);

// Series of H and f assembled from the coefficients.  Formal series carry the
// truncation floors -2N and -2N-2; exact series treat the truncation as the
// whole function.
RadialSeries metric_series(const ExpansionCoefficients& c, bool exact = false);
RadialSeries potential_series(const ExpansionCoefficients& c, bool exact = false);

struct ResidualOptions {
  // Exact mode evaluates the truncated H and f as they stand, keeping terms
  // down to `cutoff`; formal mode reports only what the truncation pins down.
  bool exact = false;
  std::optional<int> cutoff;
  DiffMethod method = DiffMethod::Spectral;
};

// A residual series plus, per exponent, the largest constituent-term
// magnitude (the yardstick for relative tolerances).
struct Residual {
  RadialSeries value;
  std::map<int, double> scale;

  // Largest constituent-term magnitude over all exponents.
  double reference_scale() const;
  // sup-norm of the coefficient divided by the reference scale.
  double relative(int exponent) const;
  // Largest relative coefficient over all exponents at or above the floor.
  double max_relative() const;
  // Largest relative coefficient over odd exponents.
  double max_odd_relative() const;
};

Residual residual_evolution(const ExpansionCoefficients& c, const ResidualOptions& opt = {});
Residual residual_trace(const ExpansionCoefficients& c, const ResidualOptions& opt = {});
Residual residual_constraint(const ExpansionCoefficients& c, const ResidualOptions& opt = {});

// The same left-hand sides on explicit series (sign = +1 expander, -1 shrinker).
Residual evolution_lhs(const LinkManifold& link, const RadialSeries& H, const RadialSeries& f,
                       int sign, std::optional<int> cutoff = std::nullopt,
                       DiffMethod method = DiffMethod::Spectral);
Residual trace_lhs(const LinkManifold& link, const RadialSeries& H, const RadialSeries& f, int sign,
                   std::optional<int> cutoff = std::nullopt, DiffMethod method = DiffMethod::Spectral);
Residual constraint_lhs(const LinkManifold& link, const RadialSeries& H, const RadialSeries& f,
                        std::optional<int> cutoff = std::nullopt,
                        DiffMethod method = DiffMethod::Spectral);

// Default exact-mode cutoff for an order-N truncation.
int default_exact_cutoff(int order);

}  // namespace acsol
