#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acsol/soliton.hpp"

namespace acsol {

// LHS - RHS of the weighted contracted Bianchi identity and of its
// soliton variant (with the g/2 and -f terms), as covector fields.
struct BianchiResidual {
  TensorField weighted;
  TensorField soliton;
};

BianchiResidual bianchi_weighted_residual(const LinkManifold& manifold, const TensorField& f,
                                          DiffMethod method = DiffMethod::Spectral);

// S = R + 2 Lap f - |grad f|^2 - sign * f of g = dr^2 + H(r), as a series.
Residual soliton_scalar_series(const ExpansionCoefficients& c, const ResidualOptions& opt = {});
// The constant value S takes on an exact expansion: -sign (n + 1 + f0).
double scalar_constant(const ExpansionCoefficients& c);
// S with the constant removed from its r^0 coefficient.
Residual normalized_scalar_series(const ExpansionCoefficients& c, const ResidualOptions& opt = {});

// X_{ir} = R_{ir} + nabla_i nabla_r f, which is half the constraint left-hand side.
Residual x_series(const ExpansionCoefficients& c, const ResidualOptions& opt = {});

// Relative threshold below which a coefficient counts as numerically zero.
inline constexpr double kZeroThreshold = 1e-9;

// Drops coefficients whose norm is at most kZeroThreshold times the
// residual's reference scale.
RadialSeries significant_terms(const Residual& r);

struct LeadingTerm {
  int exponent = 0;
  TensorField coefficient;
};

// Largest exponent with a significant coefficient above 1e-9 times the
// largest coefficient.  Raises NoLeadingTerm when nothing is significant.
LeadingTerm leading_term(const Residual& r);

struct DecaySample {
  double r;
  double constraint_norm;
  double s_norm;
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  int leading_exponent = 0;
  std::vector<DecaySample> samples;
};

inline constexpr double kMaxDecayRadius = 1e6;

// Least-squares slope of log |constraint(r)|_inf against log r over
// logarithmically spaced radii, using the exact residual of the truncation.
DecayFit constraint_decay_slope(const ExpansionCoefficients& c, double r_min, double r_max,
                                int samples = 20, DiffMethod method = DiffMethod::Spectral);

struct DiagnosticsReport {
  RadialSeries x_series;
  RadialSeries s_series;
  std::optional<LeadingTerm> leading_x;  // r^{-N} phi
  std::optional<LeadingTerm> leading_s;  // r^{-M} psi
  std::optional<LeadingTerm> leading_radial;      // LHS of the radial transport identity
  std::optional<LeadingTerm> leading_divergence;  // LHS of the divergence identity
  // Deviations of the two leading terms from sign/2 phi and h^{ij} nabla_j phi_i,
  // relative to |phi|; absent when X has no leading term.
  std::optional<double> radial_error;
  std::optional<double> divergence_error;
  std::optional<int> n_order;
  std::optional<int> m_order;
  bool m_at_most_n_minus_1 = false;
  bool m_at_least_n_plus_1 = false;
  std::string x_status;
  std::string s_status;
};

DiagnosticsReport order_diagnostics(const Residual& x, const Residual& s,
                                    const ExpansionCoefficients& c,
                                    DiffMethod method = DiffMethod::Spectral);

// Adds r^{-order} phi to an X residual (phi enters the scale too).
Residual inject_x(const Residual& x, int order, const TensorField& phi);

}  // namespace acsol
