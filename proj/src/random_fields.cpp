#include "acsol/random_fields.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "acsol/error.hpp"

namespace acsol {

namespace {

// One representative of each +-k pair.
std::vector<std::vector<int>> half_modes(int dim) {
  std::vector<std::vector<int>> out;
  int total = 1;
  for (int a = 0; a < dim; ++a) total *= 3;
  for (int code = 0; code < total; ++code) {
    std::vector<int> k(static_cast<std::size_t>(dim));
    int c = code;
    for (int a = 0; a < dim; ++a) {
      k[static_cast<std::size_t>(a)] = c % 3 - 1;
      c /= 3;
    }
    int first = 0;
    for (int v : k) {
      if (v != 0) {
        first = v;
        break;
      }
    }
    if (first > 0) out.push_back(k);
  }
  return out;
}

struct Mode {
  std::vector<int> k;
  double a, b;
};

// Coefficients rescaled so that the sup-norm of the sum is at most `bound`.
std::vector<Mode> draw_modes(int dim, std::mt19937_64& rng, double bound) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Mode> modes;
  double total = 0.0;
  for (auto& k : half_modes(dim)) {
    const double a = u(rng);
    const double b = u(rng);
    total += std::abs(a) + std::abs(b);
    modes.push_back({k, a, b});
  }
  if (total > 0.0) {
    for (Mode& m : modes) {
      m.a *= bound / total;
      m.b *= bound / total;
    }
  }
  return modes;
}

double evaluate(const std::vector<Mode>& modes, std::span<const double> x) {
  double v = 0.0;
  for (const Mode& m : modes) {
    double phase = 0.0;
    for (std::size_t a = 0; a < m.k.size(); ++a) phase += m.k[a] * x[a];
    v += m.a * std::cos(phase) + m.b * std::sin(phase);
  }
  return v;
}

void require_grid(const DomainPtr& grid, const char* op) {
  if (!grid || !grid->is_grid()) {
    throw Error(ErrorKind::InvalidArgument, "link_geometry", op, "random fields need a grid domain");
  }
}

}  // namespace

TensorField random_analytic_metric(const DomainPtr& grid, std::uint64_t seed, double amplitude) {
  require_grid(grid, "random_analytic_metric");
  const int n = grid->dim();
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Mode>> comps;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) comps.push_back(draw_modes(n, rng, amplitude));
  }
  for (double scale = 1.0; scale > 1e-6; scale *= 0.5) {
    TensorField g = TensorField::sample(grid, 0, 2, [&](std::span<const int> idx, std::span<const double> x) {
      int i = std::min(idx[0], idx[1]);
      int j = std::max(idx[0], idx[1]);
      const std::size_t slot = static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
      return (i == j ? 1.0 : 0.0) + scale * evaluate(comps[slot], x);
    });
    if (min_eigenvalue(g) > 0.5) return g;
  }
  throw Error(ErrorKind::NonPositiveDefinite, "link_geometry", "random_analytic_metric",
              "could not reach eigenvalue bound for seed " + std::to_string(seed));
}

TensorField random_analytic_scalar(const DomainPtr& grid, std::uint64_t seed, double amplitude) {
  require_grid(grid, "random_analytic_scalar");
  std::mt19937_64 rng(seed);
  const std::vector<Mode> modes = draw_modes(grid->dim(), rng, amplitude);
  return TensorField::sample(grid, 0, 0, [&](std::span<const int>, std::span<const double> x) {
    return evaluate(modes, x);
  });
}

LinkManifold random_grid_link(int dim, int size, std::uint64_t seed, double amplitude) {
  const DomainPtr grid = Domain::periodic_grid(std::vector<int>(static_cast<std::size_t>(dim), size));
  return link_from_metric(random_analytic_metric(grid, seed, amplitude),
                          "random(" + std::to_string(dim) + "," + std::to_string(size) + "," +
                              std::to_string(seed) + ")");
}

}  // namespace acsol
