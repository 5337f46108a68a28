#include "acsol/link.hpp"

#include <charconv>
#include <regex>

#include "acsol/error.hpp"
#include "acsol/expression.hpp"

namespace acsol {

namespace {

[[noreturn]] void bad_spec(const std::string& detail) {
  throw Error(ErrorKind::InvalidArgument, "link_geometry", "build_link", detail);
}

void check_positive(const TensorField& g) {
  const double lo = min_eigenvalue(g);
  if (!(lo > kMinMetricEigenvalue)) {
    throw Error(ErrorKind::NonPositiveDefinite, "link_geometry", "build_link",
                "metric minimum eigenvalue " + std::to_string(lo));
  }
}

// Constant-curvature block: R^l_{ijk} += K (delta_jk delta^l_i - delta_ik delta^l_j)
// for i, j, k, l in [lo, hi).
void add_sphere_block(TensorField& riem, int lo, int hi, double curvature) {
  for (int i = lo; i < hi; ++i) {
    for (int j = lo; j < hi; ++j) {
      for (int k = lo; k < hi; ++k) {
        for (int l = lo; l < hi; ++l) {
          double v = 0.0;
          if (j == k && l == i) v += curvature;
          if (i == k && l == j) v -= curvature;
          riem({l, i, j, k}) += v;
        }
      }
    }
  }
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) bad_spec("bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) bad_spec("bad integer '" + s + "'");
  return v;
}

LinkManifold frame_link(int dim, std::string id) {
  LinkManifold link;
  link.domain = Domain::constant_frame(dim);
  link.metric = TensorField(link.domain, 0, 2);
  for (int i = 0; i < dim; ++i) link.metric({i, i}) = 1.0;
  link.frame_riemann = TensorField(link.domain, 1, 3);
  link.catalog_id = std::move(id);
  link.spec.catalog = link.catalog_id;
  return link;
}

LinkManifold build_catalog(const std::string& text) {
  static const std::string num = R"(\s*([-+0-9.eE]+)\s*)";
  static const std::regex sphere("\\s*sphere\\(" + num + "," + num + "\\)\\s*");
  static const std::regex torus("\\s*torus\\(" + num + "\\)\\s*");
  static const std::regex product("\\s*sphere_product\\(" + num + "," + num + ";" + num + "," + num +
                                  "\\)\\s*");
  std::smatch m;
  if (std::regex_match(text, m, sphere)) {
    const int n = parse_int(m[1]);
    const double a = parse_real(m[2]);
    if (n < 1) throw Error(ErrorKind::BadDimension, "link_geometry", "build_link", "sphere dimension " + m[1].str());
    if (!(a > 0.0)) bad_spec("sphere radius must be positive: " + m[2].str());
    LinkManifold link = frame_link(n, text);
    add_sphere_block(*link.frame_riemann, 0, n, 1.0 / (a * a));
    return link;
  }
  if (std::regex_match(text, m, torus)) {
    const int n = parse_int(m[1]);
    if (n < 1) throw Error(ErrorKind::BadDimension, "link_geometry", "build_link", "torus dimension " + m[1].str());
    return frame_link(n, text);
  }
  if (std::regex_match(text, m, product)) {
    const int p = parse_int(m[1]);
    const double a = parse_real(m[2]);
    const int q = parse_int(m[3]);
    const double b = parse_real(m[4]);
    if (p < 1 || q < 1) throw Error(ErrorKind::BadDimension, "link_geometry", "build_link", "factor dimension < 1");
    if (!(a > 0.0) || !(b > 0.0)) bad_spec("sphere radii must be positive");
    LinkManifold link = frame_link(p + q, text);
    add_sphere_block(*link.frame_riemann, 0, p, 1.0 / (a * a));
    add_sphere_block(*link.frame_riemann, p, p + q, 1.0 / (b * b));
    return link;
  }
  bad_spec("unknown catalog entry '" + text + "'");
}

}  // namespace

std::vector<std::string> catalog_entries() {
  return {"sphere(n,a)            round n-sphere of radius a",
          "torus(n)               flat n-torus",
          "sphere_product(p,a;q,b) product of round spheres S^p(a) x S^q(b)"};
}

LinkManifold build_link(const LinkSpec& spec) {
  if (!spec.catalog.empty()) return build_catalog(spec.catalog);

  const int n = static_cast<int>(spec.grid.size());
  if (n < 1 || n > 3) {
    throw Error(ErrorKind::BadDimension, "link_geometry", "build_link",
                "grid backend requires 1 <= n <= 3, got " + std::to_string(n));
  }
  if (static_cast<int>(spec.metric.size()) != n) bad_spec("metric must have " + std::to_string(n) + " rows");
  auto domain = Domain::periodic_grid(spec.grid);

  // Upper triangle is authoritative; the lower triangle mirrors it.
  std::vector<std::vector<std::optional<ExpressionAst>>> asts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Rows are either full or hold only the entries from the diagonal on.
    const auto& row = spec.metric[static_cast<std::size_t>(i)];
    const int len = static_cast<int>(row.size());
    if (len != n && len != n - i) bad_spec("metric row " + std::to_string(i) + " has wrong length");
    const int skip = len == n ? 0 : i;
    asts[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
    for (int j = i; j < n; ++j) {
      asts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          parse_expression(row[static_cast<std::size_t>(j - skip)], n);
    }
  }
  TensorField g = TensorField::sample(domain, 0, 2, [&](std::span<const int> idx, std::span<const double> x) {
    const auto i = static_cast<std::size_t>(std::min(idx[0], idx[1]));
    const auto j = static_cast<std::size_t>(std::max(idx[0], idx[1]));
    return eval_expression(*asts[i][j], x);
  });
  check_positive(g);

  LinkManifold link;
  link.domain = domain;
  link.metric = std::move(g);
  link.catalog_id = "grid";
  link.spec = spec;
  return link;
}

LinkManifold build_link(const std::string& catalog) {
  LinkSpec spec;
  spec.catalog = catalog;
  return build_link(spec);
}

LinkManifold link_from_metric(TensorField metric, std::string label) {
  if (metric.up() != 0 || metric.down() != 2) {
    throw Error(ErrorKind::RankMismatch, "link_geometry", "build_link", "metric must be (0,2)");
  }
  if (!metric.domain().is_grid()) bad_spec("link_from_metric expects a grid domain");
  check_positive(metric);
  LinkManifold link;
  link.domain = metric.domain_ptr();
  link.metric = symmetrize(metric);
  link.catalog_id = std::move(label);
  link.spec.grid = link.domain->sizes();
  return link;
}

}  // namespace acsol
