#include "acsol/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "acsol/error.hpp"

namespace acsol {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

[[noreturn]] void rank_mismatch(const std::string& op, const std::string& detail) {
  throw Error(ErrorKind::RankMismatch, "link_geometry", op, detail);
}

void require_same(const TensorField& a, const TensorField& b, const char* op) {
  if (a.empty() || b.empty() || !a.same_shape(b)) {
    rank_mismatch(op, "operands differ in rank or domain");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(int dim, Backend backend, std::vector<int> sizes)
    : dim_(dim), backend_(backend), sizes_(std::move(sizes)), points_(1) {
  for (int s : sizes_) points_ *= static_cast<std::size_t>(s);
}

std::shared_ptr<const Domain> Domain::constant_frame(int dim) {
  if (dim < 1) {
    throw Error(ErrorKind::BadDimension, "link_geometry", "build_link",
                "dimension " + std::to_string(dim) + " < 1");
  }
  return std::shared_ptr<const Domain>(new Domain(dim, Backend::ConstantFrame, {}));
}

std::shared_ptr<const Domain> Domain::periodic_grid(std::vector<int> sizes) {
  const int dim = static_cast<int>(sizes.size());
  if (dim < 1 || dim > 3) {
    throw Error(ErrorKind::BadDimension, "link_geometry", "build_link",
                "grid dimension " + std::to_string(dim) + " outside [1,3]");
  }
  for (int s : sizes) {
    if (s < 4) {
      throw Error(ErrorKind::BadDimension, "link_geometry", "build_link",
                  "grid size " + std::to_string(s) + " < 4");
    }
  }
  return std::shared_ptr<const Domain>(new Domain(dim, Backend::PeriodicGrid, std::move(sizes)));
}

std::vector<double> Domain::coordinates(std::size_t p) const {
  if (!is_grid()) return {};
  std::vector<double> x(static_cast<std::size_t>(dim_));
  for (int a = dim_ - 1; a >= 0; --a) {
    const auto n = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(a)]);
    x[static_cast<std::size_t>(a)] = spacing(a) * static_cast<double>(p % n);
    p /= n;
  }
  return x;
}

double Domain::spacing(int axis) const {
  return 2.0 * std::numbers::pi / sizes_.at(static_cast<std::size_t>(axis));
}

bool Domain::same_as(const Domain& other) const noexcept {
  return this == &other ||
         (dim_ == other.dim_ && backend_ == other.backend_ && sizes_ == other.sizes_);
}

// ---------------------------------------------------------------------------
// TensorField

TensorField::TensorField(DomainPtr domain, int up, int down)
    : domain_(std::move(domain)), up_(up), down_(down) {
  if (up < 0 || down < 0 || up + down > kMaxStoredRank) {
    throw Error(ErrorKind::RankOverflow, "link_geometry", "tensor_algebra",
                "rank (" + std::to_string(up) + "," + std::to_string(down) + ")");
  }
  components_ = ipow(domain_->dim(), up + down);
  data_.assign(components_ * domain_->points(), 0.0);
}

TensorField TensorField::scalar(DomainPtr domain, double value) {
  TensorField t(std::move(domain), 0, 0);
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

TensorField TensorField::sample(
    DomainPtr domain, int up, int down,
    const std::function<double(std::span<const int>, std::span<const double>)>& fn) {
  TensorField t(std::move(domain), up, down);
  const int n = t.dim();
  const int rank = up + down;
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  const std::size_t np = t.points();
  std::vector<std::vector<double>> coords(np);
  for (std::size_t p = 0; p < np; ++p) coords[p] = t.domain().coordinates(p);
  for (std::size_t c = 0; c < t.components_; ++c) {
    std::size_t rem = c;
    for (int s = rank - 1; s >= 0; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    for (std::size_t p = 0; p < np; ++p) t.at(c, p) = fn(idx, coords[p]);
  }
  return t;
}

TensorField TensorField::identity(DomainPtr domain) {
  TensorField t(std::move(domain), 1, 1);
  const int n = t.dim();
  for (int i = 0; i < n; ++i) {
    auto comp = t.component(static_cast<std::size_t>(i * n + i));
    std::fill(comp.begin(), comp.end(), 1.0);
  }
  return t;
}

std::span<double> TensorField::component(std::size_t c) {
  return {data_.data() + c * points(), points()};
}

std::span<const double> TensorField::component(std::size_t c) const {
  return {data_.data() + c * points(), points()};
}

std::size_t TensorField::flat_index(std::span<const int> idx) const {
  std::size_t c = 0;
  for (int i : idx) c = c * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(i);
  return c;
}

double& TensorField::operator()(std::initializer_list<int> idx, std::size_t p) {
  return at(flat_index(std::span<const int>(idx.begin(), idx.size())), p);
}

double TensorField::operator()(std::initializer_list<int> idx, std::size_t p) const {
  return at(flat_index(std::span<const int>(idx.begin(), idx.size())), p);
}

bool TensorField::same_shape(const TensorField& other) const {
  return up_ == other.up_ && down_ == other.down_ && domain_ && other.domain_ &&
         domain_->same_as(*other.domain_);
}

TensorField& TensorField::operator+=(const TensorField& rhs) {
  require_same(*this, rhs, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& rhs) {
  require_same(*this, rhs, "sub");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

TensorField& TensorField::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

TensorField& TensorField::axpy(double a, const TensorField& x) {
  require_same(*this, x, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
  return *this;
}

double TensorField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool TensorField::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
TensorField operator*(double s, TensorField a) { return a *= s; }
TensorField operator-(TensorField a) { return a *= -1.0; }

// ---------------------------------------------------------------------------
// einsum

namespace {

struct Slot {
  char letter;
  bool upper;
};

struct ParsedSpec {
  std::vector<Slot> a, b, out;
  int out_up = 0;
  bool binary = false;
};

std::vector<Slot> slots_of(std::string_view letters, const TensorField& t, const char* which,
                           std::string_view spec) {
  if (static_cast<int>(letters.size()) != t.rank()) {
    rank_mismatch("tensor_algebra", std::string("operand ") + which + " of '" +
                                        std::string(spec) + "' has rank " +
                                        std::to_string(t.rank()));
  }
  std::vector<Slot> s;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    s.push_back({letters[i], static_cast<int>(i) < t.up()});
  }
  return s;
}

ParsedSpec parse_spec(std::string_view spec, const TensorField& a, const TensorField* b) {
  const auto arrow = spec.find("->");
  if (arrow == std::string_view::npos) rank_mismatch("tensor_algebra", "missing '->'");
  const std::string_view lhs = spec.substr(0, arrow);
  const std::string_view rhs = spec.substr(arrow + 2);
  const auto comma = lhs.find(',');
  ParsedSpec p;
  p.binary = b != nullptr;
  if ((comma != std::string_view::npos) != p.binary) {
    rank_mismatch("tensor_algebra", "operand count mismatch in '" + std::string(spec) + "'");
  }
  p.a = slots_of(p.binary ? lhs.substr(0, comma) : lhs, a, "A", spec);
  if (p.binary) p.b = slots_of(lhs.substr(comma + 1), *b, "B", spec);

  std::vector<Slot> all = p.a;
  all.insert(all.end(), p.b.begin(), p.b.end());
  bool seen_down = false;
  for (char c : rhs) {
    const auto n = std::count_if(all.begin(), all.end(), [c](const Slot& s) { return s.letter == c; });
    if (n != 1) rank_mismatch("tensor_algebra", std::string("output letter '") + c + "' invalid");
    const auto it = std::find_if(all.begin(), all.end(), [c](const Slot& s) { return s.letter == c; });
    if (it->upper && seen_down) {
      rank_mismatch("tensor_algebra", "output lists a contravariant slot after a covariant one");
    }
    seen_down = seen_down || !it->upper;
    p.out.push_back(*it);
    if (it->upper) ++p.out_up;
  }
  for (const Slot& s : all) {
    if (rhs.find(s.letter) != std::string_view::npos) continue;
    int ups = 0, downs = 0;
    for (const Slot& o : all) {
      if (o.letter == s.letter) (o.upper ? ups : downs)++;
    }
    if (ups != 1 || downs != 1) {
      rank_mismatch("tensor_algebra", std::string("summed index '") + s.letter +
                                          "' must pair one upper and one lower slot");
    }
  }
  return p;
}

struct Triple {
  std::size_t out, a, b;
};

std::vector<Triple> build_table(const ParsedSpec& p, int n) {
  std::string letters;
  auto add = [&](const std::vector<Slot>& v) {
    for (const Slot& s : v) {
      if (letters.find(s.letter) == std::string::npos) letters.push_back(s.letter);
    }
  };
  add(p.a);
  add(p.b);
  const std::size_t total = ipow(n, static_cast<int>(letters.size()));
  std::array<int, 128> value{};
  auto flat = [&](const std::vector<Slot>& v) {
    std::size_t c = 0;
    for (const Slot& s : v) c = c * static_cast<std::size_t>(n) + static_cast<std::size_t>(value[static_cast<unsigned char>(s.letter)]);
    return c;
  };
  std::vector<Triple> table;
  table.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    for (std::size_t l = letters.size(); l-- > 0;) {
      value[static_cast<unsigned char>(letters[l])] = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    table.push_back({flat(p.out), flat(p.a), p.binary ? flat(p.b) : 0});
  }
  std::sort(table.begin(), table.end(),
            [](const Triple& x, const Triple& y) { return x.out < y.out; });
  return table;
}

}  // namespace

TensorField einsum(std::string_view spec, const TensorField& a, const TensorField& b) {
  if (a.empty() || b.empty() || !a.domain().same_as(b.domain())) {
    rank_mismatch("tensor_algebra", "operands live on different domains");
  }
  const ParsedSpec p = parse_spec(spec, a, &b);
  TensorField out(a.domain_ptr(), p.out_up, static_cast<int>(p.out.size()) - p.out_up);
  const std::size_t np = a.points();
  const double* ad = a.data().data();
  const double* bd = b.data().data();
  double* od = out.data().data();
  for (const Triple& t : build_table(p, a.dim())) {
    const double* x = ad + t.a * np;
    const double* y = bd + t.b * np;
    double* o = od + t.out * np;
    for (std::size_t q = 0; q < np; ++q) o[q] += x[q] * y[q];
  }
  return out;
}

TensorField einsum(std::string_view spec, const TensorField& a) {
  if (a.empty()) rank_mismatch("tensor_algebra", "empty operand");
  const ParsedSpec p = parse_spec(spec, a, nullptr);
  TensorField out(a.domain_ptr(), p.out_up, static_cast<int>(p.out.size()) - p.out_up);
  const std::size_t np = a.points();
  for (const Triple& t : build_table(p, a.dim())) {
    const double* x = a.data().data() + t.a * np;
    double* o = out.data().data() + t.out * np;
    for (std::size_t q = 0; q < np; ++q) o[q] += x[q];
  }
  return out;
}

TensorField permute(const TensorField& t, std::span<const int> perm) {
  const int rank = t.rank();
  if (static_cast<int>(perm.size()) != rank) rank_mismatch("tensor_algebra", "permutation length");
  std::string letters = "abcdefgh";
  std::string in = letters.substr(0, static_cast<std::size_t>(rank));
  std::string out;
  for (int s : perm) {
    if (s < 0 || s >= rank) rank_mismatch("tensor_algebra", "permutation entry out of range");
    out.push_back(in[static_cast<std::size_t>(s)]);
  }
  return einsum(in + "->" + out, t);
}

TensorField permute(const TensorField& t, std::initializer_list<int> perm) {
  return permute(t, std::span<const int>(perm.begin(), perm.size()));
}

TensorField multiply(const TensorField& scalar, const TensorField& t) {
  if (scalar.rank() != 0) rank_mismatch("tensor_algebra", "multiply expects a scalar field");
  if (!scalar.domain().same_as(t.domain())) rank_mismatch("tensor_algebra", "domain mismatch");
  TensorField out = t;
  const std::size_t np = t.points();
  for (std::size_t c = 0; c < t.components(); ++c) {
    for (std::size_t p = 0; p < np; ++p) out.at(c, p) *= scalar.at(0, p);
  }
  return out;
}

TensorField map_pointwise(const TensorField& scalar, const std::function<double(double)>& fn) {
  TensorField out = scalar;
  for (double& v : out.data()) v = fn(v);
  return out;
}

namespace {

void require_matrix(const TensorField& t, const char* op) {
  if (t.rank() != 2 || (t.up() == 1)) {
    rank_mismatch(op, "expected a rank-2 tensor with both slots of equal variance");
  }
}

}  // namespace

TensorField symmetrize(const TensorField& t) {
  require_matrix(t, "symmetrize");
  TensorField out = t;
  const int n = t.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (std::size_t p = 0; p < t.points(); ++p) {
        out({i, j}, p) = 0.5 * (t({i, j}, p) + t({j, i}, p));
      }
    }
  }
  return out;
}

TensorField antisymmetrize(const TensorField& t) {
  require_matrix(t, "symmetrize");
  TensorField out = t;
  const int n = t.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (std::size_t p = 0; p < t.points(); ++p) {
        out({i, j}, p) = 0.5 * (t({i, j}, p) - t({j, i}, p));
      }
    }
  }
  return out;
}

double symmetry_defect(const TensorField& t) {
  require_matrix(t, "symmetrize");
  double d = 0.0;
  const int n = t.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (std::size_t p = 0; p < t.points(); ++p) {
        d = std::max(d, std::abs(t({i, j}, p) - t({j, i}, p)));
      }
    }
  }
  return d;
}

bool is_symmetric(const TensorField& t, double rel_tol) {
  return symmetry_defect(t) <= rel_tol * std::max(t.max_abs(), 1e-300);
}

namespace {

Eigen::MatrixXd matrix_at(const TensorField& g, std::size_t p) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = g({i, j}, p);
  }
  return m;
}

}  // namespace

double min_eigenvalue(const TensorField& g) {
  if (g.rank() != 2) rank_mismatch("min_eigenvalue", "expected rank 2");
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < g.points(); ++p) {
    const Eigen::MatrixXd m = matrix_at(g, p);
    const Eigen::MatrixXd s = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

TensorField inverse_metric(const TensorField& g, double min_eig) {
  if (g.up() != 0 || g.down() != 2) rank_mismatch("inverse_metric", "expected a (0,2) tensor");
  const double lo = min_eigenvalue(g);
  if (!(lo > min_eig)) {
    throw Error(ErrorKind::NonPositiveDefinite, "link_geometry", "inverse_metric",
                "minimum eigenvalue " + std::to_string(lo));
  }
  return symmetrize(matrix_inverse(g));
}

TensorField matrix_inverse(const TensorField& m) {
  if (m.rank() != 2) rank_mismatch("matrix_inverse", "expected rank 2");
  const int up = m.up() == 2 ? 0 : (m.up() == 0 ? 2 : 1);
  TensorField out(m.domain_ptr(), up, 2 - up);
  const int n = m.dim();
  for (std::size_t p = 0; p < m.points(); ++p) {
    const Eigen::MatrixXd a = matrix_at(m, p);
    const Eigen::MatrixXd inv = a.inverse();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out({i, j}, p) = inv(i, j);
    }
  }
  return out;
}

}  // namespace acsol
