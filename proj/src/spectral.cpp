#include "acsol/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numeric>

#include "acsol/error.hpp"

namespace acsol {

namespace {

// FFTW planning is not thread-safe; plans are created once per grid shape
// under a lock and then executed through the new-array interface.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(const std::vector<int>& sizes) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(sizes);
    if (it != plans_.end()) return it->second;
    const std::size_t real_n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{1},
                                               std::multiplies<>());
    const std::size_t cplx_n = real_n / static_cast<std::size_t>(sizes.back()) *
                               static_cast<std::size_t>(sizes.back() / 2 + 1);
    double* r = fftw_alloc_real(real_n);
    fftw_complex* c = fftw_alloc_complex(cplx_n);
    PlanPair p;
    const int rank = static_cast<int>(sizes.size());
    p.forward = fftw_plan_dft_r2c(rank, sizes.data(), r, c, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r(rank, sizes.data(), c, r, FFTW_ESTIMATE);
    fftw_free(r);
    fftw_free(c);
    plans_.emplace(sizes, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::vector<int>, PlanPair> plans_;
};

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : ptr(fftw_alloc_real(n)) {}
  ~RealBuffer() { fftw_free(ptr); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* ptr;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(ptr); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* ptr;
};

// Signed wavenumber for index j of an axis with n samples; the Nyquist
// mode of an even axis is dropped for first derivatives.
double wavenumber(int j, int n) {
  if (2 * j == n) return 0.0;
  return static_cast<double>(2 * j < n ? j : j - n);
}

std::vector<std::vector<double>> spectral_gradient(std::span<const double> values,
                                                   const Domain& domain) {
  const auto& sizes = domain.sizes();
  const int dim = domain.dim();
  const std::size_t real_n = domain.points();
  const int last = sizes.back();
  const int half = last / 2 + 1;
  const std::size_t cplx_n = real_n / static_cast<std::size_t>(last) * static_cast<std::size_t>(half);

  const PlanPair plans = PlanCache::instance().get(sizes);
  RealBuffer in(real_n);
  ComplexBuffer spectrum(cplx_n);
  ComplexBuffer work(cplx_n);
  RealBuffer out(real_n);
  std::copy(values.begin(), values.end(), in.ptr);
  fftw_execute_dft_r2c(plans.forward, in.ptr, spectrum.ptr);

  std::vector<std::vector<double>> grads(static_cast<std::size_t>(dim));
  const double norm = 1.0 / static_cast<double>(real_n);
  std::vector<int> idx(static_cast<std::size_t>(dim));
  for (int axis = 0; axis < dim; ++axis) {
    for (std::size_t q = 0; q < cplx_n; ++q) {
      std::size_t rem = q;
      idx[static_cast<std::size_t>(dim - 1)] = static_cast<int>(rem % static_cast<std::size_t>(half));
      rem /= static_cast<std::size_t>(half);
      for (int a = dim - 2; a >= 0; --a) {
        const auto n = static_cast<std::size_t>(sizes[static_cast<std::size_t>(a)]);
        idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % n);
        rem /= n;
      }
      const double k = wavenumber(idx[static_cast<std::size_t>(axis)], sizes[static_cast<std::size_t>(axis)]);
      // multiply by i k
      const double re = spectrum.ptr[q][0];
      const double im = spectrum.ptr[q][1];
      work.ptr[q][0] = -k * im * norm;
      work.ptr[q][1] = k * re * norm;
    }
    fftw_execute_dft_c2r(plans.backward, work.ptr, out.ptr);
    grads[static_cast<std::size_t>(axis)].assign(out.ptr, out.ptr + real_n);
  }
  return grads;
}

std::vector<std::vector<double>> fd4_gradient(std::span<const double> values, const Domain& domain) {
  const auto& sizes = domain.sizes();
  const int dim = domain.dim();
  const std::size_t np = domain.points();
  std::vector<std::vector<double>> grads(static_cast<std::size_t>(dim), std::vector<double>(np));
  std::size_t stride = np;
  for (int axis = 0; axis < dim; ++axis) {
    const auto n = static_cast<std::size_t>(sizes[static_cast<std::size_t>(axis)]);
    stride /= n;
    const double h = domain.spacing(axis);
    auto& g = grads[static_cast<std::size_t>(axis)];
    for (std::size_t p = 0; p < np; ++p) {
      const std::size_t j = (p / stride) % n;
      const std::size_t base = p - j * stride;
      auto at = [&](std::size_t jj) { return values[base + ((jj + n) % n) * stride]; };
      g[p] = (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j + n - 1) + at(j + n - 2)) / (12.0 * h);
    }
  }
  return grads;
}

}  // namespace

std::vector<std::vector<double>> gradient(std::span<const double> values, const Domain& domain,
                                          DiffMethod method) {
  if (!domain.is_grid()) {
    return std::vector<std::vector<double>>(static_cast<std::size_t>(domain.dim()),
                                            std::vector<double>(values.size(), 0.0));
  }
  if (values.size() != domain.points()) {
    throw Error(ErrorKind::RankMismatch, "link_geometry", "gradient", "sample count mismatch");
  }
  return method == DiffMethod::Spectral ? spectral_gradient(values, domain)
                                        : fd4_gradient(values, domain);
}

TensorField partial(const TensorField& t, DiffMethod method) {
  TensorField out(t.domain_ptr(), t.up(), t.down() + 1);
  if (!t.domain().is_grid()) return out;
  const auto n = static_cast<std::size_t>(t.dim());
  const std::size_t upper_count = t.up() == 0 ? 1 : static_cast<std::size_t>(std::pow(n, t.up()));
  const std::size_t lower_count = t.components() / upper_count;
  for (std::size_t c = 0; c < t.components(); ++c) {
    const auto grads = gradient(t.component(c), t.domain(), method);
    const std::size_t u = c / lower_count;
    const std::size_t d = c % lower_count;
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t oc = (u * n + m) * lower_count + d;
      std::copy(grads[m].begin(), grads[m].end(), out.component(oc).begin());
    }
  }
  return out;
}

double grid_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace acsol
