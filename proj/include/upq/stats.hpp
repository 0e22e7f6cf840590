#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "upq/matrix_kernel.hpp"

namespace upq {

/// Monte Carlo estimate with its standard error.
struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

/// Complex-valued estimate; std_error is the root of the summed component variances.
struct ComplexEstimate {
  cplx value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

/// Sample mean and standard error of the mean.
inline MCEstimate mean_estimate(const std::vector<double>& x) {
  MCEstimate e;
  e.n_samples = static_cast<long>(x.size());
  if (x.empty()) return e;
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  e.value = m;
  if (x.size() > 1) e.std_error = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  return e;
}

inline ComplexEstimate mean_estimate(const std::vector<cplx>& x) {
  std::vector<double> re(x.size()), im(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  const auto r = mean_estimate(re), i = mean_estimate(im);
  return {cplx(r.value, i.value), std::hypot(r.std_error, i.std_error), r.n_samples, 0};
}

/// Batch-means standard error of a statistic computed from rows [begin, end)
/// of a sample set: splits into `batches` contiguous groups, evaluates the
/// statistic on each, and returns sd/√batches.
inline double batch_std_error(long n, int batches, const std::function<double(long, long)>& stat) {
  if (batches < 2 || n < batches) return 0.0;
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    const long lo = n * b / batches, hi = n * (b + 1) / batches;
    vals.push_back(stat(lo, hi));
  }
  return mean_estimate(vals).std_error;
}

/// |a − b| ≤ k·√(se_a² + se_b²), with a floor for exact agreement.
inline bool within_sigma(double a, double b, double se_a, double se_b, double k = 3.0, double floor = 1e-12) {
  return std::abs(a - b) <= k * std::hypot(se_a, se_b) + floor;
}

} // namespace upq
