#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace rlnc {

struct MeanCI {
  double mean = 0.0;
  double half = 0.0;  // 95% half-width
};

/// Two-sided 97.5% Student-t quantile for small degrees of freedom, 1.96
/// beyond the table.  Enough for replica counts and batch counts used here.
inline double t_quantile_975(int df) {
  static const double table[] = {0,     12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                 2.306, 2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
                                 2.120, 2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069,
                                 2.064, 2.060,  2.056, 2.052, 2.048, 2.045, 2.042, 2.040};
  if (df <= 0) return 12.706;
  if (df <= 31) return table[df];
  return 1.96;
}

/// Sample mean and t-based 95% interval over independent replicates.
inline MeanCI mean_ci95(const std::vector<double>& xs) {
  MeanCI out;
  const std::size_t n = xs.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  out.half = t_quantile_975(static_cast<int>(n) - 1) * sd / std::sqrt(static_cast<double>(n));
  return out;
}

/// Streams per-epoch samples into 32 contiguous batches and reports the
/// batch-means interval; standard remedy for autocorrelated chain output.
class BatchAccumulator {
 public:
  static constexpr int kBatches = 32;

  explicit BatchAccumulator(std::uint64_t total)
      : total_(total < kBatches ? kBatches : total) {}

  void add(double x) {
    const std::uint64_t batch = seen_ * kBatches / total_;
    sums_[batch < kBatches ? batch : kBatches - 1] += x;
    ++seen_;
  }

  MeanCI mean_ci95() const {
    std::vector<double> means(kBatches);
    for (int i = 0; i < kBatches; ++i) {
      const std::uint64_t lo = (static_cast<std::uint64_t>(i) * total_ + kBatches - 1) / kBatches;
      std::uint64_t count = 0;
      // Count of samples routed to batch i under add()'s mapping.
      const std::uint64_t hi = (static_cast<std::uint64_t>(i + 1) * total_ + kBatches - 1) / kBatches;
      count = hi - lo;
      means[i] = count ? sums_[i] / static_cast<double>(count) : 0.0;
    }
    return rlnc::mean_ci95(means);
  }

 private:
  std::uint64_t total_;
  std::uint64_t seen_ = 0;
  double sums_[kBatches] = {};
};

}  // namespace rlnc
