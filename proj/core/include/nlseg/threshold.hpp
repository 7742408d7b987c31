#pragma once

#include <span>
#include <vector>

#include "nlseg/image.hpp"

namespace nlseg {

struct SegmentationResult {
  int K = 0;
  std::vector<double> cluster_means; ///< ascending
  std::vector<double> thresholds;    ///< midpoints of adjacent means, K-1 entries
  LabelMap labels;                   ///< values in [1, K]
};

/// Deterministic 1D K-means. Lloyd's iteration from quantile seeds (mean j
/// starts at the (2j-1)/(2K) empirical quantile, ties go to the lower
/// cluster). Lloyd can stop at a local optimum in 1D, so the result is
/// compared with the exact optimal contiguous partition (dynamic
/// programming over the sorted values) and the lower within-cluster sum of
/// squares wins. Returns the K means in ascending order.
std::vector<double> kmeans_1d(std::span<const double> values, int K, int maxit = 100);

/// Within-cluster sum of squares when every value goes to its nearest mean.
double within_cluster_ss(std::span<const double> values, std::span<const double> means);

/// Label of a value: 1 + #{thresholds strictly below it}, so that phase i
/// is the half-open interval (rho_{i-1}, rho_i].
int assign_label(double value, std::span<const double> thresholds);

/// K-means on all pixel values of u, midpoint thresholds, label assignment.
SegmentationResult segment(const ImageGrid& u, int K, int maxit = 100);

} // namespace nlseg
