#include "nlseg/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlseg/error.hpp"

namespace nlseg {

namespace {

// Nearest mean, ties to the lower index.
std::size_t nearest(double x, std::span<const double> means) {
  std::size_t best = 0;
  double best_d = std::abs(x - means[0]);
  for (std::size_t c = 1; c < means.size(); ++c) {
    const double d = std::abs(x - means[c]);
    if (d < best_d) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

std::vector<double> lloyd(std::span<const double> sorted, int K, int maxit) {
  const std::size_t N = sorted.size();
  std::vector<double> means(static_cast<std::size_t>(K));
  for (int j = 1; j <= K; ++j) {
    const double q = (2.0 * j - 1.0) / (2.0 * K);
    const auto idx = std::min(N - 1, static_cast<std::size_t>(std::floor(q * static_cast<double>(N))));
    means[static_cast<std::size_t>(j - 1)] = sorted[idx];
  }

  std::vector<std::size_t> assign(N, static_cast<std::size_t>(-1));
  for (int it = 0; it < maxit; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t c = nearest(sorted[i], means);
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<double> sum(means.size(), 0.0);
    std::vector<std::size_t> cnt(means.size(), 0);
    for (std::size_t i = 0; i < N; ++i) {
      sum[assign[i]] += sorted[i];
      ++cnt[assign[i]];
    }
    for (std::size_t c = 0; c < means.size(); ++c) {
      if (cnt[c] > 0) means[c] = sum[c] / static_cast<double>(cnt[c]);
    }
  }
  std::sort(means.begin(), means.end());
  return means;
}

// Exact K-segment partition of sorted data minimizing the within-cluster
// sum of squares; divide-and-conquer over the monotone split points.
class ContiguousPartition {
public:
  ContiguousPartition(std::span<const double> sorted, int K) : x_(sorted), K_(K) {
    const std::size_t N = x_.size();
    double shift = 0.0;
    for (double v : x_) shift += v;
    shift /= static_cast<double>(N);
    s1_.assign(N + 1, 0.0);
    s2_.assign(N + 1, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      const double y = x_[i] - shift;
      s1_[i + 1] = s1_[i] + y;
      s2_[i + 1] = s2_[i] + y * y;
    }
  }

  std::vector<double> solve() {
    const std::size_t N = x_.size();
    const auto K = static_cast<std::size_t>(K_);
    std::vector<std::vector<double>> cost(K + 1, std::vector<double>(N + 1, kInf));
    split_.assign(K + 1, std::vector<std::size_t>(N + 1, 0));
    for (std::size_t j = 1; j <= N; ++j) cost[1][j] = segment_cost(0, j);
    for (std::size_t k = 2; k <= K; ++k) {
      fill_layer(cost[k - 1], cost[k], split_[k], k, N, k - 1, N - 1);
    }
    // Recover boundaries.
    std::vector<double> means;
    std::size_t end = N;
    for (std::size_t k = K; k >= 1; --k) {
      const std::size_t begin = k == 1 ? 0 : split_[k][end];
      double s = 0.0;
      for (std::size_t i = begin; i < end; ++i) s += x_[i];
      means.push_back(s / static_cast<double>(end - begin));
      end = begin;
    }
    std::reverse(means.begin(), means.end());
    return means;
  }

private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double segment_cost(std::size_t i, std::size_t j) const {
    const double m = static_cast<double>(j - i);
    const double s = s1_[j] - s1_[i];
    return std::max(0.0, (s2_[j] - s2_[i]) - s * s / m);
  }

  // Computes cur[j] for j in [jlo, jhi] knowing opt split lies in [olo, ohi].
  void fill_range(const std::vector<double>& prev, std::vector<double>& cur,
                  std::vector<std::size_t>& arg, std::size_t jlo, std::size_t jhi,
                  std::size_t olo, std::size_t ohi) {
    if (jlo > jhi) return;
    const std::size_t mid = jlo + (jhi - jlo) / 2;
    double best = kInf;
    std::size_t best_i = olo;
    for (std::size_t i = olo; i <= std::min(ohi, mid - 1); ++i) {
      const double c = prev[i] + segment_cost(i, mid);
      if (c < best) {
        best = c;
        best_i = i;
      }
    }
    cur[mid] = best;
    arg[mid] = best_i;
    if (mid > jlo) fill_range(prev, cur, arg, jlo, mid - 1, olo, best_i);
    fill_range(prev, cur, arg, mid + 1, jhi, best_i, ohi);
  }

  void fill_layer(const std::vector<double>& prev, std::vector<double>& cur,
                  std::vector<std::size_t>& arg, std::size_t k, std::size_t N, std::size_t olo,
                  std::size_t ohi) {
    fill_range(prev, cur, arg, k, N, olo, ohi);
  }

  std::span<const double> x_;
  int K_;
  std::vector<double> s1_;
  std::vector<double> s2_;
  std::vector<std::vector<std::size_t>> split_;
};

} // namespace

double within_cluster_ss(std::span<const double> values, std::span<const double> means) {
  std::vector<double> sum(means.size(), 0.0);
  std::vector<std::size_t> cnt(means.size(), 0);
  std::vector<std::size_t> assign(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    assign[i] = nearest(values[i], means);
    sum[assign[i]] += values[i];
    ++cnt[assign[i]];
  }
  // Score the partition around its own centroids.
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t c = assign[i];
    const double d = values[i] - sum[c] / static_cast<double>(cnt[c]);
    ss += d * d;
  }
  return ss;
}

std::vector<double> kmeans_1d(std::span<const double> values, int K, int maxit) {
  if (K < 2) throw InvalidArgument("kmeans_1d: K must be >= 2");
  if (maxit < 1) throw InvalidArgument("kmeans_1d: maxit must be >= 1");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto distinct = static_cast<std::size_t>(
      std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  if (distinct < static_cast<std::size_t>(K)) {
    throw InvalidArgument("kmeans_1d: need at least " + std::to_string(K) +
                          " distinct values, got " + std::to_string(distinct) + " (short by " +
                          std::to_string(static_cast<std::size_t>(K) - distinct) + ")");
  }
  sorted.assign(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> means = lloyd(sorted, K, maxit);
  std::vector<double> exact = ContiguousPartition(sorted, K).solve();
  const double ss_lloyd = within_cluster_ss(sorted, means);
  const double ss_exact = within_cluster_ss(sorted, exact);
  if (ss_exact < ss_lloyd) means = std::move(exact);
  return means;
}

int assign_label(double value, std::span<const double> thresholds) {
  const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), value);
  return 1 + static_cast<int>(it - thresholds.begin());
}

SegmentationResult segment(const ImageGrid& u, int K, int maxit) {
  SegmentationResult res;
  res.K = K;
  res.cluster_means = kmeans_1d(u.data(), K, maxit);
  for (int i = 0; i + 1 < K; ++i) {
    const auto a = static_cast<std::size_t>(i);
    res.thresholds.push_back((res.cluster_means[a] + res.cluster_means[a + 1]) / 2.0);
  }
  res.labels = LabelMap(u.n());
  for (std::size_t k = 0; k < u.size(); ++k) {
    res.labels.data()[k] = assign_label(u.data()[k], res.thresholds);
  }
  return res;
}

} // namespace nlseg
