#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nlseg/image.hpp"

namespace nlseg {

/// Boolean pixel mask with a cached member count.
class RegionMask {
public:
  RegionMask() = default;
  RegionMask(std::size_t n, std::vector<std::uint8_t> member);

  /// Pixels whose label equals `phase`.
  static RegionMask from_labels(const LabelMap& labels, int phase);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] bool contains(std::size_t k) const noexcept { return member_[k] != 0; }
  [[nodiscard]] const std::vector<std::uint8_t>& members() const noexcept { return member_; }

private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> member_;
  std::size_t count_ = 0;
};

/// Coefficient of variation sigma/mu over the region (population sigma).
/// Throws when the region is empty or its mean is within 1e-12 of zero.
double cv(const ImageGrid& u, const RegionMask& region);

/// |s1 n s2| / |s1 u s2| as a fraction. Throws when both masks are empty.
double jaccard(const RegionMask& s1, const RegionMask& s2);

struct PhaseMetrics {
  int phase = 0;
  double js = 0.0;
  /// CV of the corrected image over the ground-truth region; unset when no
  /// intensity image is available.
  bool has_cv = false;
  double cv = 0.0;
};

/// Per-phase JS between `labels` and `truth`, plus CV of `corrected` (if
/// given) over each truth region.
std::vector<PhaseMetrics> phase_metrics(const LabelMap& labels, const LabelMap& truth, int K,
                                        const ImageGrid* corrected = nullptr);

} // namespace nlseg
