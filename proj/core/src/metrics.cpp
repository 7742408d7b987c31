#include "nlseg/metrics.hpp"

#include <cmath>
#include <string>

#include "nlseg/error.hpp"

namespace nlseg {

RegionMask::RegionMask(std::size_t n, std::vector<std::uint8_t> member)
    : n_(n), member_(std::move(member)) {
  if (member_.size() != n * n) throw InvalidArgument("region mask size mismatch");
  for (auto& m : member_) {
    m = m ? 1 : 0;
    count_ += m;
  }
}

RegionMask RegionMask::from_labels(const LabelMap& labels, int phase) {
  std::vector<std::uint8_t> m(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) m[k] = labels.data()[k] == phase ? 1 : 0;
  return RegionMask(labels.n(), std::move(m));
}

double cv(const ImageGrid& u, const RegionMask& region) {
  if (region.n() != u.n()) throw InvalidArgument("cv: mask shape mismatch");
  if (region.count() == 0) throw InvalidArgument("cv: empty region");
  const auto cnt = static_cast<double>(region.count());
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (region.contains(k)) sum += u.data()[k];
  }
  const double mean = sum / cnt;
  if (std::abs(mean) <= 1e-12) throw InvalidArgument("cv: region mean is zero; CV undefined");
  double ss = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (region.contains(k)) {
      const double d = u.data()[k] - mean;
      ss += d * d;
    }
  }
  return std::sqrt(ss / cnt) / mean;
}

double jaccard(const RegionMask& s1, const RegionMask& s2) {
  if (s1.n() != s2.n()) throw InvalidArgument("jaccard: mask shape mismatch");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t k = 0; k < s1.members().size(); ++k) {
    const bool a = s1.contains(k);
    const bool b = s2.contains(k);
    inter += (a && b) ? 1 : 0;
    uni += (a || b) ? 1 : 0;
  }
  if (uni == 0) throw InvalidArgument("jaccard: both regions are empty");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<PhaseMetrics> phase_metrics(const LabelMap& labels, const LabelMap& truth, int K,
                                        const ImageGrid* corrected) {
  if (labels.n() != truth.n()) throw InvalidArgument("phase_metrics: shape mismatch");
  std::vector<PhaseMetrics> out;
  for (int phase = 1; phase <= K; ++phase) {
    const RegionMask seg = RegionMask::from_labels(labels, phase);
    const RegionMask ref = RegionMask::from_labels(truth, phase);
    PhaseMetrics m;
    m.phase = phase;
    m.js = (seg.count() + ref.count() == 0) ? 1.0 : jaccard(seg, ref);
    if (corrected != nullptr && ref.count() > 0) {
      m.has_cv = true;
      m.cv = cv(*corrected, ref);
    }
    out.push_back(m);
  }
  return out;
}

} // namespace nlseg
