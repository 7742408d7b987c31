#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nlseg {

/// Partition of the pixels into the active set (nonzero gradient, Omega_1)
/// and its complement (Omega_0).
class SupportSet {
public:
  SupportSet() = default;
  explicit SupportSet(std::size_t n, bool active = true) : n_(n), active_(n * n, active) {}

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return active_.size(); }

  [[nodiscard]] bool active(std::size_t k) const noexcept { return active_[k] != 0; }
  [[nodiscard]] bool active(std::size_t i, std::size_t j) const noexcept { return active(i * n_ + j); }
  void set(std::size_t k, bool on) noexcept { active_[k] = on ? 1 : 0; }
  void set(std::size_t i, std::size_t j, bool on) noexcept { set(i * n_ + j, on); }

  /// Number of active pixels, #Omega_1.
  [[nodiscard]] std::size_t count() const noexcept;

  /// True when every active pixel of *this is also active in `outer`.
  [[nodiscard]] bool subset_of(const SupportSet& outer) const;

  bool operator==(const SupportSet&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> active_;
};

inline std::size_t SupportSet::count() const noexcept {
  std::size_t c = 0;
  for (auto a : active_) c += a;
  return c;
}

inline bool SupportSet::subset_of(const SupportSet& outer) const {
  if (outer.size() != size()) return false;
  for (std::size_t k = 0; k < active_.size(); ++k) {
    if (active_[k] && !outer.active_[k]) return false;
  }
  return true;
}

} // namespace nlseg
