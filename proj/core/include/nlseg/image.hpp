#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nlseg {

/// Square n x n grid of doubles, row-major: (i, j) is row i, column j.
///
/// Houses the observed image f, the piecewise-constant part u, the smooth
/// part v, and any other per-pixel real field. Constructing from a data
/// vector rejects non-finite entries.
class ImageGrid {
public:
  ImageGrid() = default;
  explicit ImageGrid(std::size_t n, double fill = 0.0);
  ImageGrid(std::size_t n, std::vector<double> data);

  static ImageGrid from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }

  [[nodiscard]] bool all_finite() const noexcept;
  [[nodiscard]] double min() const;
  [[nodiscard]] double max() const;

  bool operator==(const ImageGrid&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Per-pixel forward differences (D+x u, D+y u).
struct GradientField {
  GradientField() = default;
  explicit GradientField(std::size_t n) : dx(n), dy(n) {}

  [[nodiscard]] std::size_t n() const noexcept { return dx.n(); }

  ImageGrid dx;
  ImageGrid dy;
};

/// The four second-difference stacks of the discrete Hessian. xy and yx are
/// separate compositions (D+x D+y and D+y D+x) and are stored separately.
struct HessianField {
  HessianField() = default;
  explicit HessianField(std::size_t n) : xx(n), xy(n), yx(n), yy(n) {}

  [[nodiscard]] std::size_t n() const noexcept { return xx.n(); }

  ImageGrid xx;
  ImageGrid xy;
  ImageGrid yx;
  ImageGrid yy;
};

/// Integer phase labels in [1, K], row-major.
class LabelMap {
public:
  LabelMap() = default;
  explicit LabelMap(std::size_t n, int fill = 1) : n_(n), data_(n * n, fill) {}
  LabelMap(std::size_t n, std::vector<int> data);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

  int& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  int operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  [[nodiscard]] std::span<int> data() noexcept { return data_; }
  [[nodiscard]] std::span<const int> data() const noexcept { return data_; }

  bool operator==(const LabelMap&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<int> data_;
};

// Flat-vector helpers. All reductions run in index order so results are
// reproducible bit-for-bit.
double dot(const ImageGrid& a, const ImageGrid& b);
double dot(const GradientField& a, const GradientField& b);
double dot(const HessianField& a, const HessianField& b);
double norm(const ImageGrid& a);
double norm(const GradientField& a);
double norm(const HessianField& a);
double squared_norm(const ImageGrid& a);
double squared_norm(const HessianField& a);

/// Euclidean norm of the stacked pair (a, b).
double stacked_norm(const ImageGrid& a, const ImageGrid& b);
/// ||(a1, b1) - (a0, b0)||.
double stacked_distance(const ImageGrid& a1, const ImageGrid& b1, const ImageGrid& a0,
                        const ImageGrid& b0);

void require_same_shape(const ImageGrid& a, const ImageGrid& b, const char* what);

} // namespace nlseg
