#include "nlseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlseg/error.hpp"

namespace nlseg {

namespace {

void check_side(std::size_t n) {
  if (n < 2) {
    throw InvalidArgument("grid side length must be >= 2, got " + std::to_string(n));
  }
}

} // namespace

ImageGrid::ImageGrid(std::size_t n, double fill) : n_(n), data_(n * n, fill) {
  check_side(n);
  if (!std::isfinite(fill)) {
    throw InvalidArgument("grid fill value is not finite");
  }
}

ImageGrid::ImageGrid(std::size_t n, std::vector<double> data) : n_(n), data_(std::move(data)) {
  check_side(n);
  if (data_.size() != n * n) {
    throw InvalidArgument("grid data has " + std::to_string(data_.size()) + " entries, expected " +
                          std::to_string(n * n));
  }
  if (!all_finite()) {
    throw InvalidArgument("grid data contains NaN or infinity");
  }
}

ImageGrid ImageGrid::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw InvalidArgument("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                            " entries; grid must be square");
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return ImageGrid(n, std::move(flat));
}

bool ImageGrid::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double ImageGrid::min() const {
  if (data_.empty()) throw InvalidArgument("min of empty grid");
  return *std::min_element(data_.begin(), data_.end());
}

double ImageGrid::max() const {
  if (data_.empty()) throw InvalidArgument("max of empty grid");
  return *std::max_element(data_.begin(), data_.end());
}

LabelMap::LabelMap(std::size_t n, std::vector<int> data) : n_(n), data_(std::move(data)) {
  if (data_.size() != n * n) {
    throw InvalidArgument("label data has " + std::to_string(data_.size()) +
                          " entries, expected " + std::to_string(n * n));
  }
}

double dot(const ImageGrid& a, const ImageGrid& b) {
  require_same_shape(a, b, "dot");
  double s = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double dot(const GradientField& a, const GradientField& b) {
  return dot(a.dx, b.dx) + dot(a.dy, b.dy);
}

double dot(const HessianField& a, const HessianField& b) {
  return dot(a.xx, b.xx) + dot(a.xy, b.xy) + dot(a.yx, b.yx) + dot(a.yy, b.yy);
}

double squared_norm(const ImageGrid& a) { return dot(a, a); }
double squared_norm(const HessianField& a) { return dot(a, a); }
double norm(const ImageGrid& a) { return std::sqrt(dot(a, a)); }
double norm(const GradientField& a) { return std::sqrt(dot(a, a)); }
double norm(const HessianField& a) { return std::sqrt(dot(a, a)); }

double stacked_norm(const ImageGrid& a, const ImageGrid& b) {
  return std::sqrt(dot(a, a) + dot(b, b));
}

double stacked_distance(const ImageGrid& a1, const ImageGrid& b1, const ImageGrid& a0,
                        const ImageGrid& b0) {
  require_same_shape(a1, a0, "stacked_distance");
  require_same_shape(b1, b0, "stacked_distance");
  double s = 0.0;
  for (std::size_t k = 0; k < a1.size(); ++k) {
    const double d = a1.data()[k] - a0.data()[k];
    s += d * d;
  }
  for (std::size_t k = 0; k < b1.size(); ++k) {
    const double d = b1.data()[k] - b0.data()[k];
    s += d * d;
  }
  return std::sqrt(s);
}

void require_same_shape(const ImageGrid& a, const ImageGrid& b, const char* what) {
  if (a.n() != b.n()) {
    throw InvalidArgument(std::string(what) + ": shape mismatch (" + std::to_string(a.n()) +
                          " vs " + std::to_string(b.n()) + ")");
  }
}

} // namespace nlseg
