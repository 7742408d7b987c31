#pragma once

#include <filesystem>
#include <string>

#include "nlseg/image.hpp"
#include "nlseg/issapl.hpp"

namespace nlseg {

/// Reads a square binary (P5) or plain (P2) PGM, mapping samples to
/// value / maxval in [0, 1]. maxval up to 65535 (16-bit P5 is big-endian).
ImageGrid read_image(const std::filesystem::path& path);

/// Clamps to [0, 1], quantizes round-half-up to 0..255 and writes P5.
void write_image(const ImageGrid& grid, const std::filesystem::path& path);

/// Byte quantization used by write_image: floor(255 * clamp(x, 0, 1) + 0.5).
unsigned char quantize_byte(double x);

/// Phase i of K is written at intensity i / K.
void write_labels(const LabelMap& labels, int K, const std::filesystem::path& path);
/// Inverse of write_labels: label = round(value * K), checked against [1, K].
LabelMap read_labels(const std::filesystem::path& path, int K);

/// CSV, one grid row per line, 17 significant digits so that
/// read_float_grid(write_float_grid(g)) == g bit for bit.
void write_float_grid(const ImageGrid& grid, const std::filesystem::path& path);
ImageGrid read_float_grid(const std::filesystem::path& path);

/// CSV with header k,F,increment,support_size,min_nonzero_grad,max_grad,inner_iters.
void write_trace(const IterationTrace& trace, const std::filesystem::path& path);
IterationTrace read_trace(const std::filesystem::path& path);

/// Loads .csv through read_float_grid and anything else through read_image.
ImageGrid read_any_image(const std::filesystem::path& path);

/// Shortest-exact formatting helpers shared with the JSON writers.
std::string format_double(double x);
double parse_double(const std::string& s);

// Log-domain handling for multiplicative models.
inline constexpr double kLogFloor = 1e-4;

/// log(clamp(x, kLogFloor, 1)) elementwise.
ImageGrid to_log_domain(const ImageGrid& g);
/// exp(x) elementwise.
ImageGrid from_log_domain(const ImageGrid& g);

} // namespace nlseg
