#include "nlseg/imgio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "nlseg/error.hpp"

namespace nlseg {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// PGM header tokens are whitespace separated; '#' starts a comment that
// runs to end of line.
class HeaderReader {
public:
  HeaderReader(const std::string& buf, const fs::path& path) : buf_(buf), path_(path) {}

  std::string token() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < buf_.size() && !std::isspace(static_cast<unsigned char>(buf_[pos_])) &&
           buf_[pos_] != '#') {
      ++pos_;
    }
    if (start == pos_) fail("unexpected end of header");
    return buf_.substr(start, pos_ - start);
  }

  long number() {
    const std::string t = token();
    long v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) fail("bad number '" + t + "'");
    return v;
  }

  // After maxval exactly one whitespace byte precedes raster data.
  std::size_t raster_start() {
    if (pos_ >= buf_.size() || !std::isspace(static_cast<unsigned char>(buf_[pos_]))) {
      fail("missing whitespace before raster");
    }
    return pos_ + 1;
  }

  std::size_t& pos() { return pos_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("malformed PGM '" + path_.string() + "': " + msg);
  }

private:
  void skip() {
    while (pos_ < buf_.size()) {
      if (buf_[pos_] == '#') {
        while (pos_ < buf_.size() && buf_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(buf_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& buf_;
  const fs::path& path_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

} // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, p);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || b == e) throw ParseError("bad number '" + s + "'");
  return v;
}

ImageGrid read_image(const fs::path& path) {
  const std::string buf = read_all(path);
  HeaderReader hdr(buf, path);
  const std::string magic = hdr.token();
  if (magic != "P5" && magic != "P2") hdr.fail("unsupported magic '" + magic + "'");
  const long width = hdr.number();
  const long height = hdr.number();
  const long maxval = hdr.number();
  if (width <= 0 || height <= 0) hdr.fail("non-positive dimensions");
  if (maxval <= 0 || maxval > 65535) hdr.fail("maxval must be in [1, 65535]");
  if (width != height) {
    throw ParseError("non-square image '" + path.string() + "' (" + std::to_string(width) + "x" +
                     std::to_string(height) + ")");
  }
  const auto n = static_cast<std::size_t>(width);
  const double scale = static_cast<double>(maxval);
  std::vector<double> data(n * n);

  if (magic == "P5") {
    const std::size_t start = hdr.raster_start();
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    if (buf.size() < start + n * n * bytes) hdr.fail("truncated raster");
    for (std::size_t k = 0; k < n * n; ++k) {
      unsigned sample = 0;
      if (bytes == 1) {
        sample = static_cast<unsigned char>(buf[start + k]);
      } else {
        sample = (static_cast<unsigned>(static_cast<unsigned char>(buf[start + 2 * k])) << 8) |
                 static_cast<unsigned char>(buf[start + 2 * k + 1]);
      }
      if (sample > static_cast<unsigned>(maxval)) hdr.fail("sample exceeds maxval");
      data[k] = static_cast<double>(sample) / scale;
    }
  } else {
    for (std::size_t k = 0; k < n * n; ++k) {
      const long sample = hdr.number();
      if (sample < 0 || sample > maxval) hdr.fail("sample outside [0, maxval]");
      data[k] = static_cast<double>(sample) / scale;
    }
  }
  return ImageGrid(n, std::move(data));
}

unsigned char quantize_byte(double x) {
  const double c = std::clamp(x, 0.0, 1.0);
  return static_cast<unsigned char>(std::floor(255.0 * c + 0.5));
}

void write_image(const ImageGrid& grid, const fs::path& path) {
  if (!grid.all_finite()) throw InvalidArgument("write_image: grid is not finite");
  auto out = open_out(path);
  const std::size_t n = grid.n();
  out << "P5\n" << n << ' ' << n << "\n255\n";
  std::string raster(n * n, '\0');
  for (std::size_t k = 0; k < n * n; ++k) raster[k] = static_cast<char>(quantize_byte(grid.data()[k]));
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  finish(out, path);
}

void write_labels(const LabelMap& labels, int K, const fs::path& path) {
  if (K < 1) throw InvalidArgument("write_labels: K must be >= 1");
  ImageGrid g(labels.n());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const int l = labels.data()[k];
    if (l < 1 || l > K) throw InvalidArgument("write_labels: label outside [1, K]");
    g.data()[k] = static_cast<double>(l) / static_cast<double>(K);
  }
  write_image(g, path);
}

LabelMap read_labels(const fs::path& path, int K) {
  if (K < 1) throw InvalidArgument("read_labels: K must be >= 1");
  const ImageGrid g = read_image(path);
  LabelMap labels(g.n());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto l = static_cast<int>(std::lround(g.data()[k] * K));
    if (l < 1 || l > K) {
      throw ParseError("label image '" + path.string() + "' has value outside phases 1.." +
                       std::to_string(K));
    }
    labels.data()[k] = l;
  }
  return labels;
}

void write_float_grid(const ImageGrid& grid, const fs::path& path) {
  auto out = open_out(path);
  const std::size_t n = grid.n();
  std::string line;
  for (std::size_t i = 0; i < n; ++i) {
    line.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) line += ',';
      line += format_double(grid(i, j));
    }
    line += '\n';
    out << line;
  }
  finish(out, path);
}

ImageGrid read_float_grid(const fs::path& path) {
  const auto lines = split_lines(read_all(path));
  const std::size_t n = lines.size();
  if (n < 2) throw ParseError("float grid '" + path.string() + "' needs at least 2 rows");
  std::vector<double> data;
  data.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != n) {
      throw ParseError("float grid '" + path.string() + "': row " + std::to_string(i + 1) +
                       " has " + std::to_string(fields.size()) + " columns, expected " +
                       std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      try {
        data.push_back(parse_double(fields[j]));
      } catch (const ParseError&) {
        throw ParseError("float grid '" + path.string() + "': bad value at row " +
                         std::to_string(i + 1) + ", column " + std::to_string(j + 1));
      }
    }
  }
  return ImageGrid(n, std::move(data));
}

void write_trace(const IterationTrace& trace, const fs::path& path) {
  auto out = open_out(path);
  out << "k,F,increment,support_size,min_nonzero_grad,max_grad,inner_iters\n";
  for (const auto& r : trace) {
    out << r.k << ',' << format_double(r.energy) << ',' << format_double(r.increment) << ','
        << r.support_size << ',' << format_double(r.min_nonzero_grad) << ','
        << format_double(r.max_grad) << ',' << r.inner_iters << '\n';
  }
  finish(out, path);
}

IterationTrace read_trace(const fs::path& path) {
  const auto lines = split_lines(read_all(path));
  if (lines.empty() || lines[0] != "k,F,increment,support_size,min_nonzero_grad,max_grad,inner_iters") {
    throw ParseError("trace '" + path.string() + "' has a missing or wrong header");
  }
  IterationTrace trace;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_fields(lines[i]);
    if (f.size() != 7) {
      throw ParseError("trace '" + path.string() + "': row " + std::to_string(i) +
                       " has wrong column count");
    }
    TraceRow r;
    try {
      r.k = std::stoi(f[0]);
      r.energy = parse_double(f[1]);
      r.increment = parse_double(f[2]);
      r.support_size = static_cast<std::size_t>(std::stoull(f[3]));
      r.min_nonzero_grad = parse_double(f[4]);
      r.max_grad = parse_double(f[5]);
      r.inner_iters = std::stoi(f[6]);
    } catch (const std::exception&) {
      throw ParseError("trace '" + path.string() + "': bad value in row " + std::to_string(i));
    }
    trace.push_back(r);
  }
  return trace;
}

ImageGrid read_any_image(const fs::path& path) {
  if (path.extension() == ".csv") return read_float_grid(path);
  return read_image(path);
}

ImageGrid to_log_domain(const ImageGrid& g) {
  ImageGrid out(g.n());
  for (std::size_t k = 0; k < g.size(); ++k) {
    out.data()[k] = std::log(std::clamp(g.data()[k], kLogFloor, 1.0));
  }
  return out;
}

ImageGrid from_log_domain(const ImageGrid& g) {
  ImageGrid out(g.n());
  for (std::size_t k = 0; k < g.size(); ++k) out.data()[k] = std::exp(g.data()[k]);
  return out;
}

} // namespace nlseg
