#include "nlseg/output_set.hpp"

#include <system_error>

#include "nlseg/error.hpp"

namespace fs = std::filesystem;

namespace nlseg::cli {

OutputSet::OutputSet(std::string prefix) : prefix_(std::move(prefix)) {
  if (prefix_.empty()) throw InvalidArgument("output prefix must not be empty");
  std::error_code ec;
  if (prefix_.back() != '/' && fs::is_directory(prefix_, ec)) prefix_ += '/';
  const fs::path parent = fs::path(prefix_ + "x").parent_path();
  if (!parent.empty()) {
    fs::create_directories(parent, ec);
    if (ec) throw Error("cannot create output directory '" + parent.string() + "': " + ec.message());
  }
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& name : names_) fs::remove(prefix_ + name + ".part", ec);
}

fs::path OutputSet::stage(const std::string& name) {
  bool known = false;
  for (const auto& n : names_) known = known || n == name;
  if (!known) names_.push_back(name);
  return fs::path(prefix_ + name + ".part");
}

fs::path OutputSet::final_path(const std::string& name) const { return fs::path(prefix_ + name); }

void OutputSet::commit() {
  for (const auto& name : names_) {
    std::error_code ec;
    fs::rename(prefix_ + name + ".part", final_path(name), ec);
    if (ec) throw Error("cannot move output '" + final_path(name).string() + "' into place: " + ec.message());
  }
  committed_ = true;
}

} // namespace nlseg::cli
