#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nlseg::cli {

/// Collects a command's output files under temporary names and renames them
/// into place together on commit(), so a failed command leaves no partial
/// output set behind.
class OutputSet {
public:
  /// Output names are appended to `prefix` verbatim ("out/run_" + "u.csv").
  /// A prefix naming an existing directory, or ending in '/', is treated as
  /// that directory.
  explicit OutputSet(std::string prefix);
  ~OutputSet();

  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  /// Temporary path to write `name` to.
  std::filesystem::path stage(const std::string& name);
  /// Final path of `name`.
  std::filesystem::path final_path(const std::string& name) const;

  void commit();

private:
  std::string prefix_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

} // namespace nlseg::cli
