#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracsum/sumspace.hpp"
#include "run_config.hpp"

namespace fracsum::cli {

/// Output directory plus the manifest describing the run.
class RunRecord {
 public:
  RunRecord(const std::string& command, const RunConfig& cfg);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  nlohmann::json& results() { return manifest_["results"]; }
  void add_file(const std::string& name, const std::string& description);
  void warn(const std::string& w);
  void warn_all(const std::vector<std::string>& ws);
  void add_cache_key(const std::string& key, const std::string& file);
  /// Writes manifest.json (config snapshot taken now).
  void finish();

 private:
  const RunConfig& cfg_;
  std::filesystem::path dir_;
  nlohmann::json manifest_;
};

/// Comma-separated table: a manifest reference comment, a header row, then rows
/// in %.16e.  The first `int_cols` columns are written as integers.
class CsvWriter {
 public:
  CsvWriter(RunRecord& rec, const std::string& name, const std::string& description,
            const std::vector<std::string>& header, int int_cols = 0);
  void row(const std::vector<double>& v);

 private:
  std::ofstream os_;
  std::string name_;
  std::size_t ncols_;
  int int_cols_;
};

/// Copies coefficients into a layout with the same intervals and degrees >=
/// those of `c` (missing entries are zero).  Works for the dual and appended spaces.
CoeffVec pad_to(const CoeffVec& c, LayoutPtr target);

void cmd_expand(const RunConfig& cfg);
void cmd_solve(const RunConfig& cfg);
void cmd_convergence(const RunConfig& cfg);
void cmd_heat(const RunConfig& cfg);
void cmd_wave(const RunConfig& cfg);
/// action: list, clear or warm.
void cmd_cache(const RunConfig& cfg, const std::string& action);

}  // namespace fracsum::cli
