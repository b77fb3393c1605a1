#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fracsum/appended.hpp"
#include "fracsum/expand.hpp"
#include "fracsum/sumspace.hpp"

namespace fracsum::cli {

/// Plain-text run configuration.
///
/// Grammar, one entry per line:
///   key = value      # trailing comments allowed
/// Blank lines and lines starting with '#' are skipped.  Keys are case
/// sensitive; unknown keys are rejected.  Later entries (and --set overrides)
/// replace earlier ones.
///
/// Lists are comma separated.  `intervals` is a list of a:b pairs, `degrees`
/// either one value (used for every interval) or one per interval.  Integer
/// lists such as `n_list` also accept first:last or first:last:step ranges.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig from_file(const std::filesystem::path& file);
  static RunConfig from_string(const std::string& text, const std::string& origin = "<string>");

  /// "key=value" override.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& def) const;
  double num(const std::string& key, double def) const;
  long integer(const std::string& key, long def) const;
  std::vector<int> int_list(const std::string& key, const std::string& def) const;

  /// Layout from `intervals` and `degrees`; `degree_override` >= 0 replaces every degree.
  LayoutPtr layout(int degree_override = -1, const std::string& def_intervals = "-5:-3,-3:-1,-1:1,1:3,3:5",
                   const std::string& def_degrees = "5") const;
  /// Appended spec from lambda/mu/eta/choice/method/W/N (W and N default per method).
  AppendedSpec appended(double lambda, double mu, double eta, AppendedChoice choice) const;
  /// Collocation grid from grid.* keys.
  CollocationGrid grid(const SumSpaceLayout& L, int per_interval, int per_flank, double eps, double lo,
                       double hi) const;

  /// Every key read so far with the value in effect (defaults included).
  const std::map<std::string, std::string>& effective() const noexcept { return used_; }
  /// Keys given explicitly.
  const std::map<std::string, std::string>& given() const noexcept { return values_; }

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> used_;
  const std::string& lookup(const std::string& key, const std::string& def) const;
};

/// Parses a double, rejecting trailing junk.
double parse_double(const std::string& s, const std::string& what);
long parse_long(const std::string& s, const std::string& what);

}  // namespace fracsum::cli
