#include "run_config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fracsum/error.hpp"

namespace fracsum::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

double parse_double(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE)
    throw ValidationError("config: " + what + " = '" + s + "' is not a number");
  return v;
}

long parse_long(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE)
    throw ValidationError("config: " + what + " = '" + s + "' is not an integer");
  return v;
}

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "intervals", "degrees", "lambda", "mu", "eta", "choice", "method", "W", "N",
      "grid.per_interval", "grid.per_flank", "grid.eps", "grid.lo", "grid.hi", "grid.weighting",
      "svd_tol", "rhs", "space", "eval.lo", "eval.hi", "eval.step", "n_list", "metric", "nf",
      "dt", "steps", "ic", "snapshot_every", "omega_max", "d_omega", "output_dir", "cache_dir"};
  return keys;
}

RunConfig RunConfig::from_string(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ValidationError& e) {
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), file.string());
}

void RunConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("override '" + assignment + "' is not key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& k = known_keys();
  if (std::find(k.begin(), k.end(), key) == k.end()) throw ValidationError("unknown config key '" + key + "'");
  values_[key] = value;
}

const std::string& RunConfig::lookup(const std::string& key, const std::string& def) const {
  auto it = values_.find(key);
  const std::string& v = it == values_.end() ? def : it->second;
  used_[key] = v;
  return used_[key];
}

std::string RunConfig::str(const std::string& key, const std::string& def) const { return lookup(key, def); }

double RunConfig::num(const std::string& key, double def) const {
  std::ostringstream os;
  os.precision(17);
  os << def;
  return parse_double(lookup(key, os.str()), key);
}

long RunConfig::integer(const std::string& key, long def) const {
  return parse_long(lookup(key, std::to_string(def)), key);
}

std::vector<int> RunConfig::int_list(const std::string& key, const std::string& def) const {
  std::vector<int> out;
  const std::string v = lookup(key, def);
  if (trim(v).empty()) return out;
  for (const auto& item : split(v, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(static_cast<int>(parse_long(parts[0], key)));
    } else if (parts.size() == 2 || parts.size() == 3) {
      const long a = parse_long(parts[0], key), b = parse_long(parts[1], key);
      const long step = parts.size() == 3 ? parse_long(parts[2], key) : 1;
      if (step <= 0 || b < a) throw ValidationError("config: bad range '" + item + "' in " + key);
      for (long n = a; n <= b; n += step) out.push_back(static_cast<int>(n));
    } else {
      throw ValidationError("config: bad list item '" + item + "' in " + key);
    }
  }
  return out;
}

LayoutPtr RunConfig::layout(int degree_override, const std::string& def_intervals,
                            const std::string& def_degrees) const {
  std::vector<Interval> I;
  for (const auto& item : split(lookup("intervals", def_intervals), ',')) {
    if (item.empty()) continue;
    const auto ab = split(item, ':');
    if (ab.size() != 2) throw ValidationError("config: interval '" + item + "' is not a:b");
    I.emplace_back(parse_double(ab[0], "intervals"), parse_double(ab[1], "intervals"));
  }
  if (I.empty()) throw ValidationError("config: the interval list is empty");
  std::vector<int> n = int_list("degrees", def_degrees);
  if (degree_override >= 0) n.assign(I.size(), degree_override);
  if (n.size() == 1) n.assign(I.size(), n[0]);
  if (n.size() != I.size())
    throw ValidationError("config: " + std::to_string(n.size()) + " degrees for " + std::to_string(I.size()) +
                          " intervals");
  return std::make_shared<const SumSpaceLayout>(std::move(I), std::move(n));
}

AppendedSpec RunConfig::appended(double lambda, double mu, double eta, AppendedChoice choice) const {
  const AppendedMethod m = parse_appended_method(str("method", "fft"));
  AppendedSpec s = m == AppendedMethod::FFT ? AppendedSpec{} : AppendedSpec::quadrature_defaults(lambda, mu, eta);
  s.lambda = lambda;
  s.mu = mu;
  s.eta = eta;
  s.choice = choice;
  s.W = num("W", s.W);
  s.N = integer("N", s.N);
  return s;
}

CollocationGrid RunConfig::grid(const SumSpaceLayout& L, int per_interval, int per_flank, double eps, double lo,
                                double hi) const {
  const std::string w = str("grid.weighting", "identity");
  RowWeighting rw;
  if (w == "identity") rw = RowWeighting::Identity;
  else if (w == "riemann") rw = RowWeighting::RiemannSum;
  else throw ValidationError("config: grid.weighting must be identity or riemann");
  return CollocationGrid::for_layout(L, static_cast<int>(integer("grid.per_interval", per_interval)),
                                     static_cast<int>(integer("grid.per_flank", per_flank)),
                                     num("grid.eps", eps), num("grid.lo", lo), num("grid.hi", hi), rw);
}

}  // namespace fracsum::cli
