#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "fracsum/apps.hpp"
#include "fracsum/chebx.hpp"
#include "fracsum/error.hpp"
#include "fracsum/solver.hpp"

namespace fracsum::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

// ---------------------------------------------------------------- output

RunRecord::RunRecord(const std::string& command, const RunConfig& cfg) : cfg_(cfg) {
  dir_ = cfg.str("output_dir", "out");
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  manifest_["command"] = command;
  manifest_["files"] = json::array();
  manifest_["warnings"] = json::array();
  manifest_["cache"] = json::array();
  manifest_["results"] = json::object();
}

void RunRecord::add_file(const std::string& name, const std::string& description) {
  manifest_["files"].push_back({{"name", name}, {"description", description}});
}

void RunRecord::warn(const std::string& w) {
  std::cerr << "warning: " << w << "\n";
  manifest_["warnings"].push_back(w);
}

void RunRecord::warn_all(const std::vector<std::string>& ws) {
  for (const auto& w : ws) warn(w);
}

void RunRecord::add_cache_key(const std::string& key, const std::string& file) {
  for (const auto& e : manifest_["cache"])
    if (e["file"] == file) return;
  manifest_["cache"].push_back({{"key", key}, {"file", file}});
}

void RunRecord::finish() {
  manifest_["config"] = cfg_.effective();
  const fs::path file = dir_ / "manifest.json";
  std::ofstream os(file);
  if (!os) throw IoError("cannot write " + file.string());
  os << manifest_.dump(2) << "\n";
  if (!os) throw IoError("write failed: " + file.string());
}

CsvWriter::CsvWriter(RunRecord& rec, const std::string& name, const std::string& description,
                     const std::vector<std::string>& header, int int_cols)
    : name_(name), ncols_(header.size()), int_cols_(int_cols) {
  const fs::path file = rec.dir() / name;
  os_.open(file);
  if (!os_) throw IoError("cannot write " + file.string());
  os_ << "# manifest: manifest.json\n";
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << "\n";
  rec.add_file(name, description);
}

void CsvWriter::row(const std::vector<double>& v) {
  if (v.size() != ncols_) throw Error("csv " + name_ + ": row has the wrong number of columns");
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (static_cast<int>(i) < int_cols_) std::snprintf(buf, sizeof buf, "%lld", std::llround(v[i]));
    else std::snprintf(buf, sizeof buf, "%.16e", v[i]);
    os_ << (i ? "," : "") << buf;
  }
  os_ << "\n";
  if (!os_) throw IoError("write failed: " + name_);
}

// ---------------------------------------------------------------- helpers

CoeffVec pad_to(const CoeffVec& c, LayoutPtr target) {
  const SumSpaceLayout& S = *c.layout;
  const SumSpaceLayout& T = *target;
  if (S.intervals() != T.intervals() || S.variant() != T.variant())
    throw ValidationError("pad_to: layouts differ in intervals or variant");
  CoeffVec out(c.space, target);
  out.values[0] = c.values[0];
  for (int k = 0; k < S.num_intervals(); ++k) {
    const int n = S.degree(k);
    if (T.degree(k) < n) throw ValidationError("pad_to: target degree is smaller");
    switch (c.space) {
      case Space::Dual:
        for (int j = 0; j <= n + 2; ++j) out.values[T.dual_V(k, j)] = c.values[S.dual_V(k, j)];
        for (int j = -1; j <= n + 1; ++j) out.values[T.dual_Ut(k, j)] = c.values[S.dual_Ut(k, j)];
        break;
      case Space::Appended:
        if (S.has_appended_slots())
          for (int s = 0; s < 4; ++s) out.values[T.appended_slot(k, s)] = c.values[S.appended_slot(k, s)];
        for (int j = 0; j <= n; ++j) {
          out.values[T.appended_W(k, j)] = c.values[S.appended_W(k, j)];
          out.values[T.appended_Tt(k, j + 1)] = c.values[S.appended_Tt(k, j + 1)];
        }
        break;
      case Space::Primal:
        for (int j = 0; j <= n; ++j) {
          out.values[T.primal_W(k, j)] = c.values[S.primal_W(k, j)];
          out.values[T.primal_Tt(k, j + 1)] = c.values[S.primal_Tt(k, j + 1)];
        }
        break;
    }
  }
  return out;
}

namespace {

using clk = std::chrono::steady_clock;
double seconds_since(clk::time_point t) { return std::chrono::duration<double>(clk::now() - t).count(); }

struct Rhs {
  std::string name;
  RealFn f;
  bool manufactured = false;
  ManufacturedCase kind = ManufacturedCase::Helmholtz;
  double flank = 25;
  std::vector<double> file_x, file_f;  // rhs = file:<path>
  bool from_file() const { return !file_x.empty(); }
};

Rhs read_rhs(const RunConfig& cfg, const std::string& def) {
  Rhs r;
  r.name = cfg.str("rhs", def);
  if (r.name == "manufactured_helmholtz" || r.name == "manufactured_full") {
    r.manufactured = true;
    r.kind = r.name == "manufactured_full" ? ManufacturedCase::Full : ManufacturedCase::Helmholtz;
    const auto kind = r.kind;
    r.f = [kind](double x) { return manufactured_rhs(kind, x); };
  } else if (r.name == "indicator") {
    r.f = indicator_pm1;
    r.flank = 10;
  } else if (r.name == "arcsine") {
    r.f = arcsine_rhs;
    r.flank = 10;
  } else if (r.name.rfind("file:", 0) == 0) {
    const fs::path p = r.name.substr(5);
    std::ifstream in(p);
    if (!in) throw IoError("cannot read samples file " + p.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::stringstream ss(line);
      std::string a, b;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) throw IoError(p.string() + ": expected x,f rows");
      try {
        r.file_x.push_back(parse_double(a, "x"));
        r.file_f.push_back(parse_double(b, "f"));
      } catch (const ValidationError&) {
        if (r.file_x.empty() && r.file_f.empty()) continue;  // header row
        throw IoError(p.string() + ": bad row '" + line + "'");
      }
    }
    if (r.file_x.size() < 2) throw IoError(p.string() + ": fewer than two samples");
    std::vector<std::size_t> idx(r.file_x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return r.file_x[i] < r.file_x[j]; });
    std::vector<double> x, f;
    for (auto i : idx) {
      x.push_back(r.file_x[i]);
      f.push_back(r.file_f[i]);
    }
    r.file_x = std::move(x);
    r.file_f = std::move(f);
  } else {
    throw ValidationError("unknown rhs '" + r.name +
                          "' (manufactured_helmholtz, manufactured_full, indicator, arcsine or file:<path>)");
  }
  return r;
}

Space parse_space(const std::string& s) {
  if (s == "primal") return Space::Primal;
  if (s == "dual") return Space::Dual;
  throw ValidationError("space must be primal or dual, got '" + s + "'");
}

Expansion expand_rhs(const RunConfig& cfg, const Rhs& rhs, LayoutPtr L, Space space) {
  const double svd_tol = cfg.num("svd_tol", 1e-14);
  if (rhs.from_file()) {
    CollocationGrid g;
    g.points = rhs.file_x;
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.file_f.data(), rhs.file_f.size());
    return lsq_expand_samples(b, L, g, space, nullptr, svd_tol);
  }
  const double eps = space == Space::Dual ? 1e-2 : 0.0;
  const auto grid = cfg.grid(*L, 6001, 6001, eps, -rhs.flank, rhs.flank);
  return lsq_expand(rhs.f, L, grid, space, nullptr, svd_tol);
}

std::vector<double> eval_points(const RunConfig& cfg, double lo, double hi, double step) {
  return uniform_points(cfg.num("eval.lo", lo), cfg.num("eval.hi", hi), cfg.num("eval.step", step));
}

// Drops interval endpoints, where dual functions are singular.
std::vector<double> without_endpoints(const std::vector<double>& xs, const SumSpaceLayout& L) {
  std::vector<double> out;
  for (double x : xs) {
    bool hit = false;
    for (const auto& I : L.intervals()) hit = hit || std::abs(x - I.a()) < 1e-12 || std::abs(x - I.b()) < 1e-12;
    if (!hit) out.push_back(x);
  }
  return out;
}

struct Params {
  double lambda, mu, eta;
  AppendedChoice choice;
};

Params read_params(const RunConfig& cfg, const Rhs& rhs) {
  std::array<double, 3> d{1, 0, 0};
  if (rhs.manufactured) d = manufactured_params(rhs.kind);
  Params p{cfg.num("lambda", d[0]), cfg.num("mu", d[1]), cfg.num("eta", d[2]),
           parse_appended_choice(cfg.str("choice", "highend"))};
  return p;
}

bool exact_available(const Rhs& rhs, const Params& p) {
  if (!rhs.manufactured) return false;
  const auto d = manufactured_params(rhs.kind);
  return p.lambda == d[0] && p.mu == d[1] && p.eta == d[2];
}

std::shared_ptr<const AppendedFamily> family_for(const RunConfig& cfg, RunRecord& rec, LayoutPtr L,
                                                 const Params& p) {
  if (!needs_appended(classify(p.lambda, p.mu, p.eta))) return nullptr;
  const AppendedSpec spec = cfg.appended(p.lambda, p.mu, p.eta, p.choice);
  auto fam = AppendedFamily::build(L, spec, cfg.str("cache_dir", ""));
  for (const auto& b : fam->distinct()) {
    rec.add_cache_key(b->spec().key(), cache_filename(b->spec()));
    if (b->tail_flag())
      rec.warn("appended FFT truncation estimate " + std::to_string(b->tail_estimate()) + " for width " +
               std::to_string(b->spec().width));
  }
  return fam;
}

struct Solved {
  Expansion f;
  CoeffVec u;
  std::vector<double> rcond, residuals;
  std::vector<std::string> warnings;
};

Solved solve_with(const Expansion& f, LayoutPtr L, const Params& p) {
  BlockSolver S(build_Lplus(L, p.lambda, p.mu, p.eta, p.choice));
  CoeffVec u = S.solve(f.coeffs);
  return Solved{f, std::move(u), S.rcond(), S.last_residuals(), S.warnings()};
}

double sup_error(const Eigen::VectorXd& v, const std::vector<double>& xs, const RealFn& exact) {
  double e = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    e = std::max(e, std::abs(v[static_cast<Eigen::Index>(i)] - exact(xs[i])));
  return e;
}

void write_coeffs(RunRecord& rec, const std::string& name, const CoeffVec& c, const std::string& what) {
  CsvWriter w(rec, name, what, {"index", "value"}, 1);
  for (Eigen::Index i = 0; i < c.values.size(); ++i) w.row({static_cast<double>(i), c.values[i]});
}

int find_unit_interval(const SumSpaceLayout& L) {
  for (int k = 0; k < L.num_intervals(); ++k)
    if (L.interval(k).a() == -1 && L.interval(k).b() == 1) return k;
  return -1;
}

}  // namespace

// ---------------------------------------------------------------- commands

void cmd_expand(const RunConfig& cfg) {
  RunRecord rec("expand", cfg);
  const Rhs rhs = read_rhs(cfg, "manufactured_helmholtz");
  const Space space = parse_space(cfg.str("space", "dual"));
  const std::vector<int> ns = cfg.int_list("n_list", "");
  std::vector<LayoutPtr> layouts;
  if (ns.empty()) layouts.push_back(cfg.layout());
  for (int n : ns) layouts.push_back(cfg.layout(n));

  std::vector<double> xs = eval_points(cfg, -5, 5, 0.01);
  CsvWriter trace(rec, "norms.csv", "per degree: lsq residuals, coefficient sup-norm, sup error on the evaluation grid",
                  {"n", "rank", "rel_residual", "coeff_norm_inf", "sup_error"}, 2);
  for (std::size_t i = 0; i < layouts.size(); ++i) {
    const LayoutPtr L = layouts[i];
    const Expansion e = expand_rhs(cfg, rhs, L, space);
    const auto pts = space == Space::Dual ? without_endpoints(xs, *L) : xs;
    const Eigen::VectorXd v = evaluate(e.coeffs, pts);
    double err = NAN;
    if (!rhs.from_file()) err = sup_error(v, pts, rhs.f);
    trace.row({static_cast<double>(L->degree(0)), static_cast<double>(e.rank), e.rel_residual, e.coeff_norm_inf, err});
    std::cout << "n = " << L->degree(0) << ": rel residual " << e.rel_residual << ", |c|_inf " << e.coeff_norm_inf
              << ", sup error " << err << "\n";
    if (i + 1 == layouts.size()) {
      write_coeffs(rec, "coefficients.csv", e.coeffs, std::string(to_string(space)) + " coefficients");
      CsvWriter s(rec, "samples.csv", "f and its expansion on the evaluation grid", {"x", "f", "approx"});
      for (std::size_t j = 0; j < pts.size(); ++j)
        s.row({pts[j], rhs.from_file() ? NAN : rhs.f(pts[j]), v[static_cast<Eigen::Index>(j)]});
      // Self-check: re-evaluating on the collocation points gives back the reported residual.
      if (rhs.from_file()) {
        const Eigen::VectorXd g = evaluate(e.coeffs, rhs.file_x);
        const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.file_f.data(), rhs.file_f.size());
        rec.results()["grid_residual_recomputed"] = (g - b).norm();
      }
      rec.results()["n"] = L->degree(0);
      rec.results()["space"] = to_string(space);
      rec.results()["residual"] = e.residual;
      rec.results()["rel_residual"] = e.rel_residual;
      rec.results()["rank"] = e.rank;
      rec.results()["coeff_norm_inf"] = e.coeff_norm_inf;
      rec.results()["sup_error"] = err;
    }
  }
  rec.finish();
}

void cmd_solve(const RunConfig& cfg) {
  RunRecord rec("solve", cfg);
  const Rhs rhs = read_rhs(cfg, "manufactured_helmholtz");
  const Params p = read_params(cfg, rhs);
  const LayoutPtr L = cfg.layout();
  const Solved s = solve_with(expand_rhs(cfg, rhs, L, Space::Dual), L, p);
  rec.warn_all(s.warnings);
  const auto fam = family_for(cfg, rec, L, p);
  const auto xs = eval_points(cfg, -5, 5, 0.01);
  const Eigen::VectorXd v = evaluate(s.u, xs, fam.get());
  const bool exact = exact_available(rhs, p);

  write_coeffs(rec, "rhs.csv", s.f.coeffs, "dual coefficients of f");
  write_coeffs(rec, "solution.csv", s.u, "appended coefficients of u");
  CsvWriter w(rec, "values.csv", "u on the evaluation grid", {"x", "u", "exact"});
  for (std::size_t i = 0; i < xs.size(); ++i)
    w.row({xs[i], v[static_cast<Eigen::Index>(i)], exact ? manufactured_exact(xs[i]) : NAN});

  auto& r = rec.results();
  r["case"] = to_string(classify(p.lambda, p.mu, p.eta));
  r["rhs_rel_residual"] = s.f.rel_residual;
  r["block_rcond"] = s.rcond;
  r["block_residuals"] = s.residuals;
  if (exact) {
    r["sup_error"] = sup_error(v, xs, manufactured_exact);
    std::cout << "sup error " << r["sup_error"].get<double>() << "\n";
  }
  std::cout << "solved " << L->num_intervals() << " blocks, rhs rel residual " << s.f.rel_residual << "\n";
  rec.finish();
}

void cmd_convergence(const RunConfig& cfg) {
  RunRecord rec("convergence", cfg);
  const std::vector<int> ns = cfg.int_list("n_list", "");
  if (ns.empty()) throw ValidationError("convergence: n_list is empty");
  const std::string metric = cfg.str("metric", "sup");
  const Rhs rhs = read_rhs(cfg, "manufactured_helmholtz");
  const auto xs = eval_points(cfg, -5, 5, 0.01);
  auto& res = rec.results();
  res["metric"] = metric;

  if (metric == "sup") {
    const Params p = read_params(cfg, rhs);
    if (!exact_available(rhs, p))
      throw ValidationError("convergence: metric sup needs a manufactured rhs with its own lambda, mu, eta");
    CsvWriter w(rec, "convergence.csv", "sup error against the exact solution per degree",
                {"n", "error", "rhs_rel_residual"}, 1);
    for (int n : ns) {
      const LayoutPtr L = cfg.layout(n);
      const Solved s = solve_with(expand_rhs(cfg, rhs, L, Space::Dual), L, p);
      rec.warn_all(s.warnings);
      const auto fam = family_for(cfg, rec, L, p);
      const double e = sup_error(evaluate(s.u, xs, fam.get()), xs, manufactured_exact);
      w.row({static_cast<double>(n), e, s.f.rel_residual});
      std::cout << "n = " << n << ": error " << e << "\n";
    }
  } else if (metric == "sup_dual") {
    CsvWriter w(rec, "convergence.csv", "sup error of the dual expansion of f, interval endpoints excluded",
                {"n", "error", "coeff_norm_inf"}, 1);
    if (rhs.from_file()) throw ValidationError("convergence: sup_dual needs a built-in rhs");
    for (int n : ns) {
      const LayoutPtr L = cfg.layout(n);
      const Expansion e = expand_rhs(cfg, rhs, L, Space::Dual);
      const auto pts = without_endpoints(xs, *L);
      const double err = sup_error(evaluate(e.coeffs, pts), pts, rhs.f);
      w.row({static_cast<double>(n), err, e.coeff_norm_inf});
      std::cout << "n = " << n << ": error " << err << "\n";
    }
  } else if (metric == "coeff_diff") {
    const Params p = read_params(cfg, rhs);
    const int nf = static_cast<int>(cfg.integer("nf", 11));
    const LayoutPtr Lf = cfg.layout(nf);
    const Expansion f = expand_rhs(cfg, rhs, Lf, Space::Dual);
    res["nf"] = nf;
    res["rhs_rel_residual"] = f.rel_residual;
    std::map<int, CoeffVec> sol;
    auto solution = [&](int n) -> const CoeffVec& {
      auto it = sol.find(n);
      if (it != sol.end()) return it->second;
      const LayoutPtr L = cfg.layout(n);
      BlockSolver S(build_Lplus(L, p.lambda, p.mu, p.eta, p.choice));
      rec.warn_all(S.warnings());
      return sol.emplace(n, S.solve(pad_to(f.coeffs, L))).first->second;
    };
    CsvWriter w(rec, "convergence.csv", "2-norm difference of solution coefficients at degrees n and n-2",
                {"n", "coeff_diff"}, 1);
    for (int n : ns) {
      if (n - 2 < nf) throw ValidationError("convergence: coeff_diff needs every n >= nf + 2");
      const CoeffVec& a = solution(n);
      const CoeffVec& b = solution(n - 2);
      const auto target = std::make_shared<const SumSpaceLayout>(a.layout->intervals(), a.layout->degrees(),
                                                                 b.layout->variant());
      const double d = (a.values - pad_to(b, target).values).norm();
      w.row({static_cast<double>(n), d});
      std::cout << "n = " << n << ": |u_n - u_{n-2}| = " << d << "\n";
    }
  } else {
    throw ValidationError("convergence: metric must be sup, sup_dual or coeff_diff");
  }
  rec.finish();
}

void cmd_heat(const RunConfig& cfg) {
  RunRecord rec("heat", cfg);
  HeatConfig hc;
  hc.layout = cfg.layout();
  hc.dt = cfg.num("dt", 1e-2);
  if (!(hc.dt > 0)) throw ValidationError("heat: dt must be positive");
  hc.choice = parse_appended_choice(cfg.str("choice", "lowend"));
  hc.appended = cfg.appended(1 / hc.dt, 0, 0, hc.choice);
  hc.cache_dir = cfg.str("cache_dir", "");
  hc.grid = cfg.grid(*hc.layout, 5001, 501, 0, -20, 20);
  hc.svd_tol = cfg.num("svd_tol", 1e-14);
  const int steps = static_cast<int>(cfg.integer("steps", 100));
  const int every = static_cast<int>(cfg.integer("snapshot_every", 10));
  if (steps < 0 || every < 1) throw ValidationError("heat: need steps >= 0 and snapshot_every >= 1");
  const std::string ic = cfg.str("ic", "rational");

  HeatSolver H(hc);
  rec.warn_all(H.warnings());
  for (const auto& b : H.family().distinct()) rec.add_cache_key(b->spec().key(), cache_filename(b->spec()));

  CoeffVec u0(Space::Appended, hc.layout);
  double ic_res = 0;
  if (ic == "rational") {
    u0 = H.initial(heat_ic_rational, &ic_res);
  } else if (ic == "w0") {
    const int k = find_unit_interval(*hc.layout);
    if (k < 0) throw ValidationError("heat: ic = w0 needs [-1, 1] among the intervals");
    CoeffVec p(Space::Primal, hc.layout);
    p.values[hc.layout->primal_W(k, 0)] = 1;
    u0 = H.initial(p);
  } else {
    throw ValidationError("heat: ic must be rational or w0");
  }
  const auto t0 = clk::now();
  const auto hist = H.run(u0, steps);
  const double run_s = seconds_since(t0);

  const auto xs = eval_points(cfg, -20, 20, 0.01);
  std::vector<int> ks;
  for (int k = 0; k <= steps; k += every) ks.push_back(k);
  if (ks.back() != steps) ks.push_back(steps);
  std::vector<std::vector<double>> ref(ks.size());
  if (ic == "w0") {
    std::vector<int> pos;
    for (int k : ks)
      if (k > 0) pos.push_back(k);
    const auto r = pos.empty() ? std::vector<std::vector<double>>{} : heat_w0_reference(xs, H.lambda(), pos);
    std::size_t j = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (ks[i] == 0) {
        for (double x : xs) ref[i].push_back(eval_W(0, x));
      } else {
        ref[i] = r[j++];
      }
    }
  } else {
    for (std::size_t i = 0; i < ks.size(); ++i)
      for (double x : xs) ref[i].push_back(heat_exact(x, ks[i] * hc.dt));
  }

  CsvWriter err(rec, "errors.csv", "sup error on the evaluation grid per snapshot", {"step", "t", "error"}, 1);
  CsvWriter snap(rec, "snapshots.csv", "u and the reference per snapshot", {"step", "t", "x", "u", "reference"}, 1);
  double last = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const Eigen::VectorXd v = H.evaluate(hist[ks[i]], xs);
    double e = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double vj = v[static_cast<Eigen::Index>(j)];
      e = std::max(e, std::abs(vj - ref[i][j]));
      snap.row({static_cast<double>(ks[i]), ks[i] * hc.dt, xs[j], vj, ref[i][j]});
    }
    err.row({static_cast<double>(ks[i]), ks[i] * hc.dt, e});
    last = e;
  }
  auto& r = rec.results();
  r["lambda"] = H.lambda();
  r["setup_seconds"] = H.setup_seconds();
  r["steps_seconds"] = run_s;
  r["ic_rel_residual"] = ic_res;
  r["final_error"] = last;
  std::cout << steps << " steps in " << run_s << " s (setup " << H.setup_seconds() << " s), error at t = "
            << steps * hc.dt << ": " << last << "\n";
  rec.finish();
}

void cmd_wave(const RunConfig& cfg) {
  RunRecord rec("wave", cfg);
  WaveConfig wc;
  wc.layout = cfg.layout(-1, "-1:1", "7");
  wc.omega_max = cfg.num("omega_max", 20);
  wc.d_omega = cfg.num("d_omega", 0.1);
  wc.choice = parse_appended_choice(cfg.str("choice", "highend"));
  wc.appended = cfg.appended(0, 1, 0, wc.choice);
  wc.cache_dir = cfg.str("cache_dir", "");
  wc.xs = eval_points(cfg, -5, 5, 0.05);
  const auto t0 = clk::now();
  const WaveResult r = wave_solve(wc);
  rec.warn_all(r.warnings);

  CsvWriter uh(rec, "uhat.csv", "frequency-domain solution", {"omega", "x", "uhat"});
  for (Eigen::Index i = 0; i < r.uhat.rows(); ++i)
    for (Eigen::Index j = 0; j < r.uhat.cols(); ++j) uh.row({r.omegas[i], r.xs[j], r.uhat(i, j)});
  CsvWriter u(rec, "u.csv", "time-domain solution", {"t", "x", "u"});
  for (Eigen::Index i = 0; i < r.u.rows(); ++i)
    for (Eigen::Index j = 0; j < r.u.cols(); ++j) u.row({r.times[i], r.xs[j], r.u(i, j)});

  auto& res = rec.results();
  res["frequencies"] = r.omegas.size();
  res["max_imag_rel"] = r.max_imag_rel;
  res["interpolated"] = r.interpolated;
  res["seconds"] = seconds_since(t0);
  std::cout << r.omegas.size() << " frequencies, max |Im u|/max |u| = " << r.max_imag_rel << "\n";
  rec.finish();
}

void cmd_cache(const RunConfig& cfg, const std::string& action) {
  const fs::path dir = cfg.str("cache_dir", "");
  if (dir.empty()) throw ValidationError("cache: cache_dir is not set");
  if (action == "list" || action == "clear") {
    if (!fs::exists(dir)) return;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".fspc") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      if (action == "list") {
        std::cout << f.filename().string() << " " << fs::file_size(f) << "\n";
      } else {
        std::error_code ec;
        fs::remove(f, ec);
        if (ec) throw IoError("cannot remove " + f.string() + ": " + ec.message());
      }
    }
    return;
  }
  if (action == "warm") {
    const LayoutPtr L = cfg.layout();
    const Params p{cfg.num("lambda", 1), cfg.num("mu", 0), cfg.num("eta", 0),
                   parse_appended_choice(cfg.str("choice", "highend"))};
    const auto fam = AppendedFamily::build(L, cfg.appended(p.lambda, p.mu, p.eta, p.choice), dir);
    for (const auto& b : fam->distinct()) std::cout << cache_filename(b->spec()) << "\n";
    return;
  }
  throw ValidationError("cache: action must be list, clear or warm");
}

}  // namespace fracsum::cli
