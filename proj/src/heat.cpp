#include <chrono>

#include "fracsum/apps.hpp"
#include "fracsum/error.hpp"

namespace fracsum {

HeatSolver::HeatSolver(HeatConfig cfg) : cfg_(std::move(cfg)) {
  if (!cfg_.layout) throw ValidationError("heat: layout is required");
  if (!(cfg_.dt > 0) || !std::isfinite(cfg_.dt)) throw ValidationError("heat: dt must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  lambda_ = 1 / cfg_.dt;
  if (cfg_.grid.points.empty()) cfg_.grid = CollocationGrid::for_layout(*cfg_.layout, 5001, 501, 0.0, -20, 20);

  AppendedSpec spec = cfg_.appended;
  spec.lambda = lambda_;
  spec.mu = 0;
  spec.eta = 0;
  spec.choice = cfg_.choice;
  family_ = AppendedFamily::build(cfg_.layout, spec, cfg_.cache_dir);
  exps_ = expand_appended(*family_, cfg_.grid, cfg_.svd_tol);
  R_ = build_R(*cfg_.layout, exps_);
  B_ = build_B(*cfg_.layout, R_);
  solver_.emplace(build_Lplus(cfg_.layout, lambda_, 0, 0, cfg_.choice));
  setup_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> HeatSolver::warnings() const {
  std::vector<std::string> w = exps_.warnings;
  for (const auto& s : solver_->warnings()) w.push_back(s);
  for (const auto& b : family_->distinct())
    if (b->tail_flag()) w.push_back("appended FFT truncation estimate " + std::to_string(b->tail_estimate()));
  return w;
}

CoeffVec HeatSolver::initial(const RealFn& u0, double* rel_residual) const {
  const Expansion e = lsq_expand(u0, cfg_.layout, cfg_.grid, Space::Primal, nullptr, cfg_.svd_tol);
  if (rel_residual) *rel_residual = e.rel_residual;
  return initial(e.coeffs);
}

CoeffVec HeatSolver::initial(const CoeffVec& primal) const {
  if (primal.space != Space::Primal || !(*primal.layout == *cfg_.layout))
    throw ValidationError("heat: initial coefficients must be primal on the heat layout");
  const SumSpaceLayout& L = *cfg_.layout;
  CoeffVec u(Space::Appended, cfg_.layout);
  u.values[0] = primal.values[0];
  for (int k = 0; k < L.num_intervals(); ++k)
    for (int j = 0; j <= L.degree(k); ++j) {
      u.values[L.appended_W(k, j)] = primal.values[L.primal_W(k, j)];
      u.values[L.appended_Tt(k, j + 1)] = primal.values[L.primal_Tt(k, j + 1)];
    }
  return u;
}

CoeffVec heat_step(const CoeffVec& u, const BlockSolver& solver, const BandedOp& B, double lambda) {
  if (u.space != Space::Appended) throw ValidationError("heat_step: state must be appended coefficients");
  const CoeffVec f(Space::Dual, u.layout, lambda * B.apply(u.values));
  return solver.solve(f);
}

CoeffVec HeatSolver::step(const CoeffVec& u) const { return heat_step(u, *solver_, B_, lambda_); }

std::vector<CoeffVec> HeatSolver::run(const CoeffVec& u0, int steps) const {
  if (steps < 0) throw ValidationError("heat: steps must be >= 0");
  std::vector<CoeffVec> out{u0};
  out.reserve(steps + 1);
  for (int k = 0; k < steps; ++k) out.push_back(step(out.back()));
  return out;
}

Eigen::VectorXd HeatSolver::evaluate(const CoeffVec& u, std::span<const double> xs) const {
  return fracsum::evaluate(u, xs, family_.get());
}

std::vector<double> heat_error_grid() { return uniform_points(-20, 20, 0.01); }

}  // namespace fracsum
