#include "fracsum/apps.hpp"
#include "fracsum/error.hpp"

namespace fracsum {

ManufacturedResult solve_manufactured(const ManufacturedConfig& cfg) {
  const auto p = manufactured_params(cfg.kind);
  AppendedSpec spec = cfg.appended;
  spec.lambda = p[0];
  spec.mu = p[1];
  spec.eta = p[2];
  spec.choice = cfg.choice;
  const auto family = AppendedFamily::build(five_interval_layout(cfg.n), spec, cfg.cache_dir);
  return solve_manufactured(cfg, *family);
}

ManufacturedResult solve_manufactured(const ManufacturedConfig& cfg, const AppendedFamily& family) {
  const LayoutPtr L = family.layout_ptr();
  const auto p = manufactured_params(cfg.kind);
  for (const auto& b : family.distinct()) {
    const auto& s = b->spec();
    if (s.lambda != p[0] || s.mu != p[1] || s.eta != p[2] || s.choice != cfg.choice)
      throw ValidationError("manufactured: appended family was built for different parameters");
  }
  const auto grid = CollocationGrid::for_layout(*L, 6001, 6001, 1e-2, -25, 25);
  Expansion f = lsq_expand([&](double x) { return manufactured_rhs(cfg.kind, x); }, L, grid, Space::Dual,
                           nullptr, cfg.svd_tol);
  BlockSolver S(build_Lplus(L, p[0], p[1], p[2], cfg.choice));
  CoeffVec u = S.solve(f.coeffs);

  const auto xs = uniform_points(-5, 5, 0.01);
  const Eigen::VectorXd ux = evaluate(u, xs, &family);
  double err = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    err = std::max(err, std::abs(ux[static_cast<Eigen::Index>(i)] - manufactured_exact(xs[i])));
  ManufacturedResult r{L->degree(0), err, f.rel_residual, std::move(f.coeffs), std::move(u), S.warnings()};
  return r;
}

}  // namespace fracsum
