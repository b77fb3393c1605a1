#include "fracsum/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "fracsum/error.hpp"

namespace fracsum {

namespace {

// Global dual index of local dual row r on interval k (-1: Ut_{-2} of a later interval).
int dual_row(const SumSpaceLayout& L, int k, int r) {
  if (r == 0) return k == 0 ? 0 : -1;
  const int j = (r - 1) / 2;
  return (r % 2 == 1) ? L.dual_V(k, j) : L.dual_Ut(k, j - 1);
}

// Global appended index (Full layout) of local primal column c on interval k.
int appended_col(const SumSpaceLayout& L, int k, int c) {
  if (c == 0) return k == 0 ? 0 : -1;
  const int j = (c - 1) / 2;
  return (c % 2 == 1) ? L.appended_W(k, j) : L.appended_Tt(k, j + 1);
}

// Dual rows hit by the four unit columns.
std::array<int, 4> slot_rows(const SumSpaceLayout& L, int k, AppendedChoice choice) {
  const int n = L.degree(k);
  if (choice == AppendedChoice::LowEnd) return {L.dual_V(k, 0), L.dual_Ut(k, -1), L.dual_V(k, 1), L.dual_Ut(k, 0)};
  return {L.dual_V(k, 0), L.dual_Ut(k, -1), L.dual_V(k, n + 2), L.dual_Ut(k, n + 1)};
}

}  // namespace

const char* to_string(SolveCase c) noexcept {
  switch (c) {
    case SolveCase::General: return "general";
    case SolveCase::ZeroAll: return "zero-all";
    case SolveCase::ZeroLMu: return "zero-lambda-mu";
    case SolveCase::ZeroLambda: return "zero-lambda";
  }
  return "?";
}

SolveCase classify(double lambda, double mu, double eta) noexcept {
  if (lambda != 0) return SolveCase::General;
  if (mu != 0) return SolveCase::ZeroLambda;
  return eta == 0 ? SolveCase::ZeroAll : SolveCase::ZeroLMu;
}

bool needs_appended(SolveCase c) noexcept {
  return c == SolveCase::General || c == SolveCase::ZeroLambda;
}

Eigen::MatrixXd LplusSystem::block_dense(int k) const {
  const auto& b = blocks.at(k);
  return op.to_dense().block(b.offset, b.offset, b.size, b.size);
}

LplusSystem build_Lplus(LayoutPtr layout, double lambda, double mu, double eta, AppendedChoice choice) {
  if (!layout) throw ValidationError("build_Lplus: null layout");
  if (!(std::isfinite(lambda) && std::isfinite(mu) && std::isfinite(eta)))
    throw ValidationError("build_Lplus: lambda, mu, eta must be finite");
  if (!layout->has_appended_slots())
    throw ValidationError("build_Lplus: layout must be the Full variant");
  const SumSpaceLayout& L = *layout;

  LplusSystem sys;
  sys.layout = layout;
  sys.lambda = lambda;
  sys.mu = mu;
  sys.eta = eta;
  sys.scase = classify(lambda, mu, eta);
  sys.choice = choice;
  const bool reduced = sys.scase == SolveCase::ZeroAll || sys.scase == SolveCase::ZeroLMu;
  const bool drop_global = sys.scase != SolveCase::General;
  sys.solution_layout =
      reduced ? std::make_shared<const SumSpaceLayout>(L.with_variant(LayoutVariant::ReducedNoAppend)) : layout;
  const SumSpaceLayout& S = *sys.solution_layout;

  std::vector<Eigen::Triplet<double>> trip;
  int offset = 0;
  for (int k = 0; k < L.num_intervals(); ++k) {
    const int n = L.degree(k);
    const Interval& I = L.interval(k);
    // Local L = lambda E + mu H + eta D + A, (2n+7) x (2n+3).
    Eigen::MatrixXd Lk = lambda * build_E(n).to_dense() + mu * build_H(n).to_dense() +
                         eta * build_D(n, I).to_dense() + build_A(n, I).to_dense();

    // Rows of this block, in dual order.
    std::vector<int> rows;
    if (k == 0 && !drop_global) rows.push_back(0);
    const int d0 = L.block_offset(Space::Dual, k), dn = L.block_size(Space::Dual, k);
    std::vector<int> removed_rows;
    if (reduced) removed_rows = {L.dual_V(k, 0), L.dual_Ut(k, -1), L.dual_V(k, n + 2), L.dual_Ut(k, n + 1)};
    for (int r = d0; r < d0 + dn; ++r)
      if (std::find(removed_rows.begin(), removed_rows.end(), r) == removed_rows.end()) rows.push_back(r);

    // Columns: global Tt0, four slots, then W/Tt in appended order.
    std::vector<int> cols;  // Full appended indices
    if (k == 0 && !drop_global) cols.push_back(0);
    if (!reduced)
      for (int s = 0; s < 4; ++s) cols.push_back(L.appended_slot(k, s));
    for (int j = 0; j <= n; ++j) {
      cols.push_back(L.appended_W(k, j));
      cols.push_back(L.appended_Tt(k, j + 1));
    }
    if (rows.size() != cols.size()) throw NumericalError("build_Lplus: block is not square");

    auto row_pos = [&](int g) {
      auto it = std::find(rows.begin(), rows.end(), g);
      return it == rows.end() ? -1 : static_cast<int>(it - rows.begin());
    };
    auto col_pos = [&](int g) {
      auto it = std::find(cols.begin(), cols.end(), g);
      return it == cols.end() ? -1 : static_cast<int>(it - cols.begin());
    };

    for (int c = 0; c < Lk.cols(); ++c) {
      const int gc = appended_col(L, k, c);
      if (gc < 0) continue;
      const int pc = col_pos(gc);
      if (pc < 0) continue;
      for (int r = 0; r < Lk.rows(); ++r) {
        if (Lk(r, c) == 0.0) continue;
        const int gr = dual_row(L, k, r);
        const int pr = gr < 0 ? -1 : row_pos(gr);
        if (pr < 0) continue;
        trip.emplace_back(offset + pr, offset + pc, Lk(r, c));
      }
    }
    if (!reduced) {
      const auto sr = slot_rows(L, k, choice);
      for (int s = 0; s < 4; ++s) {
        const int pr = row_pos(sr[s]);
        trip.emplace_back(offset + pr, offset + col_pos(L.appended_slot(k, s)), 1.0);
      }
    }

    for (int r : rows) sys.row_map.push_back(r);
    for (int c : cols) {
      if (!reduced) {
        sys.col_map.push_back(c);
        continue;
      }
      // Translate Full appended W/Tt positions into the reduced layout.
      int mapped = -1;
      for (int j = 0; j <= n && mapped < 0; ++j) {
        if (c == L.appended_W(k, j)) mapped = S.appended_W(k, j);
        if (c == L.appended_Tt(k, j + 1)) mapped = S.appended_Tt(k, j + 1);
      }
      sys.col_map.push_back(mapped);
    }
    sys.blocks.push_back({offset, static_cast<int>(rows.size())});
    offset += static_cast<int>(rows.size());
  }

  Eigen::SparseMatrix<double> M(offset, offset);
  M.setFromTriplets(trip.begin(), trip.end());
  M.prune(0.0);
  sys.op = BandedOp(offset, offset, OpTag::Lplus);
  for (const auto& b : sys.blocks) {
    sys.op.add_block(b.offset, b.offset, M.block(b.offset, b.offset, b.size, b.size));
  }
  return sys;
}

BlockSolver::BlockSolver(LplusSystem sys) : sys_(std::move(sys)) {
  const Eigen::MatrixXd full = sys_.op.to_dense();
  for (std::size_t k = 0; k < sys_.blocks.size(); ++k) {
    const auto& b = sys_.blocks[k];
    mats_.push_back(full.block(b.offset, b.offset, b.size, b.size));
    lu_.emplace_back(mats_.back());
    const double rc = lu_.back().rcond();
    rcond_.push_back(rc);
    if (!(rc > 1e-16)) {
      throw SingularBlock(static_cast<int>(k), "L+ block " + std::to_string(k) +
                                                   " is numerically singular (rcond " + std::to_string(rc) +
                                                   ", case " + to_string(sys_.scase) + ")");
    }
    if (rc < 1e-8) {
      warnings_.push_back("L+ block " + std::to_string(k) + " has condition estimate " + std::to_string(1 / rc) +
                          (sys_.choice == AppendedChoice::LowEnd ? "; consider the HighEnd appended choice" : ""));
    }
  }
  if (!mats_.empty() && !sys_.row_map.empty() && sys_.row_map[0] == 0 && sys_.col_map[0] == 0) {
    const Eigen::MatrixXd& M0 = mats_[0];
    const Eigen::Index s = M0.rows();
    if (s > 1 && M0(0, 0) != 0.0 && M0.row(0).tail(s - 1).isZero(0))
      global_split_.emplace(Eigen::MatrixXd(M0.bottomRightCorner(s - 1, s - 1)));
  }
  residuals_.assign(sys_.blocks.size(), 0.0);
}

Eigen::VectorXd BlockSolver::reduce_rhs(const CoeffVec& f) const {
  if (f.space != Space::Dual) throw ValidationError("solve: right-hand side must be in the dual space");
  if (!(*f.layout == *sys_.layout)) throw ValidationError("solve: right-hand side layout mismatch");
  Eigen::VectorXd r(sys_.size());
  for (int i = 0; i < sys_.size(); ++i) r[i] = f.values[sys_.row_map[i]];
  return r;
}

CoeffVec BlockSolver::expand_solution(const Eigen::VectorXd& u) const {
  CoeffVec out(Space::Appended, sys_.solution_layout);
  for (int i = 0; i < sys_.size(); ++i) out.values[sys_.col_map[i]] = u[i];
  return out;
}

CoeffVec BlockSolver::solve(const CoeffVec& f) const {
  const Eigen::VectorXd r = reduce_rhs(f);
  Eigen::VectorXd u(r.size());
  for (std::size_t k = 0; k < sys_.blocks.size(); ++k) {
    const auto& b = sys_.blocks[k];
    const Eigen::VectorXd rk = r.segment(b.offset, b.size);
    const Eigen::MatrixXd& Mk = mats_[k];
    Eigen::VectorXd uk(b.size);
    if (k == 0 && global_split_) {
      const Eigen::Index s = b.size - 1;
      uk[0] = rk[0] / Mk(0, 0);
      uk.tail(s) = global_split_->solve(Eigen::VectorXd(rk.tail(s) - Mk.col(0).tail(s) * uk[0]));
    } else {
      uk = lu_[k].solve(rk);
    }
    const double fn = rk.norm();
    residuals_[k] = fn > 0 ? (Mk * uk - rk).norm() / fn : (Mk * uk).norm();
    u.segment(b.offset, b.size) = uk;
  }
  return expand_solution(u);
}

CoeffVec BlockSolver::solve_monolithic(const CoeffVec& f) const {
  const Eigen::VectorXd r = reduce_rhs(f);
  Eigen::SparseMatrix<double> M = sys_.op.to_sparse();
  M.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw SingularBlock(-1, "monolithic L+ factorisation failed");
  return expand_solution(lu.solve(r));
}

double BlockSolver::condition(int k) const {
  const Eigen::MatrixXd& Mk = mats_.at(k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Mk);
  const auto& s = svd.singularValues();
  return s[s.size() - 1] > 0 ? s[0] / s[s.size() - 1] : INFINITY;
}

CoeffVec solve(LayoutPtr layout, double lambda, double mu, double eta, const CoeffVec& f, AppendedChoice choice) {
  return BlockSolver(build_Lplus(std::move(layout), lambda, mu, eta, choice)).solve(f);
}

AppendedExpansions expand_appended(const AppendedFamily& family, const CollocationGrid& grid, double svd_tol,
                                   double warn_tol) {
  const SumSpaceLayout& L = family.layout();
  const Eigen::MatrixXd G = build_lsq_matrix(L, grid, Space::Primal);
  const LsqFactor F(G, svd_tol);
  const Eigen::VectorXd w = grid.row_weights();
  AppendedExpansions out;
  for (int k = 0; k < L.num_intervals(); ++k) {
    std::array<Eigen::VectorXd, 4> ck;
    std::array<double, 4> rk{};
    for (int s = 0; s < 4; ++s) {
      Eigen::VectorXd b(static_cast<Eigen::Index>(grid.size()));
      for (std::size_t i = 0; i < grid.size(); ++i) b[i] = family.value(k, s, grid.points[i]);
      if (grid.weighting == RowWeighting::RiemannSum) b = b.cwiseProduct(w);
      const LsqResult r = F.solve(b);
      ck[s] = r.coeffs;
      rk[s] = r.rel_residual;
      if (r.rel_residual > warn_tol) {
        out.warnings.push_back("appended function (interval " + std::to_string(k) + ", slot " + std::to_string(s) +
                               ") expanded with relative residual " + std::to_string(r.rel_residual));
      }
    }
    out.coeffs.push_back(std::move(ck));
    out.rel_residuals.push_back(rk);
  }
  return out;
}

BandedOp build_R(const SumSpaceLayout& L, const AppendedExpansions& exps) {
  if (!L.has_appended_slots()) throw ValidationError("build_R: layout must be the Full variant");
  if (static_cast<int>(exps.coeffs.size()) != L.num_intervals())
    throw ValidationError("build_R: one expansion set per interval required");
  const int rows = L.dim(Space::Primal), cols = L.dim(Space::Appended);
  std::vector<Eigen::Triplet<double>> trip;
  trip.emplace_back(0, 0, 1.0);
  for (int k = 0; k < L.num_intervals(); ++k) {
    for (int j = 0; j <= L.degree(k); ++j) {
      trip.emplace_back(L.primal_W(k, j), L.appended_W(k, j), 1.0);
      trip.emplace_back(L.primal_Tt(k, j + 1), L.appended_Tt(k, j + 1), 1.0);
    }
    for (int s = 0; s < 4; ++s) {
      const Eigen::VectorXd& c = exps.coeffs[k][s];
      if (c.size() != rows) throw ValidationError("build_R: expansion length mismatch");
      for (int i = 0; i < rows; ++i)
        if (c[i] != 0.0) trip.emplace_back(i, L.appended_slot(k, s), c[i]);
    }
  }
  Eigen::SparseMatrix<double> R(rows, cols);
  R.setFromTriplets(trip.begin(), trip.end());
  BandedOp op(rows, cols, OpTag::R);
  op.add_block(0, 0, std::move(R));
  return op;
}

BandedOp build_B(const SumSpaceLayout& L, const BandedOp& R) {
  const Eigen::SparseMatrix<double> E = build_E(L).to_sparse();
  if (E.cols() != R.rows()) throw ValidationError("build_B: R does not map into the primal space of the layout");
  Eigen::SparseMatrix<double> B = E * R.to_sparse();
  B.prune(0.0);
  BandedOp op(static_cast<int>(B.rows()), static_cast<int>(B.cols()), OpTag::B);
  op.add_block(0, 0, std::move(B));
  return op;
}

}  // namespace fracsum
