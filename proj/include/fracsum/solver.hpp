#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fracsum/appended.hpp"
#include "fracsum/expand.hpp"
#include "fracsum/sumspace.hpp"

namespace fracsum {

enum class SolveCase { General, ZeroAll, ZeroLMu, ZeroLambda };

const char* to_string(SolveCase c) noexcept;
/// Exact-zero tests on the inputs as given.
SolveCase classify(double lambda, double mu, double eta) noexcept;
/// True when the case needs the four appended functions per interval.
bool needs_appended(SolveCase c) noexcept;

/// The square system L+ u+ = f after the case-dependent row/column removal.
///
/// Rows are dual-space indices of `layout`; columns are appended-space indices
/// of `solution_layout` (equal to `layout` except for ZeroAll/ZeroLMu, where it
/// is the ReducedNoAppend variant).  `blocks` lists the square diagonal blocks
/// in reduced numbering, one per interval.
struct LplusSystem {
  LayoutPtr layout;
  LayoutPtr solution_layout;
  double lambda = 0, mu = 0, eta = 0;
  SolveCase scase = SolveCase::General;
  AppendedChoice choice = AppendedChoice::LowEnd;
  BandedOp op{0, 0, OpTag::Lplus};
  std::vector<int> row_map;  // reduced row -> dual index
  std::vector<int> col_map;  // reduced column -> appended index in solution_layout
  struct Block {
    int offset;
    int size;
  };
  std::vector<Block> blocks;

  int size() const noexcept { return static_cast<int>(row_map.size()); }
  Eigen::MatrixXd block_dense(int k) const;
};

LplusSystem build_Lplus(LayoutPtr layout, double lambda, double mu, double eta,
                        AppendedChoice choice = AppendedChoice::LowEnd);

/// Per-interval LU factorisations of L+.
class BlockSolver {
 public:
  explicit BlockSolver(LplusSystem sys);

  /// Appended-space coefficients (in sys.solution_layout) of the solution for a
  /// dual-space right-hand side.  Dual entries dropped by the case reduction are
  /// ignored.
  CoeffVec solve(const CoeffVec& f) const;
  /// Same system solved in one sparse LU over the whole block-diagonal matrix.
  CoeffVec solve_monolithic(const CoeffVec& f) const;

  const LplusSystem& system() const noexcept { return sys_; }
  /// ||L_k u_k - f_k|| / ||f_k|| of the last solve, per block.
  const std::vector<double>& last_residuals() const noexcept { return residuals_; }
  /// Reciprocal condition estimates from the LU factors, per block.
  const std::vector<double>& rcond() const noexcept { return rcond_; }
  /// 2-norm condition number of block k from its singular values.
  double condition(int k) const;
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  Eigen::VectorXd reduce_rhs(const CoeffVec& f) const;
  CoeffVec expand_solution(const Eigen::VectorXd& u) const;

  LplusSystem sys_;
  std::vector<Eigen::MatrixXd> mats_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  // Block 0 without the global row/column, when the global row holds only its
  // diagonal (solved first, then the interval part).
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> global_split_;
  std::vector<double> rcond_;
  mutable std::vector<double> residuals_;
  std::vector<std::string> warnings_;
};

/// One-shot convenience: build, factorise, solve.
CoeffVec solve(LayoutPtr layout, double lambda, double mu, double eta, const CoeffVec& f,
               AppendedChoice choice = AppendedChoice::LowEnd);

/// Primal-space expansions of the 4K appended functions of a family.
struct AppendedExpansions {
  std::vector<std::array<Eigen::VectorXd, 4>> coeffs;  // per interval, per slot
  std::vector<std::array<double, 4>> rel_residuals;
  std::vector<std::string> warnings;
};

/// Least-squares expansions on `grid` (one factorisation shared by all 4K
/// functions).  Residuals above `warn_tol` add a warning.
AppendedExpansions expand_appended(const AppendedFamily& family, const CollocationGrid& grid,
                                   double svd_tol = 1e-14, double warn_tol = 1e-6);

/// R: appended -> primal, identity on the primal entries plus the expansion
/// columns at the appended slots.
BandedOp build_R(const SumSpaceLayout& layout, const AppendedExpansions& exps);
/// B = E R: appended -> dual.
BandedOp build_B(const SumSpaceLayout& layout, const BandedOp& R);

}  // namespace fracsum
