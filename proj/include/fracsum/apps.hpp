#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracsum/appended.hpp"
#include "fracsum/expand.hpp"
#include "fracsum/solver.hpp"
#include "fracsum/sumspace.hpp"

namespace fracsum {

/// Five unit-width-2 intervals [-5,-3], ..., [3,5], all of degree n.
LayoutPtr five_interval_layout(int n);

/// Points a, a+h, ..., b (count rounded from (b-a)/h).
std::vector<double> uniform_points(double a, double b, double h);

// ---------------------------------------------------------------- reference functions

/// (1+t) / (x^2 + (1+t)^2), the fractional heat solution from (x^2+1)^{-1}.
double heat_exact(double x, double t);
/// (x^2+1)^{-1}.
double heat_ic_rational(double x);

/// F^{-1}[pi J1(|w|) / (|w| (1 + |w|/lambda)^k)] at the given points.  Split
/// into W0, one slowly decaying Bessel ratio (quadrature engine) and a fast
/// decaying remainder (uniform FFT with cutoff W and N samples).
std::vector<double> heat_w0_reference(std::span<const double> xs, double lambda, int k,
                                      double W = 400 * M_PI, long N = 1L << 22);
/// Several k at once (the quadrature part is shared).
std::vector<std::vector<double>> heat_w0_reference(std::span<const double> xs, double lambda,
                                                   const std::vector<int>& ks, double W = 400 * M_PI,
                                                   long N = 1L << 22);

/// 1F1(1; 1/2; -x^2) from its Taylor series (|x| <= 4) or the large-x asymptotic
/// expansion.
double hyp1f1_one_half_series(double x);
/// 1F1(1; 1/2; -x^2) = 1 - 2 x D(x) with Dawson's integral D.
double hyp1f1_one_half(double x);
/// H[exp(-t^2)](x) = (2/sqrt(pi)) D(x), with H f(x) = (1/pi) PV int f(t)/(x-t) dt.
double gaussian_hilbert(double x);
/// (-Delta)^{1/2} exp(-x^2) = (2/sqrt(pi)) 1F1(1; 1/2; -x^2).
double gaussian_sqrt_laplacian(double x);

enum class ManufacturedCase { Helmholtz, Full };
const char* to_string(ManufacturedCase c) noexcept;
ManufacturedCase parse_manufactured_case(const std::string& s);

/// Right-hand side for u = exp(-x^2): Helmholtz is (I + (-Delta)^{1/2}) u, Full is
/// (I + H + d/dx + (-Delta)^{1/2}) u.
double manufactured_rhs(ManufacturedCase c, double x);
inline double manufactured_exact(double x) { return std::exp(-x * x); }
/// (lambda, mu, eta) of the case.
std::array<double, 3> manufactured_params(ManufacturedCase c);

/// Indicator of [-1, 1].
double indicator_pm1(double x);
/// arcsin(x) on [-1, 1], arcsin(1) sgn(x) e^{1-|x|} outside.
double arcsine_rhs(double x);

// ---------------------------------------------------------------- manufactured solves

struct ManufacturedConfig {
  ManufacturedCase kind = ManufacturedCase::Helmholtz;
  int n = 5;
  AppendedChoice choice = AppendedChoice::HighEnd;
  AppendedSpec appended = AppendedSpec::quadrature_defaults(1, 0, 0);  // lambda/mu/eta/choice overwritten
  std::filesystem::path cache_dir;
  double svd_tol = 1e-14;
};

struct ManufacturedResult {
  int n = 0;
  double error = 0;         // sup over {-5, -4.99, ..., 5}
  double rhs_residual = 0;  // relative lsq residual of the dual expansion of f
  CoeffVec rhs;             // dual coefficients
  CoeffVec solution;        // appended coefficients
  std::vector<std::string> warnings;
};

/// Expand the right-hand side in the dual space (eps = 1e-2 grid on [-25, 25]),
/// solve, and measure the error on the 1001-point grid over [-5, 5].
ManufacturedResult solve_manufactured(const ManufacturedConfig& cfg);
/// Same, reusing a precomputed appended family for the layout.
ManufacturedResult solve_manufactured(const ManufacturedConfig& cfg, const AppendedFamily& family);

// ---------------------------------------------------------------- heat

struct HeatConfig {
  LayoutPtr layout = five_interval_layout(5);
  double dt = 1e-2;
  AppendedChoice choice = AppendedChoice::LowEnd;
  AppendedSpec appended;  // FFT, W = 1000, N = 2^20 by default; lambda/mu/eta overwritten
  std::filesystem::path cache_dir;
  /// Collocation grid for the appended expansions and the initial condition.
  /// Empty means 5001 points per interval plus 501 per flank on [-20, 20].
  CollocationGrid grid;
  double svd_tol = 1e-14;
};

/// Backward-Euler fractional heat evolution: (lambda E + A) u_{k+1} = lambda E R u_k.
class HeatSolver {
 public:
  explicit HeatSolver(HeatConfig cfg);

  double lambda() const noexcept { return lambda_; }
  const HeatConfig& config() const noexcept { return cfg_; }
  const AppendedFamily& family() const noexcept { return *family_; }
  const AppendedExpansions& expansions() const noexcept { return exps_; }
  const BlockSolver& solver() const noexcept { return *solver_; }
  const BandedOp& B() const noexcept { return B_; }
  double setup_seconds() const noexcept { return setup_seconds_; }
  std::vector<std::string> warnings() const;

  /// Appended coefficients of an initial condition: least squares in the primal
  /// space on the configured grid, then embedded.
  CoeffVec initial(const RealFn& u0, double* rel_residual = nullptr) const;
  /// Exact embedding of primal coefficients.
  CoeffVec initial(const CoeffVec& primal) const;

  CoeffVec step(const CoeffVec& u) const;
  /// u_0, u_1, ..., u_steps.
  std::vector<CoeffVec> run(const CoeffVec& u0, int steps) const;

  /// S+(x) u at the given points.
  Eigen::VectorXd evaluate(const CoeffVec& u, std::span<const double> xs) const;

 private:
  HeatConfig cfg_;
  double lambda_;
  std::shared_ptr<const AppendedFamily> family_;
  AppendedExpansions exps_;
  BandedOp R_{0, 0, OpTag::R};
  BandedOp B_{0, 0, OpTag::B};
  std::optional<BlockSolver> solver_;
  double setup_seconds_ = 0;
};

/// One backward-Euler step with a prepared factorisation and B map.
CoeffVec heat_step(const CoeffVec& u, const BlockSolver& solver, const BandedOp& B, double lambda);

/// The {-20, -19.99, ..., 20} evaluation grid.
std::vector<double> heat_error_grid();

// ---------------------------------------------------------------- wave

struct WaveConfig {
  LayoutPtr layout;  // default: [-1, 1] with n = 7
  double omega_max = 20;
  double d_omega = 0.1;
  AppendedChoice choice = AppendedChoice::HighEnd;
  AppendedSpec appended;  // FFT defaults; lambda/mu/eta overwritten per frequency
  std::filesystem::path cache_dir;
  std::vector<double> xs;  // output points, default {-5, -4.95, ..., 5}
  /// Dual coefficients of the forcing at a frequency; empty means wave_forcing.
  std::function<CoeffVec(LayoutPtr, double)> forcing;
};

struct WaveResult {
  std::vector<double> omegas;  // 0, d_omega, ..., omega_max
  Eigen::MatrixXd uhat;        // omegas x xs
  std::vector<double> times;   // synthesis grid
  Eigen::MatrixXd u;           // times x xs
  std::vector<double> xs;
  double max_imag_rel = 0;     // max |Im u| / max |u| before taking real parts
  std::vector<int> interpolated;  // frequency indices replaced after a singular block
  std::vector<std::string> warnings;
};

/// sqrt(pi) e^{-w^2/4} W4 on the layout interval equal to [-1, 1], in dual coefficients.
CoeffVec wave_forcing(LayoutPtr layout, double omega);
double wave_forcing_value(double x, double omega);

/// Solve [(-Delta)^{1/2} + H - w^2] u = f at one frequency.
CoeffVec wave_solve_frequency(LayoutPtr layout, double omega, const CoeffVec& fhat, AppendedChoice choice);

WaveResult wave_solve(WaveConfig cfg);

}  // namespace fracsum
