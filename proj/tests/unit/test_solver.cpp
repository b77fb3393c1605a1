#include <doctest.h>

#include <cmath>
#include <random>

#include "fracsum/error.hpp"
#include "fracsum/solver.hpp"

using namespace fracsum;

namespace {

LayoutPtr make_layout(std::vector<Interval> I, std::vector<int> n) {
  return std::make_shared<const SumSpaceLayout>(std::move(I), std::move(n));
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Random primal coefficients, optionally without the global Tt0 term.
CoeffVec random_primal(LayoutPtr L, unsigned seed, bool with_global) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  CoeffVec u(Space::Primal, L);
  for (auto& v : u.values) v = U(rng);
  if (!with_global) u.values[0] = 0;
  return u;
}

// Primal coefficients placed at their appended positions in `S`.
Eigen::VectorXd embed(const CoeffVec& u, const SumSpaceLayout& S) {
  const SumSpaceLayout& L = *u.layout;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(S.dim(Space::Appended));
  out[0] = u.values[0];
  for (int k = 0; k < L.num_intervals(); ++k)
    for (int j = 0; j <= L.degree(k); ++j) {
      out[S.appended_W(k, j)] = u.values[L.primal_W(k, j)];
      out[S.appended_Tt(k, j + 1)] = u.values[L.primal_Tt(k, j + 1)];
    }
  return out;
}

}  // namespace

TEST_CASE("classification of the special cases") {
  CHECK(classify(1, 0, 0) == SolveCase::General);
  CHECK(classify(-1e-300, 0, 0) == SolveCase::General);
  CHECK(classify(0, 0, 0) == SolveCase::ZeroAll);
  CHECK(classify(0, 0, 2) == SolveCase::ZeroLMu);
  CHECK(classify(0, 1e-3, 2) == SolveCase::ZeroLambda);
  CHECK(needs_appended(SolveCase::ZeroLambda));
  CHECK_FALSE(needs_appended(SolveCase::ZeroLMu));
}

TEST_CASE("7x7 system for one interval, n = 0, lambda = 1") {
  auto L = make_layout({Interval(-1, 1)}, {0});
  const LplusSystem sys = build_Lplus(L, 1, 0, 0);
  REQUIRE(sys.size() == 7);
  REQUIRE(sys.blocks.size() == 1);
  const Eigen::MatrixXd M = sys.op.to_dense();
  // Leading five columns: Tt0 then the unit slot columns.
  Eigen::MatrixXd lead = Eigen::MatrixXd::Zero(7, 5);
  lead(0, 0) = -1;
  lead(4, 0) = 1;
  for (int i = 1; i <= 4; ++i) lead(i, i) = 1;
  CHECK(M.leftCols(5) == lead);
  // Remaining columns are L = E + A on W0 and Tt1.
  const Eigen::MatrixXd Lfull = assemble_L(*L, 1, 0, 0).to_dense();
  CHECK(M.col(5) == Lfull.col(L->primal_W(0, 0)));
  CHECK(M.col(6) == Lfull.col(L->primal_Tt(0, 1)));
  BlockSolver S(sys);
  CHECK(S.rcond()[0] > 1e-3);
}

TEST_CASE("HighEnd unit columns sit at V_{n+2} and Ut_{n+1}") {
  auto L = make_layout({Interval(-1, 1)}, {4});
  const LplusSystem sys = build_Lplus(L, 2, 0.5, 0, AppendedChoice::HighEnd);
  const Eigen::MatrixXd M = sys.op.to_dense();
  const int rows[4] = {L->dual_V(0, 0), L->dual_Ut(0, -1), L->dual_V(0, 6), L->dual_Ut(0, 5)};
  for (int s = 0; s < 4; ++s) {
    const int c = L->appended_slot(0, s);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(M.rows());
    e[rows[s]] = 1;
    CHECK(M.col(c) == e);
  }
}

TEST_CASE("ZeroAll block is the A ladder") {
  auto L = make_layout({Interval(0, 3)}, {3});
  const LplusSystem sys = build_Lplus(L, 0, 0, 0);
  REQUIRE(sys.size() == 8);
  CHECK(sys.solution_layout->variant() == LayoutVariant::ReducedNoAppend);
  const Eigen::MatrixXd M = sys.op.to_dense();
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(8, 8);
  for (int j = 0; j <= 3; ++j) {
    const double s = 2.0 * (j + 1) / 3.0;
    expect(2 * j, 2 * j + 1) = s;  // Tt_{j+1} -> V_{j+1}
    expect(2 * j + 1, 2 * j) = s;  // W_j -> Ut_j
  }
  CHECK((M - expect).cwiseAbs().maxCoeff() <= 4e-16);

  const LplusSystem z = build_Lplus(L, 0, 0, 1.5);
  CHECK(z.size() == 8);
  BlockSolver S(z);
  CHECK(S.rcond()[0] > 1e-3);
}

TEST_CASE("ZeroAll and ZeroLMu round trips") {
  auto L = make_layout({Interval(-1, 1), Interval(1, 4)}, {5, 3});
  for (double eta : {0.0, -0.7}) {
    const CoeffVec u = random_primal(L, 11, false);
    const CoeffVec f(Space::Dual, L, assemble_L(*L, 0, 0, eta).apply(u.values));
    BlockSolver S(build_Lplus(L, 0, 0, eta));
    const CoeffVec up = S.solve(f);
    CHECK(max_abs(up.values - embed(u, *up.layout)) <= 1e-12);
  }
}

TEST_CASE("ZeroLambda conditioning with HighEnd") {
  auto L = make_layout({Interval(-1, 1)}, {100});
  for (double mu : {1.0, 1e-3}) {
    BlockSolver hi(build_Lplus(L, 0, mu, 0, AppendedChoice::HighEnd));
    const Eigen::MatrixXd lo = build_Lplus(L, 0, mu, 0, AppendedChoice::LowEnd).block_dense(0);
    const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(lo).singularValues();
    MESSAGE("mu = " << mu << ": HighEnd cond " << hi.condition(0) << ", LowEnd smallest singular values "
                    << sv[sv.size() - 1] << ", " << sv[sv.size() - 2] << ", " << sv[sv.size() - 3]);
    CHECK(hi.condition(0) <= 1e3);
  }
}

TEST_CASE("apply-then-solve round trip in the general case") {
  auto L = make_layout({Interval(-2, 0), Interval(0, 1), Interval(1, 4)}, {6, 4, 5});
  const double lam = 1.3, mu = 0.4, eta = -0.2;
  const BandedOp Lop = assemble_L(*L, lam, mu, eta);
  BlockSolver S(build_Lplus(L, lam, mu, eta));

  CoeffVec w0(Space::Primal, L);
  w0.values[L->primal_W(0, 0)] = 1;
  const CoeffVec f(Space::Dual, L, Lop.apply(w0.values));
  const CoeffVec u = S.solve(f);
  for (int i = 0; i < u.values.size(); ++i)
    CHECK(std::abs(u.values[i] - (i == L->appended_W(0, 0) ? 1.0 : 0.0)) <= 1e-12);
  for (double r : S.last_residuals()) CHECK(r <= 1e-12);

  const CoeffVec v = random_primal(L, 5, true);
  const CoeffVec g(Space::Dual, L, Lop.apply(v.values));
  double cond = 0;
  for (int k = 0; k < 3; ++k) cond = std::max(cond, S.condition(k));
  const double err = max_abs(S.solve(g).values - embed(v, *L));
  MESSAGE("random round trip error " << err << ", largest block condition " << cond);
  CHECK(err <= 10 * cond * 2.2e-16);

  // ZeroLambda: primal functions without Tt0.
  const CoeffVec z = random_primal(L, 6, false);
  const CoeffVec h(Space::Dual, L, assemble_L(*L, 0, mu, eta).apply(z.values));
  CHECK(max_abs(solve(L, 0, mu, eta, h, AppendedChoice::HighEnd).values - embed(z, *L)) <= 1e-12);
}

TEST_CASE("V0 right-hand side gives the unit v0 coefficient") {
  auto L = make_layout({Interval(-1, 1)}, {5});
  CoeffVec f(Space::Dual, L);
  f.values[L->dual_V(0, 0)] = 1;
  const CoeffVec u = solve(L, 1, 0, 0, f);
  for (int i = 0; i < u.values.size(); ++i)
    CHECK(std::abs(u.values[i] - (i == L->appended_slot(0, 0) ? 1.0 : 0.0)) <= 1e-14);
}

TEST_CASE("permuting intervals permutes solution blocks") {
  const std::vector<Interval> I{Interval(-1, 1), Interval(1, 4)};
  const std::vector<int> n{3, 5};
  auto L = make_layout(I, n);
  auto P = make_layout({I[1], I[0]}, {n[1], n[0]});
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> U(-1, 1);
  CoeffVec f(Space::Dual, L), fp(Space::Dual, P);
  for (int k = 0; k < 2; ++k) {
    const int kp = 1 - k;
    for (int j = 0; j <= n[k] + 2; ++j) {
      const double a = U(rng), b = U(rng);
      f.values[L->dual_V(k, j)] = a;
      fp.values[P->dual_V(kp, j)] = a;
      f.values[L->dual_Ut(k, j - 1)] = b;
      fp.values[P->dual_Ut(kp, j - 1)] = b;
    }
  }
  for (double lam : {0.0}) {
    const CoeffVec u = solve(L, lam, 0.8, 0.3, f);
    const CoeffVec up = solve(P, lam, 0.8, 0.3, fp);
    for (int k = 0; k < 2; ++k) {
      const int kp = 1 - k;
      for (int s = 0; s < 4; ++s) CHECK(u.values[L->appended_slot(k, s)] == up.values[P->appended_slot(kp, s)]);
      for (int j = 0; j <= n[k]; ++j) {
        CHECK(u.values[L->appended_W(k, j)] == up.values[P->appended_W(kp, j)]);
        CHECK(u.values[L->appended_Tt(k, j + 1)] == up.values[P->appended_Tt(kp, j + 1)]);
      }
    }
  }
}

TEST_CASE("monolithic and blockwise solves agree; sparsity bound") {
  auto L = make_layout({Interval(-3, -1), Interval(-1, 0.5), Interval(0.5, 3)}, {8, 4, 12});
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> U(-1, 1);
  CoeffVec f(Space::Dual, L);
  for (auto& v : f.values) v = U(rng);
  const double params[4][3] = {{1.5, 0.3, 0.2}, {0, 0, 0}, {0, 0, 1.1}, {0, 2, -0.5}};
  for (const auto& p : params) {
    for (auto choice : {AppendedChoice::LowEnd, AppendedChoice::HighEnd}) {
      const LplusSystem sys = build_Lplus(L, p[0], p[1], p[2], choice);
      CHECK(sys.op.nnz() <= 8L * sys.size());
      BlockSolver S(sys);
      const Eigen::VectorXd a = S.solve(f).values, b = S.solve_monolithic(f).values;
      CHECK(max_abs(a - b) <= 1e-14 * std::max(1.0, max_abs(a)));
    }
  }
}

TEST_CASE("input validation") {
  auto L = make_layout({Interval(-1, 1)}, {3});
  auto R = std::make_shared<const SumSpaceLayout>(L->with_variant(LayoutVariant::ReducedNoAppend));
  CHECK_THROWS_AS(build_Lplus(R, 1, 0, 0), ValidationError);
  CHECK_THROWS_AS(build_Lplus(L, NAN, 0, 0), ValidationError);
  BlockSolver S(build_Lplus(L, 1, 0, 0));
  CHECK_THROWS_AS(S.solve(CoeffVec(Space::Primal, L)), ValidationError);
  AppendedSpec sp;
  sp.lambda = 0;
  sp.mu = 0;
  CHECK_THROWS_AS(sp.validate(), DenominatorNearZero);
}

TEST_CASE("R and B against evaluation of the appended functions") {
  auto L = make_layout({Interval(-1, 1), Interval(1, 4)}, {12, 10});
  AppendedSpec spec;
  spec.lambda = 1;
  spec.mu = 0.5;
  spec.W = 100;
  spec.N = 1 << 14;
  const auto fam = AppendedFamily::build(L, spec, {});
  const auto grid = CollocationGrid::for_layout(*L, 1001, 1001);
  const AppendedExpansions ex = expand_appended(*fam, grid);
  const BandedOp R = build_R(*L, ex);
  REQUIRE(R.rows() == L->dim(Space::Primal));
  REQUIRE(R.cols() == L->dim(Space::Appended));

  const Eigen::MatrixXd Rd = R.to_dense();
  CHECK(Rd(0, 0) == 1);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j <= L->degree(k); ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(Rd.rows());
      e[L->primal_W(k, j)] = 1;
      CHECK(Rd.col(L->appended_W(k, j)) == e);
    }

  const CoeffVec p = random_primal(L, 4, true);
  CHECK(R.apply(embed(p, *L)) == p.values);

  CoeffVec up(Space::Appended, L, embed(p, *L));
  double bound = 0;
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 2; ++k)
    for (int s = 0; s < 4; ++s) {
      const double c = U(rng);
      up.values[L->appended_slot(k, s)] = c;
      double sup = 0;
      for (double x : grid.points) sup = std::max(sup, std::abs(fam->value(k, s, x)));
      bound += std::abs(c) * ex.rel_residuals[k][s] * sup;
      MESSAGE("interval " << k << " slot " << s << " relative residual " << ex.rel_residuals[k][s]);
    }
  bound = 10 * bound;

  std::vector<double> xs;
  for (int i = 0; i < 400; ++i) xs.push_back(-6.97 + 0.0373 * i);
  const Eigen::VectorXd direct = evaluate(up, xs, fam.get());
  const CoeffVec Ru(Space::Primal, L, R.apply(up.values));
  const CoeffVec Bu(Space::Dual, L, build_B(*L, R).apply(up.values));
  const Eigen::VectorXd viaR = evaluate(Ru, xs), viaB = evaluate(Bu, xs);
  MESSAGE("S+ u vs S R u: " << max_abs(direct - viaR) << " (bound " << bound << ")");
  CHECK(max_abs(direct - viaR) <= bound);
  CHECK(max_abs(direct - viaB) <= bound + 1e-12 * max_abs(direct));
}
