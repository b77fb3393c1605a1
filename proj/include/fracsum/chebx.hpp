#pragma once

#include <span>

#include "fracsum/interval.hpp"

namespace fracsum {

// Tt: extended Chebyshev T,  Ut: extended Chebyshev U (n >= -2),
// W: sqrt(1-x^2)_+ U_n,      V: T_n / sqrt(1-x^2)_+.
enum class BasisKind { Tt, Ut, W, V };

struct BasisIndex {
  BasisKind kind;
  int n;

  BasisIndex(BasisKind k, int deg);
};

const char* to_string(BasisKind k) noexcept;

// All evaluators are on the reference interval [-1, 1].
//
// Singular points: V_n(+-1), Ut_{-1}(+-1) and Ut_{-2}(+-1) return quiet NaN.
// Callers that sample on grids must keep those points out.
double eval_Tt(int n, double x);
double eval_Ut(int n, double x);
double eval_W(int n, double x);
double eval_V(int n, double x);

double eval(BasisIndex idx, double y);
double eval_affine(BasisIndex idx, const Interval& I, double x);

// Values of one family for degrees nmin..nmin+out.size()-1 at a single
// reference point.  Agrees with the scalar evaluators to rounding.
void eval_range(BasisKind kind, int nmin, double y, std::span<double> out);

}  // namespace fracsum
