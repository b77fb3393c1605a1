#include "fracsum/chebx.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fracsum {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sgn(double x) noexcept { return (x > 0) - (x < 0); }

double parity(int n) noexcept { return (n % 2 == 0) ? 1.0 : -1.0; }

// sqrt(|x|^2 - 1) factored to keep relative accuracy near |x| = 1.
double exterior_root(double ax) noexcept { return std::sqrt((ax - 1.0) * (ax + 1.0)); }

// r = |x| - sqrt(x^2-1), written as a reciprocal to avoid cancellation.
double exterior_ratio(double ax) noexcept { return 1.0 / (ax + exterior_root(ax)); }

}  // namespace

BasisIndex::BasisIndex(BasisKind k, int deg) : kind(k), n(deg) {
  const int lo = (k == BasisKind::Ut) ? -2 : 0;
  if (deg < lo) {
    throw ValidationError(std::string("degree ") + std::to_string(deg) + " out of range for " +
                          to_string(k));
  }
}

const char* to_string(BasisKind k) noexcept {
  switch (k) {
    case BasisKind::Tt: return "Tt";
    case BasisKind::Ut: return "Ut";
    case BasisKind::W: return "W";
    case BasisKind::V: return "V";
  }
  return "?";
}

double eval_Tt(int n, double x) {
  if (n < 0) throw ValidationError("eval_Tt: n must be >= 0");
  if (n == 0) return 1.0;
  const double ax = std::abs(x);
  if (ax < 1.0) return std::cos(n * std::acos(x));
  if (ax == 1.0) return x > 0 ? 1.0 : parity(n);
  // (x - sgn(x) sqrt(x^2-1))^n = sgn(x)^n r^n, in log space so large n underflows to 0.
  const double r = exterior_ratio(ax);
  const double mag = std::exp(n * std::log(r));
  return x > 0 ? mag : parity(n) * mag;
}

double eval_Ut(int n, double x) {
  if (n < -2) throw ValidationError("eval_Ut: n must be >= -2");
  const double ax = std::abs(x);
  if (ax < 1.0) {
    if (n < 0) return 0.0;
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    const double th = std::acos(x);
    return std::sin((n + 1) * th) / s;
  }
  if (ax == 1.0) {
    if (n < 0) return kNaN;
    return (x > 0 ? 1.0 : parity(n)) * (n + 1);
  }
  const double root = exterior_root(ax);
  if (n == -2) return -ax / root;
  // Closed form of the recursion for n >= -1: -sgn(x)^n r^{n+1} / sqrt(x^2-1).
  const double r = exterior_ratio(ax);
  const double mag = std::exp((n + 1) * std::log(r)) / root;
  const double s = (n % 2 == 0) ? 1.0 : sgn(x);
  return -s * mag;
}

double eval_W(int n, double x) {
  if (n < 0) throw ValidationError("eval_W: n must be >= 0");
  if (std::abs(x) >= 1.0) return 0.0;
  return std::sin((n + 1) * std::acos(x));
}

double eval_V(int n, double x) {
  if (n < 0) throw ValidationError("eval_V: n must be >= 0");
  const double ax = std::abs(x);
  if (ax > 1.0) return 0.0;
  if (ax == 1.0) return kNaN;
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  return std::cos(n * std::acos(x)) / s;
}

double eval(BasisIndex idx, double y) {
  switch (idx.kind) {
    case BasisKind::Tt: return eval_Tt(idx.n, y);
    case BasisKind::Ut: return eval_Ut(idx.n, y);
    case BasisKind::W: return eval_W(idx.n, y);
    case BasisKind::V: return eval_V(idx.n, y);
  }
  return kNaN;
}

double eval_affine(BasisIndex idx, const Interval& I, double x) {
  return eval(idx, I.to_reference(x));
}

void eval_range(BasisKind kind, int nmin, double y, std::span<double> out) {
  const int count = static_cast<int>(out.size());
  if (count == 0) return;
  const double ay = std::abs(y);

  if (ay < 1.0) {
    const double th = std::acos(y);
    const double s = std::sqrt((1.0 - y) * (1.0 + y));
    for (int i = 0; i < count; ++i) {
      const int n = nmin + i;
      switch (kind) {
        case BasisKind::Tt: out[i] = std::cos(n * th); break;
        case BasisKind::Ut: out[i] = n < 0 ? 0.0 : std::sin((n + 1) * th) / s; break;
        case BasisKind::W: out[i] = std::sin((n + 1) * th); break;
        case BasisKind::V: out[i] = std::cos(n * th) / s; break;
      }
    }
    return;
  }

  if (ay > 1.0 && (kind == BasisKind::Tt || kind == BasisKind::Ut)) {
    // Geometric powers of r starting from the first requested degree.
    const double r = exterior_ratio(ay);
    const double root = exterior_root(ay);
    const double sg = sgn(y);
    int i = 0;
    if (kind == BasisKind::Ut) {
      for (; i < count && nmin + i == -2; ++i) out[i] = -ay / root;
    }
    if (i == count) return;
    const int n0 = nmin + i;
    const int e0 = (kind == BasisKind::Tt) ? n0 : n0 + 1;
    double p = std::exp(e0 * std::log(r));
    for (; i < count; ++i) {
      const int n = nmin + i;
      const double s = (n % 2 == 0) ? 1.0 : sg;
      out[i] = (kind == BasisKind::Tt) ? s * p : -s * p / root;
      p *= r;
    }
    return;
  }

  for (int i = 0; i < count; ++i) out[i] = eval(BasisIndex(kind, nmin + i), y);
}

}  // namespace fracsum
