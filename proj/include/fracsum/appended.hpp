#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "fracsum/interval.hpp"
#include "fracsum/specfun.hpp"
#include "fracsum/sumspace.hpp"

namespace fracsum {

class InverseFourierIntegral;

enum class AppendedMethod { FFT, Quadrature };

const char* to_string(AppendedMethod m) noexcept;
AppendedMethod parse_appended_method(const std::string& s);
AppendedChoice parse_appended_choice(const std::string& s);

/// Everything that determines one set of four appended functions.
struct AppendedSpec {
  double lambda = 1.0;
  double mu = 0.0;
  double eta = 0.0;
  double width = 2.0;
  AppendedChoice choice = AppendedChoice::LowEnd;
  int n = 0;  // truncation degree, only used by HighEnd
  double W = 1000.0;
  long N = 1L << 20;
  AppendedMethod method = AppendedMethod::FFT;

  void validate() const;
  /// Text key over every field, used for cache lookup.
  std::string key() const;
  /// Grid defaults for the quadrature method: spacing 0.01 on [-12, 12).
  static AppendedSpec quadrature_defaults(double lambda, double mu, double eta);
};

/// Which dual function each of the four slots inverts, in slot order
/// (v_0, u_{-1}, v_a, u_b).
struct AppendedTarget {
  AppendedKind kind;
  int index;
};
std::array<AppendedTarget, 4> appended_targets(AppendedChoice choice, int n);

/// The four appended functions for one interval width and one (lambda, mu, eta),
/// sampled on a uniform grid centred at the origin.  Immutable once built.
///
/// Values are in physical units: for width w the functions are
/// (w/2) f_ref(2z/w) with f_ref the width-2 solution for (lambda w/2, mu w/2, eta).
class AppendedBasis {
 public:
  static constexpr double kNearEndpointNodes = 4;

  ~AppendedBasis();

  const AppendedSpec& spec() const noexcept { return spec_; }
  const GridFun& grid(int slot) const { return grids_.at(slot); }

  /// Value of slot s at z, measured from the interval centre.  The FFT method
  /// adds the asymptotic tail beyond the cutoff to the band-limited samples and
  /// interpolates the sum; within kNearEndpointNodes nodes of z = +-width/2 it
  /// integrates directly.  Without an asymptotic tail (cutoff too low) the raw
  /// samples are interpolated.  The quadrature method integrates on demand,
  /// storing grid nodes in the grid (NaN until first use) and other points in a
  /// memo.  Queries outside the stored grid raise ValidationError.
  double value(int slot, double z) const;

  /// Max over slots of |F(+-W)| W, the FFT truncation estimate.
  double tail_estimate() const noexcept { return tail_estimate_; }
  bool tail_flag(double tol = 0.1) const noexcept { return tail_estimate_ > tol; }
  /// Largest |Im| thrown away when the synthesised values were made real.
  double discarded_imag() const noexcept { return discarded_imag_; }

  void save(const std::filesystem::path& file) const;
  static std::shared_ptr<const AppendedBasis> load(const std::filesystem::path& file);

  friend std::shared_ptr<const AppendedBasis> compute_appended(const AppendedSpec& spec);

 private:
  AppendedBasis() = default;
  const InverseFourierIntegral& integrator(int slot) const;

  AppendedSpec spec_;
  mutable std::array<GridFun, 4> grids_;
  double tail_estimate_ = 0;
  double discarded_imag_ = 0;

  mutable std::mutex mtx_;
  mutable std::array<std::unique_ptr<InverseFourierIntegral>, 4> quad_;
  mutable std::array<std::map<double, double>, 4> memo_;
  mutable std::array<std::unordered_map<long, double>, 4> tail_memo_;
};

using AppendedPtr = std::shared_ptr<const AppendedBasis>;

/// Samples the four appended functions.  Throws DenominatorNearZero in the
/// degenerate regimes (e.g. lambda = mu = 0 for v_0).
AppendedPtr compute_appended(const AppendedSpec& spec);

/// File name (without directory) used for the cache entry of a spec.
std::string cache_filename(const AppendedSpec& spec);
/// Loads from cache_dir when an entry exists, otherwise computes and stores it.
/// An empty cache_dir disables caching.
AppendedPtr load_or_compute(const AppendedSpec& spec, const std::filesystem::path& cache_dir);

/// Appended functions moved onto an interval of matching width.
class TranslatedAppended {
 public:
  TranslatedAppended(AppendedPtr basis, const Interval& I);
  double operator()(int slot, double x) const { return basis_->value(slot, x - centre_); }
  const Interval& interval() const noexcept { return I_; }

 private:
  AppendedPtr basis_;
  Interval I_;
  double centre_;
};

TranslatedAppended translate_appended(AppendedPtr basis, const Interval& I);

/// Appended functions for every interval of a layout, one AppendedBasis per
/// distinct width.
class AppendedFamily : public AppendedEvaluator {
 public:
  AppendedFamily(LayoutPtr layout, std::vector<AppendedPtr> bases);

  /// Computes (or loads) the bases for every distinct width of `layout`, with
  /// `base` supplying everything except the width.
  static std::shared_ptr<const AppendedFamily> build(LayoutPtr layout, const AppendedSpec& base,
                                                     const std::filesystem::path& cache_dir = {});

  double value(int interval, int slot, double x) const override;
  const AppendedBasis& basis(int interval) const { return *by_interval_.at(interval); }
  const SumSpaceLayout& layout() const noexcept { return *layout_; }
  LayoutPtr layout_ptr() const noexcept { return layout_; }
  const std::vector<AppendedPtr>& distinct() const noexcept { return bases_; }

 private:
  LayoutPtr layout_;
  std::vector<AppendedPtr> bases_;
  std::vector<AppendedPtr> by_interval_;
};

}  // namespace fracsum
