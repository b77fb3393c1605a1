#include "fracsum/appended.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <tuple>

#include "fracsum/error.hpp"
#include "fracsum/fourier_quad.hpp"

namespace fracsum {

namespace {

constexpr char kMagic[5] = {'F', 'S', 'P', 'C', '1'};
constexpr std::uint32_t kVersion = 1;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

BesselMultiplier multiplier_for(const AppendedTarget& t, double lambda, double mu, double eta) {
  return t.kind == AppendedKind::v ? multiplier_v(t.index, lambda, mu, eta)
                                   : multiplier_u(t.index, lambda, mu, eta);
}

// J_m on the FFT frequency grid |w_k|, shared between calls with the same grid.
std::shared_ptr<const std::vector<double>> bessel_table(int m, double W, long N) {
  static std::mutex mtx;
  static std::map<std::tuple<int, double, long>, std::shared_ptr<const std::vector<double>>> cache;
  const auto key = std::make_tuple(m, W, N);
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto tab = std::make_shared<std::vector<double>>(N);
  const double delta = 2.0 * W / N;
  for (long k = 0; k < N; ++k) (*tab)[k] = bessel_j(m, std::abs(k * delta - W));
  std::lock_guard<std::mutex> lock(mtx);
  if (cache.size() >= 8) cache.clear();
  cache.emplace(key, tab);
  return tab;
}

// F at w = 0 as the mean of the two one-sided limits; F(0-) = conj F(0+).
double multiplier_at_zero(const BesselMultiplier& F) {
  cplx right;
  if (F.m == 0) {
    right = F.C / F.alpha;
  } else if (F.m == 1 && std::abs(F.alpha) < 1e-13) {
    right = F.C / (2.0 * F.beta);  // J_1(w)/w -> 1/2
  } else {
    right = 0.0;
  }
  return right.real();
}

GridFun synthesise_fft(const BesselMultiplier& F, double Wref, long N, double& tail,
                       double& max_imag) {
  auto tab = bessel_table(F.m, Wref, N);
  std::vector<cplx> samples(N);
  const double delta = 2.0 * Wref / N;
  for (long k = 0; k < N; ++k) {
    const double w = k * delta - Wref;
    if (k == N / 2) {
      samples[k] = multiplier_at_zero(F);
      continue;
    }
    const cplx v = F.C * (*tab)[k] / (F.alpha + F.beta * std::abs(w));
    samples[k] = w > 0 ? v : std::conj(v);
  }
  // w = -W has no partner at +W; keep its symmetric part so the synthesis is real.
  samples[0] = samples[0].real();
  tail = std::abs(F(Wref)) * Wref;
  GridFun g = ifft_uniform(samples, Wref);
  for (auto& v : g.values) {
    max_imag = std::max(max_imag, std::abs(v.imag()));
    v = v.real();
  }
  return g;
}

template <class T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("appended cache: truncated file");
  return v;
}

}  // namespace

const char* to_string(AppendedMethod m) noexcept {
  return m == AppendedMethod::FFT ? "fft" : "quadrature";
}

AppendedMethod parse_appended_method(const std::string& s) {
  const auto t = lower(s);
  if (t == "fft") return AppendedMethod::FFT;
  if (t == "quadrature" || t == "adaptivequadrature" || t == "quad") return AppendedMethod::Quadrature;
  throw ValidationError("unknown appended method '" + s + "' (expected fft or quadrature)");
}

AppendedChoice parse_appended_choice(const std::string& s) {
  const auto t = lower(s);
  if (t == "lowend" || t == "low") return AppendedChoice::LowEnd;
  if (t == "highend" || t == "high") return AppendedChoice::HighEnd;
  throw ValidationError("unknown appended choice '" + s + "' (expected lowend or highend)");
}

void AppendedSpec::validate() const {
  if (!(std::isfinite(lambda) && std::isfinite(mu) && std::isfinite(eta)))
    throw ValidationError("appended: lambda, mu, eta must be finite");
  if (!(width > 0) || !std::isfinite(width)) throw ValidationError("appended: width must be positive");
  if (!(W > 0) || !std::isfinite(W)) throw ValidationError("appended: W must be positive");
  if (N < 4 || N % 2 != 0) throw ValidationError("appended: N must be even and >= 4");
  if (n < 0) throw ValidationError("appended: n must be >= 0");
  if (lambda == 0 && mu == 0)
    throw DenominatorNearZero("appended: the multipliers are singular at w = 0 when lambda = mu = 0; "
                              "the solutions are not in H^{1/2} and this case needs no appended functions");
}

std::string AppendedSpec::key() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "l=%.17g;m=%.17g;e=%.17g;w=%.17g;c=%s;n=%d;W=%.17g;N=%ld;M=%s",
                lambda, mu, eta, width, to_string(choice),
                choice == AppendedChoice::HighEnd ? n : 0, W, N, to_string(method));
  return buf;
}

AppendedSpec AppendedSpec::quadrature_defaults(double lambda, double mu, double eta) {
  AppendedSpec s;
  s.lambda = lambda;
  s.mu = mu;
  s.eta = eta;
  s.W = 100 * M_PI;
  s.N = 2400;
  s.method = AppendedMethod::Quadrature;
  return s;
}

std::array<AppendedTarget, 4> appended_targets(AppendedChoice choice, int n) {
  if (choice == AppendedChoice::LowEnd) {
    return {{{AppendedKind::v, 0}, {AppendedKind::u, -1}, {AppendedKind::v, 1}, {AppendedKind::u, 0}}};
  }
  return {{{AppendedKind::v, 0}, {AppendedKind::u, -1}, {AppendedKind::v, n + 2}, {AppendedKind::u, n + 1}}};
}

AppendedBasis::~AppendedBasis() = default;

const InverseFourierIntegral& AppendedBasis::integrator(int slot) const {
  // caller holds mtx_
  if (!quad_[slot]) {
    const double s = 0.5 * spec_.width;
    const auto t = appended_targets(spec_.choice, spec_.n)[slot];
    quad_[slot] = std::make_unique<InverseFourierIntegral>(
        multiplier_for(t, spec_.lambda * s, spec_.mu * s, spec_.eta));
  }
  return *quad_[slot];
}

double AppendedBasis::value(int slot, double z) const {
  if (slot < 0 || slot > 3) throw ValidationError("appended: slot must be in 0..3");
  const GridFun& g = grids_[slot];
  if (spec_.method == AppendedMethod::FFT) {
    const double s = 0.5 * spec_.width;
    const double Wref = spec_.W * s;
    std::lock_guard<std::mutex> lock(mtx_);
    const InverseFourierIntegral& Q = integrator(slot);
    if (Wref < Q.min_tail_start()) return g.interpolate(z).real();
    if (!(z >= g.x_min() && z <= g.x_max())) return g.interpolate(z).real();  // throws
    // Within a few nodes of the endpoints the cusp defeats local interpolation.
    if (std::abs(std::abs(z) - s) < kNearEndpointNodes * g.dx()) {
      auto it = memo_[slot].find(z);
      if (it != memo_[slot].end()) return it->second;
      const double v = s * Q(z / s);
      memo_[slot].emplace(z, v);
      return v;
    }
    // Nodes carry the band-limited sample plus the tail beyond the cutoff; the
    // sum is smooth here, the band-limited part alone is not.
    auto node = [&](long j) {
      auto [it, fresh] = tail_memo_[slot].try_emplace(j, 0.0);
      if (fresh) it->second = s * Q.tail_beyond(g.x(j) / s, Wref);
      return g.values[j].real() + it->second;
    };
    long j;
    if (g.node_hit(z, j)) return node(j);
    const double t = (z - g.x_min()) / g.dx();
    const long i0 = std::clamp(static_cast<long>(std::floor(t)) - 1, 0L, g.N - 4);
    const double u = t - static_cast<double>(i0);
    return -(u - 1) * (u - 2) * (u - 3) / 6.0 * node(i0) + u * (u - 2) * (u - 3) / 2.0 * node(i0 + 1) -
           u * (u - 1) * (u - 3) / 2.0 * node(i0 + 2) + u * (u - 1) * (u - 2) / 6.0 * node(i0 + 3);
  }
  if (!(z >= g.x_min() && z <= g.x_max())) {
    throw ValidationError("appended: query z = " + std::to_string(z) + " lies outside the stored grid [" +
                          std::to_string(g.x_min()) + ", " + std::to_string(g.x_max()) +
                          "] (extrapolation)");
  }
  const double s = 0.5 * spec_.width;
  std::lock_guard<std::mutex> lock(mtx_);
  long j;
  if (g.node_hit(z, j)) {
    // Nodes are filled on first use (NaN marks a node not yet computed).
    auto& node = grids_[slot].values[j];
    if (std::isnan(node.real())) node = s * integrator(slot)(g.x(j) / s);
    return node.real();
  }
  auto it = memo_[slot].find(z);
  if (it != memo_[slot].end()) return it->second;
  const double v = s * integrator(slot)(z / s);
  memo_[slot].emplace(z, v);
  return v;
}

AppendedPtr compute_appended(const AppendedSpec& spec) {
  spec.validate();
  std::shared_ptr<AppendedBasis> B(new AppendedBasis());
  B->spec_ = spec;
  const double s = 0.5 * spec.width;
  const auto targets = appended_targets(spec.choice, spec.n);
  for (int slot = 0; slot < 4; ++slot) {
    // The constructor runs the resonance check for both methods.
    auto Q = std::make_unique<InverseFourierIntegral>(
        multiplier_for(targets[slot], spec.lambda * s, spec.mu * s, spec.eta));
    GridFun g;
    if (spec.method == AppendedMethod::FFT) {
      double tail = 0;
      g = synthesise_fft(Q->multiplier(), spec.W * s, spec.N, tail, B->discarded_imag_);
      B->tail_estimate_ = std::max(B->tail_estimate_, tail);
      g.W = spec.W;
      for (auto& v : g.values) v *= s;
    } else {
      g.W = spec.W;
      g.N = spec.N;
      g.provenance = Provenance::Quadrature;
      g.values.assign(spec.N, cplx(NAN, 0.0));
    }
    B->grids_[slot] = std::move(g);
    B->quad_[slot] = std::move(Q);
  }
  return B;
}

void AppendedBasis::save(const std::filesystem::path& file) const {
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("appended cache: cannot write " + tmp);
    os.write(kMagic, sizeof kMagic);
    put(os, kVersion);
    put(os, spec_.lambda);
    put(os, spec_.mu);
    put(os, spec_.eta);
    put(os, spec_.width);
    put(os, spec_.W);
    put(os, static_cast<std::int64_t>(spec_.N));
    put(os, static_cast<std::int32_t>(spec_.choice));
    put(os, static_cast<std::int32_t>(spec_.n));
    put(os, static_cast<std::int32_t>(spec_.method));
    put(os, tail_estimate_);
    put(os, discarded_imag_);
    std::lock_guard<std::mutex> lock(mtx_);
    for (const auto& g : grids_)
      for (const auto& v : g.values) put(os, v.real());
    if (!os) throw IoError("appended cache: write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw IoError("appended cache: cannot rename " + tmp + ": " + ec.message());
}

std::shared_ptr<const AppendedBasis> AppendedBasis::load(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw IoError("appended cache: cannot open " + file.string());
  char magic[5];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw IoError("appended cache: bad magic in " + file.string());
  if (get<std::uint32_t>(is) != kVersion) throw IoError("appended cache: unsupported version");
  std::shared_ptr<AppendedBasis> B(new AppendedBasis());
  AppendedSpec& sp = B->spec_;
  sp.lambda = get<double>(is);
  sp.mu = get<double>(is);
  sp.eta = get<double>(is);
  sp.width = get<double>(is);
  sp.W = get<double>(is);
  sp.N = get<std::int64_t>(is);
  const auto choice = get<std::int32_t>(is);
  sp.n = get<std::int32_t>(is);
  const auto method = get<std::int32_t>(is);
  if (choice < 0 || choice > 1 || method < 0 || method > 1)
    throw IoError("appended cache: corrupt header in " + file.string());
  sp.choice = static_cast<AppendedChoice>(choice);
  sp.method = static_cast<AppendedMethod>(method);
  try {
    sp.validate();
  } catch (const ValidationError& e) {
    throw IoError(std::string("appended cache: corrupt header: ") + e.what());
  }
  B->tail_estimate_ = get<double>(is);
  B->discarded_imag_ = get<double>(is);
  for (auto& g : B->grids_) {
    g.W = sp.W;
    g.N = sp.N;
    g.provenance = sp.method == AppendedMethod::FFT ? Provenance::FFT : Provenance::Quadrature;
    g.values.resize(sp.N);
    for (auto& v : g.values) v = get<double>(is);
  }
  return B;
}

std::string cache_filename(const AppendedSpec& spec) {
  // FNV-1a over the key; stable across runs and platforms.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : spec.key()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "appended_%016llx.fspc", static_cast<unsigned long long>(h));
  return buf;
}

AppendedPtr load_or_compute(const AppendedSpec& spec, const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return compute_appended(spec);
  const auto file = cache_dir / cache_filename(spec);
  if (std::filesystem::exists(file)) {
    auto B = AppendedBasis::load(file);
    if (B->spec().key() == spec.key()) return B;
  }
  auto B = compute_appended(spec);
  std::filesystem::create_directories(cache_dir);
  B->save(file);
  return B;
}

TranslatedAppended::TranslatedAppended(AppendedPtr basis, const Interval& I)
    : basis_(std::move(basis)), I_(I), centre_(I.center()) {
  if (!basis_) throw ValidationError("translate_appended: null basis");
  const double w = basis_->spec().width;
  if (std::abs(I.width() - w) > 1e-12 * w) {
    throw ValidationError("translate_appended: interval width " + std::to_string(I.width()) +
                          " does not match basis width " + std::to_string(w));
  }
}

TranslatedAppended translate_appended(AppendedPtr basis, const Interval& I) {
  return TranslatedAppended(std::move(basis), I);
}

AppendedFamily::AppendedFamily(LayoutPtr layout, std::vector<AppendedPtr> bases)
    : layout_(std::move(layout)), bases_(std::move(bases)) {
  if (!layout_) throw ValidationError("AppendedFamily: null layout");
  for (int k = 0; k < layout_->num_intervals(); ++k) {
    const double w = layout_->interval(k).width();
    const int n = layout_->degree(k);
    AppendedPtr match;
    for (const auto& b : bases_) {
      const auto& sp = b->spec();
      if (std::abs(sp.width - w) > 1e-12 * w) continue;
      if (sp.choice == AppendedChoice::HighEnd && sp.n != n) continue;
      match = b;
      break;
    }
    if (!match) {
      throw ValidationError("AppendedFamily: no appended basis for interval " + std::to_string(k));
    }
    by_interval_.push_back(match);
  }
}

std::shared_ptr<const AppendedFamily> AppendedFamily::build(LayoutPtr layout, const AppendedSpec& base,
                                                            const std::filesystem::path& cache_dir) {
  std::vector<AppendedPtr> bases;
  std::vector<std::pair<double, int>> done;
  for (int k = 0; k < layout->num_intervals(); ++k) {
    AppendedSpec sp = base;
    sp.width = layout->interval(k).width();
    sp.n = base.choice == AppendedChoice::HighEnd ? layout->degree(k) : 0;
    const auto id = std::make_pair(sp.width, sp.n);
    if (std::find(done.begin(), done.end(), id) != done.end()) continue;
    done.push_back(id);
    bases.push_back(load_or_compute(sp, cache_dir));
  }
  return std::make_shared<const AppendedFamily>(std::move(layout), std::move(bases));
}

double AppendedFamily::value(int interval, int slot, double x) const {
  const auto& b = *by_interval_.at(interval);
  return b.value(slot, x - layout_->interval(interval).center());
}

}  // namespace fracsum
