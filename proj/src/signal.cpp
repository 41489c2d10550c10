#include "roughmax/signal.hpp"

#include <fftw3.h>

#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

namespace roughmax {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::int64_t fft_size(std::int64_t n) {
  std::int64_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct FftBuffers {
  explicit FftBuffers(std::int64_t n)
      : size(n),
        real(fftw_alloc_real(static_cast<std::size_t>(n))),
        spec(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1))) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
  }
  ~FftBuffers() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;

  void load(const Signal& s) {
    std::fill(real, real + size, 0.0);
    std::copy(s.values.begin(), s.values.end(), real);
  }

  std::int64_t size;
  double* real;
  fftw_complex* spec;
  fftw_plan forward;
  fftw_plan backward;
};

Signal convolve_direct(const Signal& a, const Signal& b) {
  Signal out;
  out.offset = a.offset + b.offset;
  out.values.assign(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a.values[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out.values[i + j] += ai * b.values[j];
  }
  return out;
}

Signal convolve_fast(const Signal& a, const Signal& b) {
  const auto len = static_cast<std::int64_t>(a.size() + b.size() - 1);
  const std::int64_t n = fft_size(len);
  FftBuffers fa(n), fb(n);
  fa.load(a);
  fb.load(b);
  fftw_execute(fa.forward);
  fftw_execute(fb.forward);
  for (std::int64_t k = 0; k <= n / 2; ++k) {
    const double re = fa.spec[k][0] * fb.spec[k][0] - fa.spec[k][1] * fb.spec[k][1];
    const double im = fa.spec[k][0] * fb.spec[k][1] + fa.spec[k][1] * fb.spec[k][0];
    fa.spec[k][0] = re;
    fa.spec[k][1] = im;
  }
  fftw_execute(fa.backward);
  Signal out;
  out.offset = a.offset + b.offset;
  out.values.resize(static_cast<std::size_t>(len));
  const double scale = 1.0 / static_cast<double>(n);
  for (std::int64_t i = 0; i < len; ++i) out.values[static_cast<std::size_t>(i)] = fa.real[i] * scale;
  return out;
}

}  // namespace

Signal convolve(const Signal& a, const Signal& b, ConvolutionMethod method) {
  if (a.empty() || b.empty()) return {};
  if (static_cast<std::int64_t>(a.size() + b.size()) - 1 > kMaxConvolutionLength) {
    throw RangeError("convolve: output support exceeds 2^30");
  }
  return method == ConvolutionMethod::Direct ? convolve_direct(a, b) : convolve_fast(a, b);
}

Signal self_correlation(const Signal& a) {
  if (a.empty()) return {};
  const auto len = static_cast<std::int64_t>(a.size());
  if (2 * len - 1 > kMaxConvolutionLength) throw RangeError("self_correlation: output exceeds 2^30");
  const std::int64_t n = fft_size(2 * len - 1);
  FftBuffers f(n);
  f.load(a);
  fftw_execute(f.forward);
  for (std::int64_t k = 0; k <= n / 2; ++k) {
    f.spec[k][0] = f.spec[k][0] * f.spec[k][0] + f.spec[k][1] * f.spec[k][1];
    f.spec[k][1] = 0.0;
  }
  fftw_execute(f.backward);
  // circular lag x sits at index x mod n
  Signal out;
  out.offset = -(len - 1);
  out.values.resize(static_cast<std::size_t>(2 * len - 1));
  const double scale = 1.0 / static_cast<double>(n);
  for (std::int64_t x = 0; x < len; ++x) {
    const double v = x == 0 ? f.real[0] * scale : 0.5 * (f.real[x] + f.real[n - x]) * scale;
    out.values[static_cast<std::size_t>(len - 1 + x)] = v;
    out.values[static_cast<std::size_t>(len - 1 - x)] = v;
  }
  return out;
}

void write_signal_csv(std::ostream& os, const Signal& s, bool skip_zeros) {
  os << "x,value\n";
  char buf[64];
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (skip_zeros && s.values[i] == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%.17g", s.values[i]);
    os << (s.offset + static_cast<std::int64_t>(i)) << ',' << buf << '\n';
  }
}

Signal read_signal_csv(std::istream& is) {
  std::string line;
  std::vector<std::pair<std::int64_t, double>> pts;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("signal csv: missing comma in '" + line + "'");
    pts.emplace_back(std::stoll(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  if (pts.empty()) return {};
  std::int64_t lo = pts.front().first, hi = lo;
  for (const auto& [x, v] : pts) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  Signal s;
  s.offset = lo;
  s.values.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [x, v] : pts) s.values[static_cast<std::size_t>(x - lo)] += v;
  return s;
}

}  // namespace roughmax
