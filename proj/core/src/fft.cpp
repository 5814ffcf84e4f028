#include "shearmix/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "shearmix/error.hpp"

namespace shearmix {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// The FFTW planner is not thread safe; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  std::vector<Complex> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, flags),
             fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, flags)};
  if (!p.forward || !p.inverse) throw NumericalError("FFTW planning failed");
  cache.emplace(n, p);
  return p;
}

}  // namespace

Fft1D::Fft1D(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("FFT length must be positive");
  const auto p = plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void Fft1D::forward(std::span<Complex> data) const {
  if (data.size() != n_) throw InvalidArgument("FFT buffer length mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void Fft1D::inverse(std::span<Complex> data) const {
  if (data.size() != n_) throw InvalidArgument("FFT buffer length mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), buf, buf);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace shearmix
