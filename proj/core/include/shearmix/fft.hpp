#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace shearmix {

using Complex = std::complex<double>;

// Unnormalized complex DFT of a fixed length, backed by a cached FFTW plan.
// forward: c_l = sum_j f_j e^{-2 pi i j l / n}; inverse has the opposite sign
// and no 1/n factor. Plans are shared and immutable, so execute is safe from
// any thread.
class Fft1D {
 public:
  explicit Fft1D(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

// Signed wavenumber of DFT index j for length n (Nyquist reported as -n/2).
inline long wavenumber(std::size_t j, std::size_t n) {
  const long jj = static_cast<long>(j);
  const long nn = static_cast<long>(n);
  return jj < (nn + 1) / 2 ? jj : jj - nn;
}

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace shearmix
