#pragma once

#include <cstdint>
#include <random>

namespace shearmix {

// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

// Seed of stream `index` under `master`. Counter based, so worker i draws
// the same numbers whatever the thread layout.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

}  // namespace shearmix
