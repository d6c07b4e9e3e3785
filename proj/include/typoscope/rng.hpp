#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace typoscope {

// Derives an independent stream seed from a base seed and a label
// ("init", "shuffle", "dropout", "synth", ...), so each component of a
// run is reproducible on its own.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

// mt19937_64 with hand-rolled real mappings.  The standard pins the
// engine's output sequence but not the distribution adaptors, so the
// mappings are done here to keep results identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via the polar method (no cached spare).
  double gaussian() {
    for (;;) {
      const double u = uniform(-1.0, 1.0);
      const double v = uniform(-1.0, 1.0);
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  // [0, n)
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace typoscope
