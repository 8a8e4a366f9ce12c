#ifndef VANETCONN_RANDOM_HPP
#define VANETCONN_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace vanetconn {

/// SplitMix64 finalizer. Used to turn (master seed, index) pairs into
/// well-separated engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seeded random stream. Every draw is derived from raw 64-bit engine output
/// with explicit arithmetic, so a given seed yields the same sequence on any
/// standard library (std distributions are implementation-defined).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
  }

  /// Independent stream for one trial of an ensemble. Depends only on the
  /// pair, never on which worker runs the trial or in what order.
  static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t trial) {
    return RandomStream(splitmix64(master_seed ^ splitmix64(trial + 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on (0, 1], 53-bit resolution.
  double uniform_open_closed() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Exponential with the given rate, by inverse CDF.
  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
    return -std::log(uniform_open_closed()) / rate;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vanetconn

#endif  // VANETCONN_RANDOM_HPP
