#ifndef FAIRMETRICS_RNG_H_
#define FAIRMETRICS_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace fairmetrics {

// Portable, reproducible random source. std::mt19937_64 output is fixed by
// the standard, but the std distributions are not, so bounded integers and
// normals are derived here from raw engine output.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64/lemire/box-muller v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for a (seed, stream) pair via splitmix64 mixing.
  static Rng Stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t Uniform(std::uint64_t bound);

  // Uniform real in [0, 1) with 53 random bits.
  double UniformReal();

  double Normal(double mean, double sigma);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fairmetrics

#endif  // FAIRMETRICS_RNG_H_
