#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ncvr {

/// Deterministic, platform-independent random stream.
///
/// The generator is xoshiro256** seeded through SplitMix64. Bounded integer
/// draws use Lemire's multiply-and-reject method, uniform reals take the top
/// 53 bits, and normal deviates come from the Marsaglia polar method. None of
/// these depend on the standard library's distribution objects, whose output
/// is implementation-defined, so identical seeds give bit-identical streams on
/// every platform.
class RngStream {
 public:
  /// Identifier recorded in every RunRecord and manifest.
  static constexpr std::string_view kAlgorithm =
      "xoshiro256**/splitmix64-seed/lemire-bounded/polar-normal";

  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform over {0, ..., bound - 1}; bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Uniform on [0, 1).
  double uniform01();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  double normal();

  /// Independent child stream keyed by `stream_id`; does not advance *this.
  RngStream derive(std::uint64_t stream_id) const;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// SplitMix64 finalizer; exposed for seed derivation in experiment runners.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace ncvr
