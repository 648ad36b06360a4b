#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace masp {

// Deterministic random stream. mt19937_64 plus explicit Box-Muller so that
// derived streams (one per replication, one per stage chain) are bit-stable:
// std RNG distributions keep hidden state that does not survive copying or
// re-seeding, which breaks reproducibility once work is split by index.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform on (0,1], never exactly 0 so log() below is safe
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // U with density (2/pi) (1+u^2)^{-2}: a Student t(3) variable scaled by
  // 1/sqrt(3), so E[U] = 0 and E[U^2] = 1.  U = Z0 / ||(Z1,Z2,Z3)||.
  double student_t3_scaled() {
    const double z0 = normal();
    const double z1 = normal();
    const double z2 = normal();
    const double z3 = normal();
    return z0 / std::sqrt(z1 * z1 + z2 * z2 + z3 * z3);
  }

  // integer in {0, ..., n-1} by rejection, unbiased
  int uniform_int(int n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<int>(x % span);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// splitmix64 step: decorrelates seeds derived from (master, index) so
// replication r and stage m never share a stream prefix.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace masp
