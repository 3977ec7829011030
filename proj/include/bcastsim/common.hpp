#pragma once

#include <charconv>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bcastsim {

// ---------------------------------------------------------------------------
// Error types. One class per contract failure named in the module interfaces.
// ---------------------------------------------------------------------------

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoFeasibleZeta : SimError { using SimError::SimError; };
struct UnknownNode : SimError { using SimError::SimError; };
struct DisconnectedGraph : SimError { using SimError::SimError; };
struct InvalidEpsilon : SimError { using SimError::SimError; };
struct ModelMismatch : SimError { using SimError::SimError; };
struct MissingScript : SimError { using SimError::SimError; };
struct NotATransmitter : SimError { using SimError::SimError; };
struct StaticOnly : SimError { using SimError::SimError; };
struct NotSymmetric : SimError { using SimError::SimError; };
struct BudgetInfeasible : SimError { using SimError::SimError; };
struct ConfigInvalid : SimError { using SimError::SimError; };
struct IntegrityFailure : SimError { using SimError::SimError; };
struct ParseError : SimError { using SimError::SimError; };

// ---------------------------------------------------------------------------
// Deterministic hashing / RNG.
//
// All stochastic draws in the simulator come from counter-style splitmix64
// chains so that a (seed, node, round, slot) tuple always maps to the same
// uniform variate regardless of how many other nodes exist or in which order
// they are processed. Generators use a sequential SplitMix stream.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
}

template <typename... Rest>
std::uint64_t mix64(std::uint64_t a, std::uint64_t b, Rest... rest) {
  return mix64(mix64(a, b), static_cast<std::uint64_t>(rest)...);
}

// Uniform double in [0, 1) from a 64-bit hash value.
inline double u01(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// FNV-1a over a string; used for stable per-node substream keys.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Sequential seeded stream for generators.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return u01(next()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Canonical double formatting: shortest round-trip representation, used by
// every serializer so that trace hashes and file round-trips are bit-exact.
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace bcastsim
