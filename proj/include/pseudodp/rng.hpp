#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace pseudodp {

using Rng = std::mt19937_64;

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derive an independent substream seed from a master seed and a derivation
// path (stream tag + indices). Every parallel unit of work gets its own
// stream this way, so results never depend on worker count or schedule.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p));
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(seed, path));
}

// Stream tags for seed derivation paths.
namespace stream {
inline constexpr std::uint64_t kStage1Fit = 0x51;
inline constexpr std::uint64_t kReleaseFit = 0x52;
inline constexpr std::uint64_t kDrawSelect = 0x53;
inline constexpr std::uint64_t kPredict = 0x54;
inline constexpr std::uint64_t kCalibrate = 0x55;
inline constexpr std::uint64_t kData = 0x56;
inline constexpr std::uint64_t kWeightedFit = 0x57;
inline constexpr std::uint64_t kTruncatedFit = 0x58;
inline constexpr std::uint64_t kResample = 0x59;
inline constexpr std::uint64_t kCell = 0x5a;
}  // namespace stream

inline std::vector<double> dirichlet_draw(Rng& rng, std::span<const double> concentration) {
  std::vector<double> out(concentration.size());
  double total = 0.0;
  for (std::size_t k = 0; k < concentration.size(); ++k) {
    std::gamma_distribution<double> gamma(concentration[k], 1.0);
    out[k] = gamma(rng);
    total += out[k];
  }
  if (total <= 0.0) {
    // all shapes tiny and every draw underflowed; fall back to uniform
    for (double& v : out) v = 1.0 / static_cast<double>(out.size());
    return out;
  }
  for (double& v : out) v /= total;
  return out;
}

// Index draw proportional to non-negative weights.
inline std::size_t categorical_draw(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  std::uniform_real_distribution<double> unif(0.0, total);
  double u = unif(rng);
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    u -= weights[k];
    if (u < 0.0) return k;
  }
  return weights.empty() ? 0 : weights.size() - 1;
}

// sigma^2 ~ InverseGamma(shape, rate): reciprocal of Gamma(shape, rate).
inline double inverse_gamma_draw(Rng& rng, double shape, double rate) {
  std::gamma_distribution<double> gamma(shape, 1.0 / rate);
  return 1.0 / gamma(rng);
}

// k distinct indices from [0, n), order given by a partial Fisher-Yates pass.
inline std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n,
                                                           std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace pseudodp
