#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace relkit {

// SplitMix64 (Steele, Lea & Flood 2014). One instance per purpose; streams for
// distinct purposes are derived with derive_stream so that item draws, latent
// draws, and response draws stay independently reproducible under one master
// seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 random bits.
  double next_double();

  double next_uniform(double lo, double hi);

  /// Standard normal via Box-Muller; the second deviate of each pair is cached.
  double next_normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives a stream seed from a base seed and a key path, e.g.
/// derive_stream(master, {m, rep}) then derive_stream(base, {purpose}).
std::uint64_t derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// FNV-1a 64-bit hash; keys data-dependent jitter streams.
std::uint64_t hash_bytes(const void* data, std::size_t size);

}  // namespace relkit
