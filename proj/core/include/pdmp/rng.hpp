#pragma once

#include <cstdint>
#include <random>

namespace pdmp {

//! SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

//! Seed of replicate `replicate` at chain length `n` under `base_seed`.
//! Distinct (n, replicate) pairs map to unrelated streams, so replicates can
//! run in any order or concurrently and still reproduce bit for bit.
std::uint64_t derive_seed(std::uint64_t base_seed,
                          std::uint64_t n,
                          std::uint64_t replicate);

//! Seeded stream of i.i.d. unit exponential draws.
//!
//! The engine (mt19937_64) and the conversion are fully specified, so the
//! stream is identical across standard libraries, unlike
//! std::exponential_distribution.
class ExponentialStream
{
public:
  explicit ExponentialStream(std::uint64_t seed);

  //! Uniform on [0, 1) with 53 random bits.
  double uniform();
  //! -log(1 - U).
  double next();

  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

} // namespace pdmp
