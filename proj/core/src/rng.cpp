#include "pdmp/rng.hpp"

#include <cmath>

namespace pdmp {

std::uint64_t
mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t
derive_seed(std::uint64_t base_seed, std::uint64_t n, std::uint64_t replicate)
{
  std::uint64_t h = mix64(base_seed);
  h = mix64(h ^ n);
  h = mix64(h ^ (replicate + 0x632be59bd9b4e019ULL));
  return h;
}

ExponentialStream::ExponentialStream(std::uint64_t seed)
  : seed_(seed)
  , engine_(mix64(seed))
{}

double
ExponentialStream::uniform()
{
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double
ExponentialStream::next()
{
  return -std::log1p(-uniform());
}

} // namespace pdmp
