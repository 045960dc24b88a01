#include "t1track/rng.hpp"

#include <cmath>
#include <numbers>

namespace t1track {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng CounterRng::stream(std::uint64_t seed, std::uint64_t index) noexcept {
  return CounterRng(mix64(seed ^ mix64(index + 0x632BE59BD9B4E019ULL)));
}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::exponential(double rate) noexcept {
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return -std::log(uniform_positive()) / rate;
}

double CounterRng::normal() noexcept {
  const double u1 = uniform_positive();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace t1track
