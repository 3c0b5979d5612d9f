#include "scalred/sampling.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace scalred {

namespace {

constexpr std::array<unsigned, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::size_t i, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double uniform01(std::uint64_t& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }

void SamplingBox::validate(std::size_t dim) const {
  if (static_cast<std::size_t>(lower.size()) != dim || static_cast<std::size_t>(upper.size()) != dim) {
    throw DimensionError("sampling box must have " + std::to_string(dim) + " bounds per side");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) throw std::invalid_argument("sampling box lower bound must be below upper bound");
  }
  if (count < 1) throw std::invalid_argument("sampling box count must be at least 1");
  if (!(scale_min > 0.0) || scale_max < scale_min) throw std::invalid_argument("invalid sampling scale range");
}

QuasiRandom::QuasiRandom(std::size_t dim, std::uint64_t seed) : shift_(dim) {
  if (dim > kPrimes.size()) throw DimensionError("quasi-random sampler supports at most 16 dimensions");
  std::uint64_t state = seed;
  for (auto& s : shift_) s = uniform01(state);
}

std::vector<double> QuasiRandom::next() {
  std::vector<double> p(shift_.size());
  for (std::size_t d = 0; d < p.size(); ++d) {
    double u = radical_inverse(index_, kPrimes[d]) + shift_[d];
    p[d] = u >= 1.0 ? u - 1.0 : u;
  }
  ++index_;
  return p;
}

}  // namespace scalred
