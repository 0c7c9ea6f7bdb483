#include "nrh/sampling.hpp"

namespace nrh {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

Eigen::VectorXd random_unit_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(dim);
  do {
    for (int i = 0; i < dim; ++i) x(i) = normal(rng);
  } while (x.squaredNorm() == 0.0);
  return x / x.norm();
}

AlgVec<Radical> rational_unit_vector(std::mt19937_64& rng, int dim, int bound) {
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, bound);
  // p in R^(dim-1); x = (2p, |p|^2 - 1) / (|p|^2 + 1).
  std::vector<Rational> p(static_cast<std::size_t>(dim - 1));
  Rational norm2 = 0;
  for (auto& c : p) {
    c = Rational(num(rng), den(rng));
    norm2 += c * c;
  }
  AlgVec<Radical> x(dim);
  const Rational denom = norm2 + 1;
  for (int i = 0; i + 1 < dim; ++i) x(i) = Radical(Rational(2) * p[static_cast<std::size_t>(i)] / denom);
  x(dim - 1) = Radical((norm2 - 1) / denom);
  // Shuffle so the distinguished coordinate is not always last.
  std::uniform_int_distribution<int> pick(0, dim - 1);
  std::swap(x(dim - 1), x(pick(rng)));
  return x;
}

}  // namespace nrh
