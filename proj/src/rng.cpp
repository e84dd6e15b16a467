#include "kdiff/rng.hpp"

#include <vector>

namespace kdiff {

Rng derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * tags.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto t : tags) push(t);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

ComplexGrid complex_normal(Shape shape, Domain domain, Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexGrid z(shape, domain);
  for (auto &v : z.data()) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = {re, im};
  }
  return z;
}

} // namespace kdiff
