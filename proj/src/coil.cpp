#include "kdiff/coil.hpp"

#include "kdiff/error.hpp"

#include <cmath>

namespace kdiff {

RealGrid sos_combine(const CoilStack &stack) {
  if (stack.empty()) throw Error("kspace-core", "stack", "empty coil stack");
  const auto &first = stack[0];
  RealGrid out(first.shape());
  for (const auto &coil : stack.coils()) {
    require_domain(coil, Domain::Image, "kspace-core", "stack");
    require_finite(coil, "kspace-core", "stack");
    for (std::size_t i = 0; i < coil.size(); ++i) out[i] += std::norm(coil[i]);
  }
  for (auto &v : out.data()) v = std::sqrt(v);
  return out;
}

RealGrid magnitude(const ComplexGrid &g) {
  RealGrid out(g.shape());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::abs(g[i]);
  return out;
}

} // namespace kdiff
