#pragma once

#include "kdiff/grid.hpp"

namespace kdiff {

/// Root-sum-of-squares of coil magnitudes. Stack must be image domain.
RealGrid sos_combine(const CoilStack &stack);

/// Elementwise magnitude of one grid.
RealGrid magnitude(const ComplexGrid &g);

} // namespace kdiff
