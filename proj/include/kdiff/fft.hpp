#pragma once

#include "kdiff/grid.hpp"

namespace kdiff {

// Centered, orthonormal 2-D DFT. Zero frequency sits at
// (floor(H/2), floor(W/2)); both directions scale by 1/sqrt(H*W).
ComplexGrid fft2c(const ComplexGrid &img);
ComplexGrid ifft2c(const ComplexGrid &ksp);

} // namespace kdiff
