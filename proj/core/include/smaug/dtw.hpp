#pragma once

#include <span>

namespace smaug {

/// Unconstrained dynamic time warping with absolute-difference cost:
///   d(i, j) = |a_i - b_j| + min(d(i-1, j), d(i, j-1), d(i-1, j-1))
/// with d(0, 0) = 0 and infinite borders. Uses two rolling rows.
/// Throws EmptySequence if either input is empty.
double dtw(std::span<const double> a, std::span<const double> b);

}  // namespace smaug
