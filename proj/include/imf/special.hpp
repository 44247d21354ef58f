#pragma once

namespace imf {

/// psi(z + d) - psi(z) for z > 0, d >= 0, without the cancellation of
/// subtracting two digamma values. Accurate to a few ulps of the result.
double digamma_diff(double z, double d);

/// sum_{k=a}^{b} [1/(y+k) - 1/(y2+k)] for y <= y2; b == 0 means b = infinity.
double reciprocal_run_sum(double a, double b, double y, double y2);

}  // namespace imf
