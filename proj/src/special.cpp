#include "imf/special.hpp"

#include <cmath>

namespace imf {

double digamma_diff(double z, double d) {
  if (d == 0.0) return 0.0;
  double acc = 0.0;
  // psi(z+1) = psi(z) + 1/z; shift until the asymptotic series is accurate.
  while (z < 16.0) {
    acc += d / (z * (z + d));
    z += 1.0;
  }
  const double w = z + d;
  const double iz2 = 1.0 / (z * z);
  const double iw2 = 1.0 / (w * w);
  const double d2 = d * (z + w) * iz2 * iw2;  // 1/z^2 - 1/w^2
  const double d4 = d2 * (iz2 + iw2);         // 1/z^4 - 1/w^4
  const double d6 = d2 * (iz2 * iz2 + iz2 * iw2 + iw2 * iw2);
  const double d8 = d4 * (iz2 * iz2 + iw2 * iw2);
  const double series = std::log1p(d / z) + d / (2.0 * z * w) + d2 / 12.0 - d4 / 120.0 +
                        d6 / 252.0 - d8 / 240.0;
  return acc + series;
}

double reciprocal_run_sum(double a, double b, double y, double y2) {
  const double d = y2 - y;
  if (b == 0.0) return digamma_diff(y + a, d);
  return digamma_diff(y + a, d) - digamma_diff(y + b + 1.0, d);
}

}  // namespace imf
