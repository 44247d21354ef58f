#include <algorithm>
#include <cmath>

#include "imf/kernels/kernels.hpp"

namespace imf::kernels {

namespace {

void apply_inverse(const InverseSpec& spec, const double* y, double* out, std::size_t n) {
  switch (spec.kind) {
    case InverseSpec::Kind::affine:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::fma(spec.a, y[i], spec.b);
      break;
    case InverseSpec::Kind::reciprocal:
      for (std::size_t i = 0; i < n; ++i) out[i] = spec.a / (y[i] + spec.b);
      break;
    case InverseSpec::Kind::sqrt_branch:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::fma(spec.b, std::sqrt(1.0 - y[i]), spec.a);
      break;
  }
}

void cumulative_uniform(const double* cum, const double* cell_mass, std::size_t cells,
                        const double* t, double* out, std::size_t n) {
  const double scale = static_cast<double>(cells);
  const double last = static_cast<double>(cells - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = t[i] * scale;
    const double c = std::clamp(std::floor(u), 0.0, last);
    const auto idx = static_cast<std::size_t>(c);
    out[i] = std::fma(u - c, cell_mass[idx], cum[idx]);
  }
}

void accumulate_abs_diff(const double* values, double* mass, std::size_t cells) {
  for (std::size_t j = 0; j < cells; ++j) mass[j] += std::abs(values[j + 1] - values[j]);
}

void cosine_series(const double* w, std::size_t terms, const double* angles, double* out,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (terms == 0) {
      out[i] = 0.0;
      continue;
    }
    const double c = std::cos(angles[i]);
    const double two_c = c + c;
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = terms - 1; k >= 1; --k) {
      const double b0 = std::fma(two_c, b1, w[k] - b2);
      b2 = b1;
      b1 = b0;
    }
    out[i] = std::fma(c, b1, w[0] - b2);
  }
}

void logistic_steps(double* x, std::size_t n, std::size_t steps) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    for (std::size_t s = 0; s < steps; ++s) v = 4.0 * v * (1.0 - v);
    x[i] = v;
  }
}

void gauss_steps(double* x, std::size_t n, std::size_t steps) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    for (std::size_t s = 0; s < steps; ++s) {
      if (v == 0.0) break;
      const double r = 1.0 / v;
      v = r - std::floor(r);
    }
    x[i] = v;
  }
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{
    Isa::scalar,        "scalar",      &apply_inverse,  &cumulative_uniform,
    &accumulate_abs_diff, &cosine_series, &logistic_steps, &gauss_steps,
};
}  // namespace detail

}  // namespace imf::kernels
