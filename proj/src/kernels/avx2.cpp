#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "imf/kernels/kernels.hpp"

namespace imf::kernels {

namespace {

constexpr std::size_t kLanes = 4;

void apply_inverse(const InverseSpec& spec, const double* y, double* out, std::size_t n) {
  const __m256d a = _mm256_set1_pd(spec.a);
  const __m256d b = _mm256_set1_pd(spec.b);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  switch (spec.kind) {
    case InverseSpec::Kind::affine:
      for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(y + i), b));
      }
      for (; i < n; ++i) out[i] = std::fma(spec.a, y[i], spec.b);
      break;
    case InverseSpec::Kind::reciprocal:
      for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(out + i, _mm256_div_pd(a, _mm256_add_pd(_mm256_loadu_pd(y + i), b)));
      }
      for (; i < n; ++i) out[i] = spec.a / (y[i] + spec.b);
      break;
    case InverseSpec::Kind::sqrt_branch:
      for (; i + kLanes <= n; i += kLanes) {
        const __m256d r = _mm256_sqrt_pd(_mm256_sub_pd(one, _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(b, r, a));
      }
      for (; i < n; ++i) out[i] = std::fma(spec.b, std::sqrt(1.0 - y[i]), spec.a);
      break;
  }
}

void cumulative_uniform(const double* cum, const double* cell_mass, std::size_t cells,
                        const double* t, double* out, std::size_t n) {
  const double scale_s = static_cast<double>(cells);
  const double last_s = static_cast<double>(cells - 1);
  const __m256d scale = _mm256_set1_pd(scale_s);
  const __m256d last = _mm256_set1_pd(last_s);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d u = _mm256_mul_pd(_mm256_loadu_pd(t + i), scale);
    const __m256d c = _mm256_min_pd(_mm256_max_pd(_mm256_floor_pd(u), zero), last);
    const __m128i idx = _mm256_cvttpd_epi32(c);
    const __m256d base = _mm256_i32gather_pd(cum, idx, 8);
    const __m256d slope = _mm256_i32gather_pd(cell_mass, idx, 8);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(_mm256_sub_pd(u, c), slope, base));
  }
  for (; i < n; ++i) {
    const double u = t[i] * scale_s;
    const double c = std::clamp(std::floor(u), 0.0, last_s);
    const auto idx = static_cast<std::size_t>(c);
    out[i] = std::fma(u - c, cell_mass[idx], cum[idx]);
  }
}

void accumulate_abs_diff(const double* values, double* mass, std::size_t cells) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t j = 0;
  for (; j + kLanes <= cells; j += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(values + j + 1), _mm256_loadu_pd(values + j));
    const __m256d m = _mm256_add_pd(_mm256_loadu_pd(mass + j), _mm256_andnot_pd(sign, d));
    _mm256_storeu_pd(mass + j, m);
  }
  for (; j < cells; ++j) mass[j] += std::abs(values[j + 1] - values[j]);
}

void cosine_series(const double* w, std::size_t terms, const double* angles, double* out,
                   std::size_t n) {
  if (terms == 0) {
    std::fill(out, out + n, 0.0);
    return;
  }
  alignas(32) double cs[kLanes];
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) cs[l] = std::cos(angles[i + l]);
    const __m256d c = _mm256_load_pd(cs);
    const __m256d two_c = _mm256_add_pd(c, c);
    __m256d b1 = _mm256_setzero_pd();
    __m256d b2 = _mm256_setzero_pd();
    for (std::size_t k = terms - 1; k >= 1; --k) {
      const __m256d b0 = _mm256_fmadd_pd(two_c, b1, _mm256_sub_pd(_mm256_set1_pd(w[k]), b2));
      b2 = b1;
      b1 = b0;
    }
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(c, b1, _mm256_sub_pd(_mm256_set1_pd(w[0]), b2)));
  }
  for (; i < n; ++i) {
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
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d v = _mm256_loadu_pd(x + i);
    for (std::size_t s = 0; s < steps; ++s) {
      v = _mm256_mul_pd(_mm256_mul_pd(four, v), _mm256_sub_pd(one, v));
    }
    _mm256_storeu_pd(x + i, v);
  }
  for (; i < n; ++i) {
    double v = x[i];
    for (std::size_t s = 0; s < steps; ++s) v = 4.0 * v * (1.0 - v);
    x[i] = v;
  }
}

void gauss_steps(double* x, std::size_t n, std::size_t steps) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d v = _mm256_loadu_pd(x + i);
    for (std::size_t s = 0; s < steps; ++s) {
      const __m256d is_zero = _mm256_cmp_pd(v, zero, _CMP_EQ_OQ);
      const __m256d r = _mm256_div_pd(one, _mm256_blendv_pd(v, one, is_zero));
      v = _mm256_blendv_pd(_mm256_sub_pd(r, _mm256_floor_pd(r)), zero, is_zero);
    }
    _mm256_storeu_pd(x + i, v);
  }
  for (; i < n; ++i) {
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
const KernelTable kAvx2Table{
    Isa::avx2,          "avx2",        &apply_inverse,  &cumulative_uniform,
    &accumulate_abs_diff, &cosine_series, &logistic_steps, &gauss_steps,
};
}  // namespace detail

}  // namespace imf::kernels
