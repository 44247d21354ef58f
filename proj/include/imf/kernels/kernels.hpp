#pragma once

// Data-parallel inner loops behind a runtime-selected function table.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The variants perform the same IEEE operations in the same
// order (explicit fma, correctly rounded div/sqrt, identical gather indices),
// so they agree bit for bit; tests/test_kernels.cpp holds them to that.

#include <cstddef>
#include <string_view>

namespace imf::kernels {

enum class Isa { scalar, avx2 };

/// Closed-form inverse branch shapes the kernels can evaluate in bulk.
struct InverseSpec {
  enum class Kind {
    affine,      // a*y + b
    reciprocal,  // a / (y + b)
    sqrt_branch  // a + b*sqrt(1 - y)
  };
  Kind kind = Kind::affine;
  double a = 1.0;
  double b = 0.0;
};

struct KernelTable {
  Isa isa;
  std::string_view name;

  /// out[i] = g(y[i]) for the branch shape in `spec`.
  void (*apply_inverse)(const InverseSpec& spec, const double* y, double* out, std::size_t n);

  /// Cumulative function of a piecewise-constant density on a uniform grid of
  /// `cells` cells: cum[c] is the mass left of cell c, cell_mass[c] the mass
  /// inside it. Evaluates F(t[i]) for t in [0,1].
  void (*cumulative_uniform)(const double* cum, const double* cell_mass, std::size_t cells,
                             const double* t, double* out, std::size_t n);

  /// mass[j] += |values[j+1] - values[j]| for j < cells.
  void (*accumulate_abs_diff)(const double* values, double* mass, std::size_t cells);

  /// out[i] = sum_{k<terms} w[k] cos(k * angles[i]) by Clenshaw recurrence.
  void (*cosine_series)(const double* w, std::size_t terms, const double* angles, double* out,
                        std::size_t n);

  /// Advances every x[i] by `steps` applications of 4x(1-x).
  void (*logistic_steps)(double* x, std::size_t n, std::size_t steps);

  /// Advances every x[i] by `steps` applications of the Gauss map {1/x};
  /// 0 is kept as a fixed point.
  void (*gauss_steps)(double* x, std::size_t n, std::size_t steps);
};

/// Whether the variant was compiled in and the CPU supports it.
bool available(Isa isa) noexcept;

/// Kernel table for a specific variant. Falls back to scalar when the
/// variant is unavailable.
const KernelTable& table(Isa isa) noexcept;

/// Table used by the library. Picks the widest available variant on first
/// use; the IMF_SIMD environment variable (`scalar` or `avx2`) overrides.
const KernelTable& active() noexcept;

/// Overrides the active variant for the rest of the process.
void select(Isa isa) noexcept;

namespace detail {
extern const KernelTable kScalarTable;
#if defined(IMF_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace imf::kernels
