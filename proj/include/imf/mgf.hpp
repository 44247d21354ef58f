#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "imf/pullback.hpp"

namespace imf {

/// (1/n) sum_{k<n} c_k. Throws DomainError for n == 0 or n > seq.size().
double cesaro(const PullbackSequence& seq, std::size_t n);

/// Mean of the first n error bounds (the engine part of a Cesaro error).
double cesaro_engine_bound(const PullbackSequence& seq, std::size_t n);

struct MgfValue {
  double value = 0.0;             // sum_{k<n} lambda^k c_k
  double truncation_bound = 0.0;  // mu(M) |lambda|^n / (1 - |lambda|)
  double engine_bound = 0.0;      // sum |lambda|^k e_k
};

/// Partial sum of the generating function. Throws DomainError unless
/// |lambda| < 1 and 1 <= n <= seq.size().
MgfValue mgf_partial(const PullbackSequence& seq, double lambda, std::size_t n);

/// A residual of an identity that holds exactly, with the tolerance it is
/// expected to meet (rounding plus engine error bounds).
struct IdentityCheck {
  double residual = 0.0;
  double tolerance = 0.0;
  [[nodiscard]] bool passed() const noexcept { return residual <= tolerance; }
};

/// |S_n(lambda; A) - lambda S_{n-1}(lambda; phi^{-1} A) - mu(A)|.
IdentityCheck functional_equation_residual(const PiecewiseMap& map, const DensityMeasure& mu,
                                           const IntervalSet& set, double lambda, std::size_t n,
                                           const EngineOptions& opts = {});

struct CorollaryCheck {
  /// |sum_{k<n} s^k (c_k - s c_{k+1}) - mu(A)|, which telescopes to |s^n c_n|.
  double residual = 0.0;
  /// mu(M) |s|^n plus engine error.
  double bound = 0.0;
  /// Distance between the sum and c_0 - s^n c_n; rounding only.
  double identity_defect = 0.0;
  [[nodiscard]] bool passed() const noexcept {
    return residual <= bound && identity_defect <= 1e-12;
  }
};

CorollaryCheck corollary_identity_check(const PiecewiseMap& map, const DensityMeasure& mu,
                                        const IntervalSet& set, double s, std::size_t n,
                                        const EngineOptions& opts = {});

/// |mu_n(phi^{-1} A) - ((n+1)/n) mu_{n+1}(A) + (1/n) mu(A)| with mu_n the
/// Cesaro average of length n.
IdentityCheck schur_identity_residual(const PiecewiseMap& map, const DensityMeasure& mu,
                                      const IntervalSet& set, std::size_t n,
                                      const EngineOptions& opts = {});

struct AbelEstimate {
  std::vector<double> lambda_grid;
  std::vector<double> raw;  // (1 - lambda) S(lambda)
  double extrapolated = 0.0;
  double uncertainty = 0.0;
};

/// lambda_j = 1 - 2^-j for j = 1..J, J the largest with
/// total_mass * lambda_J^n / (1 - lambda_J) < 1e-6 (at least j = 1).
std::vector<double> abel_grid(std::size_t n, double total_mass = 1.0);

/// Abel means on the grid, extrapolated to lambda = 1 by two Richardson
/// steps in h = 1 - lambda. S(lambda) is the partial sum completed with the
/// last term's geometric tail; the truncation bound covers the difference.
/// Throws DomainError if the grid is not increasing in (0,1) or reaches
/// 1 - 1/seq.size().
AbelEstimate abel_estimate(const PullbackSequence& seq, const std::vector<double>& lambda_grid);

enum class Method { cesaro, abel, both };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

struct Budget {
  std::size_t n = 1000;
  std::optional<std::vector<double>> lambda_grid;  // unset: abel_grid(n)
  EngineOptions engine;
};

struct InvariantMeasureEstimate {
  double value = 0.0;  // the Cesaro value unless only Abel was requested
  double uncertainty = 0.0;
  Method method = Method::both;
  std::size_t n = 0;
  std::optional<double> cesaro;
  std::optional<double> cesaro_uncertainty;
  std::optional<AbelEstimate> abel;
  std::optional<double> discrepancy;  // |cesaro - abel|
  PullbackSequence sequence;
};

/// Cesaro uncertainty: mean engine bound plus |C_n - C_{n/2}|, which tracks
/// the O(1/n) bias of a convergent average.
InvariantMeasureEstimate invariant_measure(const PiecewiseMap& map, const DensityMeasure& mu,
                                           const IntervalSet& set, Method method,
                                           const Budget& budget = {});

/// Same, from an already computed sequence.
InvariantMeasureEstimate invariant_measure(const PullbackSequence& seq, Method method,
                                           const std::optional<std::vector<double>>& grid = {});

struct InvarianceResiduals {
  double set_residual = 0.0;     // |mu_hat(phi^{-1} A) - mu_hat(A)|
  double testfn_residual = 0.0;  // |int f o phi dmu_hat - int f dmu_hat|
  double density_error = 0.0;    // L1 error bound of mu_hat
};

/// mu_hat is the transfer-engine Cesaro density of length budget.n;
/// integrals of f o phi are taken against L mu_hat.
InvarianceResiduals invariance_residuals(const PiecewiseMap& map, const DensityMeasure& mu,
                                         const IntervalSet& set,
                                         const std::function<double(double)>& f,
                                         const Budget& budget = {});

/// sup_{m <= n_max} mu_m(A_j) per set.
std::vector<double> additivity_diagnostic(const PiecewiseMap& map, const DensityMeasure& mu,
                                          const std::vector<IntervalSet>& nested_sets,
                                          std::size_t n_max, const EngineOptions& opts = {});

}  // namespace imf
