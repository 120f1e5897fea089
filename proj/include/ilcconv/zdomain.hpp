#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "ilcconv/learning.hpp"
#include "ilcconv/plant.hpp"

namespace ilcconv {

/// Width of the band around a boundary (|sup - 1|, or an inequality's slack)
/// inside which a verdict is reported as marginal.
inline constexpr double kMarginalBand = 1e-6;

/// Three-valued verdict; Absent means the method was not run.
enum class Tri : char { Absent, False, True, Marginal };

[[nodiscard]] std::string_view to_string(Tri t) noexcept;

/// True below 1 - band, Marginal within band of 1, False above.
[[nodiscard]] Tri below_one(double value, double band = kMarginalBand) noexcept;

/// Closed-loop plant G/(1 + C G) with the PI controller C(z) = Kp + Ki tau_s z / (z - 1).
[[nodiscard]] std::complex<double> closed_loop_p(std::complex<double> z, const PlantParams& params);

/// Learning operator on the unit circle with Q = 1:
/// T = 1 - L(e^{i theta}) e^{i theta} A / (e^{i theta} - B).
[[nodiscard]] std::complex<double> t_of_theta(ABPoint point, const LearningFunction& lf, double theta);

/// Locus of T over theta in [0, pi] and its refined supremum.
struct TLocus {
  std::vector<double> thetas;
  std::vector<std::complex<double>> values;
  double sup_abs = 0.0;
  double argmax_theta = 0.0;
};

inline constexpr int kDefaultThetaGrid = 1024;

/// Uniform grid plus golden-section refinement (to 1e-10 in theta) around every local maximum.
[[nodiscard]] TLocus sup_t(ABPoint point, const LearningFunction& lf, int grid_size = kDefaultThetaGrid);

enum class RegionBasis { Exact, NecessaryOnly, EmpiricalFit };

[[nodiscard]] std::string_view to_string(RegionBasis b) noexcept;

/// Outcome of a closed-form region test. `holds` is the MC (or AC) membership;
/// `marginal` is set when some inequality is within kMarginalBand of equality.
struct RegionVerdict {
  bool holds = false;
  bool marginal = false;
  RegionBasis basis = RegionBasis::Exact;
  std::string detail;

  [[nodiscard]] Tri tri() const noexcept {
    return marginal ? Tri::Marginal : (holds ? Tri::True : Tri::False);
  }
};

/// Closed-form monotonic-convergence region. Throws Unsupported for kinds without one
/// (L3SymmetricHalf, Custom).
[[nodiscard]] RegionVerdict mc_region_analytic(LearningKind kind, ABPoint point, double v);

/// Closed-form asymptotic-convergence region. Causal kinds use |1 - vA| < 1; the look-ahead
/// curves are only available at v = 1.
[[nodiscard]] RegionVerdict ac_region_analytic(LearningKind kind, ABPoint point, double v);

[[nodiscard]] bool has_mc_closed_form(LearningKind kind) noexcept;
[[nodiscard]] bool has_ac_closed_form(LearningKind kind, double v) noexcept;

/// Boundary curves B(A) of the closed-form regions, for overlays.
struct AnalyticCurve {
  std::string label;  ///< e.g. "mc_upper", "ac_lower"
  RegionBasis basis;
  double (*b_of_a)(double a, double v);
};

/// Empty for kinds without a closed form (L3Symmetric has an empty MC region and no curves).
[[nodiscard]] std::vector<AnalyticCurve> analytic_curves(LearningKind kind, double v);

}  // namespace ilcconv
