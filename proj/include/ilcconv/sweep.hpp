#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ilcconv/iterdomain.hpp"
#include "ilcconv/learning.hpp"
#include "ilcconv/plant.hpp"
#include "ilcconv/zdomain.hpp"

namespace ilcconv {

enum class Method { ZSup, Sigma, Rho, Iterate, Analytic };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] Method parse_method(std::string_view token);
/// Comma-separated list, e.g. "zsup,sigma"; "all" selects every method.
[[nodiscard]] std::set<Method> parse_methods(std::string_view text);

/// Evenly spaced axis samples; both ends included.
struct AxisRange {
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  [[nodiscard]] std::vector<double> values() const;
  [[nodiscard]] double spacing() const noexcept { return steps > 1 ? (max - min) / (steps - 1) : 0.0; }

  /// Cell-centred samples of (lo, hi): never touches the ends.
  [[nodiscard]] static AxisRange interior(double lo, double hi, int steps);
};

struct SweepConfig {
  AxisRange a_range = AxisRange::interior(0.0, 1.0, 21);
  AxisRange b_range = AxisRange::interior(-1.0, 1.0, 21);
  LearningFunction learning = LearningFunction::named(LearningKind::L1, 1.0);
  int n = kMapTrialLength;
  int j_max = kDefaultIterations;
  std::set<Method> methods = {Method::ZSup, Method::Sigma, Method::Rho, Method::Iterate, Method::Analytic};
  SeedSpec seeds;
  int theta_grid = kDefaultThetaGrid;
  double eps_band = kMarginalBand;
  int workers = 1;

  void validate() const;
  [[nodiscard]] bool has(Method m) const { return methods.count(m) != 0; }
};

/// Per-point results. Optional numeric fields are absent when the method did not run.
struct PointReport {
  ABPoint point;
  std::optional<double> sup_t;
  std::optional<double> sigma_sq;
  std::optional<double> rho;
  Tri mc_z = Tri::Absent;
  Tri mc_sigma = Tri::Absent;
  Tri ac_rho = Tri::Absent;
  Tri mc_iter = Tri::Absent;
  Tri ac_iter = Tri::Absent;
  Tri mc_analytic = Tri::Absent;
  Tri ac_analytic = Tri::Absent;
  std::vector<std::string> flags;  ///< slow-converging, necessary-only, empirical-fit, transient, error:...

  [[nodiscard]] bool has_flag(std::string_view f) const;
};

inline constexpr std::string_view kFlagSlow = "slow-converging";
inline constexpr std::string_view kFlagNecessary = "necessary-only";
inline constexpr std::string_view kFlagFit = "empirical-fit";
inline constexpr std::string_view kFlagTransient = "transient";

/// Verdict columns that can be compared pairwise.
enum class Verdict { McZ, McSigma, AcRho, McIter, AcIter, McAnalytic, AcAnalytic };

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;
[[nodiscard]] Tri verdict_of(const PointReport& r, Verdict v) noexcept;

struct PairCounts {
  Verdict x;
  Verdict y;
  int both_true = 0;
  int both_false = 0;
  int disagree = 0;
  int either_marginal = 0;
  int near_boundary = 0;  ///< excluded: within eps_boundary cells of a verdict change
  int absent = 0;

  [[nodiscard]] int total() const noexcept {
    return both_true + both_false + disagree + either_marginal + near_boundary + absent;
  }
};

struct AgreementStats {
  std::vector<PairCounts> pairs;
  double boundary_exclusion = 0.0;  ///< in grid cells
  int ac_true_mc_false = 0;          ///< AC by rho, MC refused by sigma
  int learning_transients = 0;       ///< ... of which the iteration trace shows a transient
};

struct SweepResult {
  std::vector<double> a_values;
  std::vector<double> b_values;
  std::vector<PointReport> reports;  ///< row-major: index = ia * nb + ib
  AgreementStats stats;
};

inline constexpr double kDefaultBoundaryCells = 1.5;

/// Every requested method at one point. Numeric failures become flags, never exceptions.
[[nodiscard]] PointReport evaluate_point(const SweepConfig& config, ABPoint point);

/// Grid sweep; parallel over `config.workers` threads, output independent of the worker count.
[[nodiscard]] SweepResult run_sweep(const SweepConfig& config);

/// Pairwise confusion counts between every two populated verdict columns of the same family
/// (MC or AC). Marginal points and points within `eps_boundary` cells of a verdict change of
/// either column are excluded. Needs at least two populated columns.
[[nodiscard]] AgreementStats compare_methods(const std::vector<PointReport>& reports,
                                             double eps_boundary = kDefaultBoundaryCells);

/// Cross-tabulation of a necessary-only closed-form region against numeric MC verdicts.
struct BoundsAudit {
  LearningKind kind = LearningKind::L3Ahead;
  double v = 1.0;
  int grid = 0;
  int n = 0;
  // numeric = sup_T verdict (True only; marginal counted separately)
  int both = 0;
  int printed_only = 0;
  int numeric_only = 0;
  int neither = 0;
  int numeric_marginal = 0;
  // same table with the finite-section sigma verdict at trial length n
  int sigma_both = 0;
  int sigma_printed_only = 0;
  int sigma_numeric_only = 0;
  int sigma_neither = 0;

  /// Numeric MC-true never falls outside the printed conditions.
  [[nodiscard]] bool necessary_direction_holds() const noexcept { return numeric_only == 0; }
  [[nodiscard]] bool sigma_necessary_direction_holds() const noexcept { return sigma_numeric_only == 0; }
  [[nodiscard]] bool discrepancy() const noexcept {
    return !necessary_direction_holds() || !sigma_necessary_direction_holds();
  }
  [[nodiscard]] std::string table() const;
};

[[nodiscard]] BoundsAudit audit_printed_bounds(LearningKind kind, double v, int grid, int n, int workers = 1);

/// Reconstructs the rectangular grid behind a report list (distinct A and B values).
/// Throws InvalidArgument when the reports do not form a complete grid.
struct GridIndex {
  std::vector<double> a_values;
  std::vector<double> b_values;
  std::vector<int> at;  ///< report index for (ia, ib), row-major
};

[[nodiscard]] GridIndex grid_of(const std::vector<PointReport>& reports);

}  // namespace ilcconv
