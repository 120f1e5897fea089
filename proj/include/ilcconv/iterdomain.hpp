#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ilcconv/lifted.hpp"

namespace ilcconv {

inline constexpr int kDefaultIterations = 800;
inline constexpr double kMonotoneTolerance = 1e-12;
inline constexpr std::uint64_t kDefaultSeed = 20161117;

/// Norm history of x_{j+1} = M x_j.
struct IterationTrace {
  std::vector<double> log_norms;  ///< ln ||x_j||, j = 0..J
  std::optional<int> mc_start;    ///< first step j with ln||x_{j+1}|| - ln||x_j|| <= tol
  std::optional<int> mc_stop;     ///< first step after mc_start that increases again
  double ac_log_ratio = 0.0;      ///< log10(||x_J|| / ||x_0||)

  /// Decreasing from the first step and never increasing afterwards.
  [[nodiscard]] bool monotone() const noexcept { return mc_start == 0 && !mc_stop; }
  /// Growth before decay, or decay interrupted by growth.
  [[nodiscard]] bool has_transient() const noexcept { return (mc_start && *mc_start > 0) || mc_stop.has_value(); }
  /// Largest ln ||x_j|| - ln ||x_0||.
  [[nodiscard]] double peak_log_growth() const noexcept;
};

/// Iterates with unit renormalisation every step and accumulates the log of each scale factor,
/// so transients of any size stay representable.
[[nodiscard]] IterationTrace iterate(const Eigen::MatrixXd& m, const Eigen::VectorXd& x0, int j_max);
[[nodiscard]] IterationTrace iterate(const LiftedOperators& ops, const Eigen::VectorXd& x0, int j_max);

/// Initial vectors tried by iteration_verdict.
struct SeedSpec {
  bool singular_vector = true;  ///< right singular vector of the largest singular value
  bool impulse = true;          ///< e_0
  bool ones = true;
  int random_count = 4;         ///< standard-normal vectors drawn from `seed`
  std::uint64_t seed = kDefaultSeed;

  [[nodiscard]] static SeedSpec impulse_only();
};

struct IterationVerdict {
  bool mc = false;  ///< every seed monotone from the first step
  bool ac = false;  ///< every seed ends below its starting norm
  IterationTrace trace;                 ///< the seed with the largest peak growth
  std::vector<std::string> seed_labels;
  std::vector<IterationTrace> traces;   ///< one per seed, same order as seed_labels
  std::uint64_t seed = 0;

  [[nodiscard]] std::string seed_info() const;
};

/// `top_right_vector` avoids recomputing the singular vector when the caller already has it.
[[nodiscard]] IterationVerdict iteration_verdict(const LiftedOperators& ops, int j_max, const SeedSpec& seeds,
                                                 const Eigen::VectorXd* top_right_vector = nullptr);

}  // namespace ilcconv
