#pragma once

#include <string_view>
#include <vector>

namespace ilcconv {

/// Physical and controller parameters of the sampled first-order plant.
struct PlantParams {
  double u_product = 1.0;      ///< U = a * tau_s, cavity rate times sample period
  double kp = 0.0;             ///< proportional gain
  double ki = 0.0;             ///< integral gain [1/s]
  double sample_period = 1.0;  ///< tau_s [s], only used when ki != 0

  void validate() const;
};

/// Transformed plant coordinates: P(z) = A / (z - B).
struct ABPoint {
  double a_gain = 0.0;
  double b_pole = 0.0;

  /// True inside the open rectangle 0 < A < 1, -1 < B < 1.
  [[nodiscard]] bool in_range() const noexcept {
    return a_gain > 0.0 && a_gain < 1.0 && b_pole > -1.0 && b_pole < 1.0;
  }
};

enum class TrialClass { Monotone, DampedOscillation, GrowingOscillation, MonotoneDivergent, Marginal };

[[nodiscard]] std::string_view to_string(TrialClass c) noexcept;

struct TrialResponse {
  std::vector<double> samples;  ///< y_0 .. y_steps
  TrialClass classification = TrialClass::Monotone;
};

/// Proportional-gain limits of the loop without learning, for a given U.
struct GainLimits {
  double kp_max_stable;    ///< B > -1  <=>  Kp < (1 + e^U) / (e^U - 1)
  double kp_max_monotone;  ///< B > 0   <=>  Kp < 1 / (e^U - 1)
  double kp_min;           ///< B < 1   <=>  Kp > -1

  /// -1 < Kp < kp_max_stable
  [[nodiscard]] bool stable(double kp) const noexcept { return kp > kp_min && kp < kp_max_stable; }
  /// -1 < Kp <= kp_max_monotone (B = 0 settles in one step)
  [[nodiscard]] bool oscillation_free(double kp) const noexcept {
    return kp > kp_min && kp <= kp_max_monotone;
  }
};

/// A = 1 - e^-U, B = e^-U (1 + Kp) - Kp. Requires ki == 0 and U > 0.
[[nodiscard]] ABPoint ab_from_plant(const PlantParams& params);

/// Inverse of ab_from_plant; requires 0 < A < 1.
[[nodiscard]] PlantParams plant_from_ab(ABPoint point);

[[nodiscard]] GainLimits no_ilc_gain_limits(double u_product);

/// Classification implied by the pole location alone.
[[nodiscard]] TrialClass classify_pole(double b_pole) noexcept;

/// Step response y_{k+1} = B y_k + A r from rest, within one trial and without learning.
[[nodiscard]] TrialResponse simulate_trial(ABPoint point, double reference, int steps);

}  // namespace ilcconv
