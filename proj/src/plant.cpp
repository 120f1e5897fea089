#include "ilcconv/plant.hpp"

#include <cmath>
#include <string>

#include "ilcconv/error.hpp"

namespace ilcconv {

void PlantParams::validate() const {
  if (!(u_product > 0.0) || !std::isfinite(u_product)) {
    throw InvalidArgument("plant: U must be positive and finite, got " + std::to_string(u_product));
  }
  if (!(sample_period > 0.0)) {
    throw InvalidArgument("plant: sample period must be positive");
  }
  if (!std::isfinite(kp) || !std::isfinite(ki)) {
    throw InvalidArgument("plant: gains must be finite");
  }
}

std::string_view to_string(TrialClass c) noexcept {
  switch (c) {
    case TrialClass::Monotone: return "monotone";
    case TrialClass::DampedOscillation: return "damped-oscillation";
    case TrialClass::GrowingOscillation: return "growing-oscillation";
    case TrialClass::MonotoneDivergent: return "monotone-divergent";
    case TrialClass::Marginal: return "marginal";
  }
  return "unknown";
}

ABPoint ab_from_plant(const PlantParams& params) {
  params.validate();
  if (params.ki != 0.0) {
    throw InvalidArgument("ab_from_plant: the (A,B) transform needs Ki = 0");
  }
  const double decay = std::exp(-params.u_product);
  return {-std::expm1(-params.u_product), decay * (1.0 + params.kp) - params.kp};
}

PlantParams plant_from_ab(ABPoint point) {
  const double a = point.a_gain;
  if (!(a > 0.0 && a < 1.0)) {
    throw InvalidArgument("plant_from_ab: A must lie in (0,1), got " + std::to_string(a));
  }
  const double decay = 1.0 - a;
  PlantParams p;
  p.u_product = -std::log1p(-a);
  p.kp = (decay - point.b_pole) / a;
  return p;
}

GainLimits no_ilc_gain_limits(double u_product) {
  if (!(u_product > 0.0)) {
    throw InvalidArgument("no_ilc_gain_limits: U must be positive");
  }
  // e^U - 1 via expm1 keeps the bounds accurate for small U
  const double em1 = std::expm1(u_product);
  return {(2.0 + em1) / em1, 1.0 / em1, -1.0};
}

TrialClass classify_pole(double b) noexcept {
  if (b == 1.0 || b == -1.0) return TrialClass::Marginal;
  if (b > 1.0) return TrialClass::MonotoneDivergent;
  if (b < -1.0) return TrialClass::GrowingOscillation;
  if (b < 0.0) return TrialClass::DampedOscillation;
  return TrialClass::Monotone;
}

TrialResponse simulate_trial(ABPoint point, double reference, int steps) {
  if (steps < 1) {
    throw InvalidArgument("simulate_trial: steps must be >= 1");
  }
  TrialResponse out;
  out.samples.reserve(static_cast<std::size_t>(steps) + 1);
  double y = 0.0;
  out.samples.push_back(y);
  for (int k = 0; k < steps; ++k) {
    y = point.b_pole * y + point.a_gain * reference;
    out.samples.push_back(y);
  }
  out.classification = classify_pole(point.b_pole);
  return out;
}

}  // namespace ilcconv
