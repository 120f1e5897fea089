#include "ilcconv/zdomain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ilcconv/error.hpp"

namespace ilcconv {

namespace {

using cd = std::complex<double>;

// One inequality of a region test, written as slack >= 0 (or > 0 when strict).
struct Inequality {
  double slack;
  bool strict;
  const char* text;
};

RegionVerdict evaluate(std::initializer_list<Inequality> set, RegionBasis basis) {
  RegionVerdict v;
  v.basis = basis;
  v.holds = true;
  for (const Inequality& q : set) {
    const bool ok = q.strict ? q.slack > 0.0 : q.slack >= 0.0;
    if (!ok) {
      v.holds = false;
      if (!v.detail.empty()) v.detail += "; ";
      v.detail += std::string("fails ") + q.text;
    }
    if (std::abs(q.slack) <= kMarginalBand) v.marginal = true;
  }
  if (v.holds) v.detail = "all inequalities hold";
  return v;
}

bool unit_gain(double v) { return std::abs(v - 1.0) <= 1e-12; }

double abs_t(ABPoint p, const LearningFunction& lf, double theta) { return std::abs(t_of_theta(p, lf, theta)); }

// Golden-section maximisation of |T| on [lo, hi].
std::pair<double, double> golden_max(ABPoint p, const LearningFunction& lf, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = abs_t(p, lf, x1);
  double f2 = abs_t(p, lf, x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = abs_t(p, lf, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = abs_t(p, lf, x1);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return {mid, abs_t(p, lf, mid)};
}

}  // namespace

std::string_view to_string(Tri t) noexcept {
  switch (t) {
    case Tri::True: return "1";
    case Tri::False: return "0";
    case Tri::Marginal: return "m";
    case Tri::Absent: return "";
  }
  return "";
}

Tri below_one(double value, double band) noexcept {
  if (value < 1.0 - band) return Tri::True;
  if (value <= 1.0 + band) return Tri::Marginal;
  return Tri::False;
}

std::string_view to_string(RegionBasis b) noexcept {
  switch (b) {
    case RegionBasis::Exact: return "exact";
    case RegionBasis::NecessaryOnly: return "necessary-only";
    case RegionBasis::EmpiricalFit: return "empirical-fit";
  }
  return "";
}

cd closed_loop_p(cd z, const PlantParams& params) {
  params.validate();
  const double em1 = std::expm1(params.u_product);
  const double eu = em1 + 1.0;
  cd controller = params.kp;
  if (params.ki != 0.0) {
    if (std::abs(z - 1.0) < 1e-14) {
      throw PoleError("closed_loop_p: integrator pole at z = 1");
    }
    controller += params.ki * params.sample_period * z / (z - 1.0);
  }
  // G/(1+CG) with G = em1/(z e^U - 1), cleared of the common denominator.
  const cd plant_den = z * eu - 1.0;
  const cd den = plant_den + controller * em1;
  const double scale = std::abs(z) * eu + 1.0 + std::abs(controller) * em1;
  if (std::abs(den) <= 1e-14 * scale) {
    throw PoleError("closed_loop_p: z is a closed-loop pole");
  }
  return em1 / den;
}

cd t_of_theta(ABPoint point, const LearningFunction& lf, double theta) {
  const cd z = std::polar(1.0, theta);
  const cd den = z - point.b_pole;
  if (std::abs(den) < 1e-14) {
    throw PoleError("t_of_theta: e^{i theta} coincides with the plant pole B");
  }
  return 1.0 - eval_learning(lf, z) * z * point.a_gain / den;
}

TLocus sup_t(ABPoint point, const LearningFunction& lf, int grid_size) {
  if (grid_size < 64) {
    throw InvalidArgument("sup_t: grid_size must be >= 64");
  }
  TLocus locus;
  const auto n = static_cast<std::size_t>(grid_size);
  locus.thetas.resize(n);
  locus.values.resize(n);
  std::vector<double> mags(n);
  const double step = std::numbers::pi / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    locus.thetas[i] = i + 1 == n ? std::numbers::pi : step * static_cast<double>(i);
    locus.values[i] = t_of_theta(point, lf, locus.thetas[i]);
    mags[i] = std::abs(locus.values[i]);
  }
  const auto best = std::max_element(mags.begin(), mags.end());
  locus.sup_abs = *best;
  locus.argmax_theta = locus.thetas[static_cast<std::size_t>(best - mags.begin())];

  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || mags[i] >= mags[i - 1];
    const bool right_ok = i + 1 == n || mags[i] > mags[i + 1];
    const bool strict_somewhere = (i > 0 && mags[i] > mags[i - 1]) || (i + 1 < n && mags[i] > mags[i + 1]);
    if (!(left_ok && right_ok && strict_somewhere)) continue;
    const double lo = locus.thetas[i == 0 ? 0 : i - 1];
    const double hi = locus.thetas[i + 1 == n ? n - 1 : i + 1];
    const auto [theta, value] = golden_max(point, lf, lo, hi);
    if (value > locus.sup_abs) {
      locus.sup_abs = value;
      locus.argmax_theta = theta;
    }
  }
  return locus;
}

bool has_mc_closed_form(LearningKind kind) noexcept {
  return kind != LearningKind::L3SymmetricHalf && kind != LearningKind::Custom;
}

bool has_ac_closed_form(LearningKind kind, double v) noexcept {
  switch (kind) {
    case LearningKind::L1:
    case LearningKind::L2Back:
    case LearningKind::L3Back: return true;
    case LearningKind::L2Ahead:
    case LearningKind::L3Ahead: return unit_gain(v);
    default: return false;
  }
}

RegionVerdict mc_region_analytic(LearningKind kind, ABPoint point, double v) {
  const double a = point.a_gain;
  const double b = point.b_pole;
  const double av = a * v;
  switch (kind) {
    case LearningKind::L1:
      return evaluate({{av, true, "0 < Av"},
                       {2.0 - av, true, "Av < 2"},
                       {b - (-1.0 + 0.5 * av), true, "-1 + Av/2 < B"},
                       {(1.0 - 0.5 * av) - b, true, "B < 1 - Av/2"}},
                      RegionBasis::Exact);
    case LearningKind::L2Back:
      return evaluate({{av, true, "0 < Av"},
                       {2.0 - av, true, "Av < 2"},
                       {b + 1.0, true, "-1 < B"},
                       {(1.0 - av) - b, true, "B < 1 - Av"}},
                      RegionBasis::Exact);
    case LearningKind::L2Ahead:
      return evaluate({{av, true, "0 < Av"},
                       {1.0 - av, true, "Av < 1"},
                       {b - (-1.0 + av) / 3.0, false, "(-1 + Av)/3 <= B"},
                       {(1.0 - av) - b, false, "B <= 1 - Av"}},
                      RegionBasis::Exact);
    case LearningKind::L3Symmetric: {
      RegionVerdict r;
      r.holds = false;
      r.detail = "no monotonic-convergence domain for equal-weight symmetric learning";
      return r;
    }
    case LearningKind::L3Ahead:
      return evaluate({{(1.0 - 1.5 * av) - b, true, "B < 1 - 3Av/2"},
                       {b - 0.5 * (1.0 + 0.5 * av), true, "B > (1 + Av/2)/2"}},
                      RegionBasis::NecessaryOnly);
    case LearningKind::L3Back:
      return evaluate({{(-16.0 - 7.0 * av) / 42.0 - b, true, "B < (-16 - 7Av)/42"},
                       {b - (-28.0 + 7.0 * av) / 42.0, true, "B > (-28 + 7Av)/42"}},
                      RegionBasis::NecessaryOnly);
    case LearningKind::L3SymmetricHalf:
    case LearningKind::Custom: break;
  }
  throw Unsupported("mc_region_analytic: no closed form for '" + std::string(token_of(kind)) +
                    "'; use sup_t or the lifted-matrix tests");
}

RegionVerdict ac_region_analytic(LearningKind kind, ABPoint point, double v) {
  const double a = point.a_gain;
  const double b = point.b_pole;
  const double av = a * v;
  switch (kind) {
    case LearningKind::L1:
    case LearningKind::L2Back:
    case LearningKind::L3Back: {
      // lower-triangular iteration matrix with constant diagonal 1 - vA
      RegionVerdict r = evaluate({{av, true, "0 < Av"}, {2.0 - av, true, "Av < 2"}}, RegionBasis::Exact);
      return r;
    }
    case LearningKind::L2Ahead:
      if (!unit_gain(v)) break;
      return evaluate({{b - 0.5 * (-1.0 + 0.5 * a), true, "B > (-1 + A/2)/2"},
                       {(2.0 - a) * (2.0 - a) / (8.0 * a) - b, true, "B < (2 - A)^2/(8A)"}},
                      RegionBasis::EmpiricalFit);
    case LearningKind::L3Ahead:
      if (!unit_gain(v)) break;
      return evaluate({{b + 0.6 * std::pow(1.0 - 0.5 * a, 0.8), true, "B > -0.6 (1 - A/2)^0.8"},
                       {(2.0 - a) * (2.0 - a) / (12.0 * std::cbrt(a * a)) - b, true,
                        "B < (2 - A)^2/(12 A^(2/3))"}},
                      RegionBasis::EmpiricalFit);
    default: break;
  }
  throw Unsupported("ac_region_analytic: no closed form for '" + std::string(token_of(kind)) +
                    "' at v = " + std::to_string(v));
}

std::vector<AnalyticCurve> analytic_curves(LearningKind kind, double v) {
  std::vector<AnalyticCurve> out;
  using B = RegionBasis;
  switch (kind) {
    case LearningKind::L1:
      out.push_back({"mc_upper", B::Exact, [](double a, double g) { return 1.0 - 0.5 * a * g; }});
      out.push_back({"mc_lower", B::Exact, [](double a, double g) { return -1.0 + 0.5 * a * g; }});
      break;
    case LearningKind::L2Back:
      out.push_back({"mc_upper", B::Exact, [](double a, double g) { return 1.0 - a * g; }});
      break;
    case LearningKind::L2Ahead:
      out.push_back({"mc_upper", B::Exact, [](double a, double g) { return 1.0 - a * g; }});
      out.push_back({"mc_lower", B::Exact, [](double a, double g) { return (-1.0 + a * g) / 3.0; }});
      if (unit_gain(v)) {
        out.push_back({"ac_upper", B::EmpiricalFit, [](double a, double) { return (2.0 - a) * (2.0 - a) / (8.0 * a); }});
        out.push_back({"ac_lower", B::EmpiricalFit, [](double a, double) { return 0.5 * (-1.0 + 0.5 * a); }});
      }
      break;
    case LearningKind::L3Ahead:
      out.push_back({"mc_upper", B::NecessaryOnly, [](double a, double g) { return 1.0 - 1.5 * a * g; }});
      out.push_back({"mc_lower", B::NecessaryOnly, [](double a, double g) { return 0.5 * (1.0 + 0.5 * a * g); }});
      if (unit_gain(v)) {
        out.push_back({"ac_upper", B::EmpiricalFit,
                       [](double a, double) { return (2.0 - a) * (2.0 - a) / (12.0 * std::cbrt(a * a)); }});
        out.push_back({"ac_lower", B::EmpiricalFit, [](double a, double) { return -0.6 * std::pow(1.0 - 0.5 * a, 0.8); }});
      }
      break;
    case LearningKind::L3Back:
      out.push_back({"mc_upper", B::NecessaryOnly, [](double a, double g) { return (-16.0 - 7.0 * a * g) / 42.0; }});
      out.push_back({"mc_lower", B::NecessaryOnly, [](double a, double g) { return (-28.0 + 7.0 * a * g) / 42.0; }});
      break;
    default: break;
  }
  return out;
}

}  // namespace ilcconv
