#include <cmath>

#include <gtest/gtest.h>

#include "ilcconv/contour.hpp"
#include "ilcconv/error.hpp"

using namespace ilcconv;

namespace {

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

TEST(Contour, ConstantFieldHasNoCrossing) {
  const auto a = axis(0.1, 0.9, 5), b = axis(-0.5, 0.5, 4);
  EXPECT_TRUE(iso_contour(a, b, std::vector<double>(20, 0.5), 1.0).empty());
}

TEST(Contour, LinearFieldGivesExactLine) {
  // f = 2 B + 1 crosses 1 at B = 0 exactly
  const auto a = axis(0.1, 0.9, 9), b = axis(-0.5, 0.5, 6);
  std::vector<double> f;
  for (double x : a)
    for (double y : b) f.push_back(2.0 * y + 1.0 + 0.0 * x);
  const auto lines = iso_contour(a, b, f, 1.0);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].size(), 9u);
  for (const auto& p : lines[0]) EXPECT_NEAR(p.b_pole, 0.0, 1e-15);
}

TEST(Contour, CircleIsClosedAndAccurate) {
  const auto a = axis(-1.0, 1.0, 41), b = axis(-1.0, 1.0, 41);
  std::vector<double> f;
  for (double x : a)
    for (double y : b) f.push_back((x * x + y * y) / 0.36);  // level 1 at radius 0.6
  const auto lines = iso_contour(a, b, f, 1.0);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].front().a_gain, lines[0].back().a_gain);
  EXPECT_EQ(lines[0].front().b_pole, lines[0].back().b_pole);
  for (const auto& p : lines[0]) EXPECT_NEAR(std::hypot(p.a_gain, p.b_pole), 0.6, 0.01);
}

TEST(Contour, SaddleResolvedByCentre) {
  const std::vector<double> a{0.0, 1.0}, b{0.0, 1.0};
  // corners (0,0)=2 (1,0)=0 (1,1)=2 (0,1)=0, centre 1 -> above, corners 0 and 2 joined
  const auto lines = iso_contour(a, b, {2.0, 0.0, 0.0, 2.0}, 1.0);
  EXPECT_EQ(lines.size(), 2u);
}

TEST(Contour, RejectsMismatch) {
  EXPECT_THROW((void)iso_contour({0.0, 1.0}, {0.0, 1.0}, {1.0, 2.0, 3.0}, 1.0), InvalidArgument);
  EXPECT_THROW((void)parse_boundary_field("eig"), InvalidArgument);
}

TEST(Contour, ExtractFromReports) {
  SweepConfig c;
  c.a_range = AxisRange::interior(0.0, 1.0, 41);
  c.b_range = AxisRange::interior(-1.0, 1.0, 41);
  c.methods = {Method::ZSup, Method::Sigma};
  c.n = 64;
  const SweepResult r = run_sweep(c);
  const double cell = c.b_range.spacing();
  for (BoundaryField f : {BoundaryField::SupT, BoundaryField::SigmaSq}) {
    const auto lines = extract_boundary(r.reports, f);
    ASSERT_FALSE(lines.empty());
    for (const auto& line : lines)
      for (const auto& p : line) {
        const double d = std::abs(std::abs(p.b_pole) - (1.0 - 0.5 * p.a_gain));
        EXPECT_LT(d, cell) << to_string(f) << " " << p.a_gain << "," << p.b_pole;
      }
  }
  EXPECT_THROW((void)extract_boundary(r.reports, BoundaryField::Rho), InvalidArgument);
  auto missing = r.reports;
  missing.pop_back();
  EXPECT_THROW((void)extract_boundary(missing, BoundaryField::SupT), InvalidArgument);
}

TEST(Contour, L2AheadRhoContourFollowsFit) {
  SweepConfig c;
  c.a_range = {0.15, 0.95, 17};
  c.b_range = {0.1, 0.99, 90};
  c.learning = LearningFunction::named(LearningKind::L2Ahead, 1.0);
  c.n = 256;
  c.methods = {Method::Rho};
  const SweepResult r = run_sweep(c);
  const double cell = c.b_range.spacing();
  int checked = 0;
  for (const auto& line : extract_boundary(r.reports, BoundaryField::Rho))
    for (const auto& p : line) {
      if (p.a_gain < 0.35 || p.a_gain > 0.9) continue;
      // vertices between A columns are linear guesses on a steep curve; judge the ones on grid columns
      const double col = (p.a_gain - c.a_range.min) / c.a_range.spacing();
      if (std::abs(col - std::round(col)) > 1e-9) continue;
      const double fit = (2.0 - p.a_gain) * (2.0 - p.a_gain) / (8.0 * p.a_gain);
      EXPECT_LT(std::abs(p.b_pole - fit), cell) << p.a_gain;
      ++checked;
    }
  EXPECT_GT(checked, 5);
}
