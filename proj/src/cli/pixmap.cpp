#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include "ilcconv/error.hpp"
#include "ilcconv/io.hpp"

namespace ilcconv::io {

namespace {

using Rgb = std::array<std::uint8_t, 3>;

constexpr Rgb kConverged{40, 90, 200};
constexpr Rgb kMarginal{235, 190, 40};
constexpr Rgb kNotConverged{235, 235, 235};
constexpr Rgb kAbsent{0, 0, 0};

std::optional<double> numeric_of(const PointReport& r, HeatField f) {
  switch (f) {
    case HeatField::SupT: return r.sup_t;
    case HeatField::SigmaSq: return r.sigma_sq;
    case HeatField::Rho: return r.rho;
    default: return std::nullopt;
  }
}

Tri verdict_field(const PointReport& r, HeatField f) {
  switch (f) {
    case HeatField::McZ: return r.mc_z;
    case HeatField::McSigma: return r.mc_sigma;
    case HeatField::AcRho: return r.ac_rho;
    case HeatField::McIter: return r.mc_iter;
    case HeatField::AcIter: return r.ac_iter;
    case HeatField::McAnalytic: return r.mc_analytic;
    case HeatField::AcAnalytic: return r.ac_analytic;
    default: return Tri::Absent;
  }
}

struct Span {
  double lo = 0.0, hi = 1.0;
};

Span span_of(const std::vector<PointReport>& reports, HeatField f) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& r : reports)
    if (auto x = numeric_of(r, f)) {
      lo = std::min(lo, *x);
      hi = std::max(hi, *x);
    }
  if (!(lo <= hi)) return {};
  return {lo, hi};
}

constexpr std::array kAllFields{HeatField::SupT,  HeatField::SigmaSq, HeatField::Rho,        HeatField::McZ,
                                HeatField::McSigma, HeatField::AcRho, HeatField::McIter,     HeatField::AcIter,
                                HeatField::McAnalytic, HeatField::AcAnalytic};

}  // namespace

std::string_view to_string(HeatField f) noexcept {
  switch (f) {
    case HeatField::SupT: return "sup_T";
    case HeatField::SigmaSq: return "sigma_sq";
    case HeatField::Rho: return "rho";
    case HeatField::McZ: return "mc_z";
    case HeatField::McSigma: return "mc_sigma";
    case HeatField::AcRho: return "ac_rho";
    case HeatField::McIter: return "mc_iter";
    case HeatField::AcIter: return "ac_iter";
    case HeatField::McAnalytic: return "mc_analytic";
    case HeatField::AcAnalytic: return "ac_analytic";
  }
  return "";
}

bool is_numeric(HeatField f) noexcept {
  return f == HeatField::SupT || f == HeatField::SigmaSq || f == HeatField::Rho;
}

std::vector<HeatField> populated_fields(const std::vector<PointReport>& reports) {
  std::vector<HeatField> out;
  for (HeatField f : kAllFields) {
    const bool any = std::any_of(reports.begin(), reports.end(), [&](const PointReport& r) {
      return is_numeric(f) ? numeric_of(r, f).has_value() : verdict_field(r, f) != Tri::Absent;
    });
    if (any) out.push_back(f);
  }
  return out;
}

Image render_heatmap(const std::vector<PointReport>& reports, HeatField field, int cell) {
  if (cell < 1) throw InvalidArgument("heatmap cell size must be >= 1");
  const GridIndex grid = grid_of(reports);
  const int na = static_cast<int>(grid.a_values.size());
  const int nb = static_cast<int>(grid.b_values.size());
  Image img;
  img.width = na * cell;
  img.height = nb * cell;
  img.rgb.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);
  const Span span = span_of(reports, field);
  for (int ia = 0; ia < na; ++ia) {
    for (int ib = 0; ib < nb; ++ib) {
      const PointReport& r = reports[static_cast<std::size_t>(grid.at[static_cast<std::size_t>(ia) * nb + ib])];
      Rgb c = kAbsent;
      if (is_numeric(field)) {
        if (auto x = numeric_of(r, field)) {
          const double t = span.hi > span.lo ? (*x - span.lo) / (span.hi - span.lo) : 0.5;
          const auto g = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
          c = {g, g, g};
        }
      } else {
        switch (verdict_field(r, field)) {
          case Tri::True: c = kConverged; break;
          case Tri::Marginal: c = kMarginal; break;
          case Tri::False: c = kNotConverged; break;
          case Tri::Absent: c = kAbsent; break;
        }
      }
      const int row0 = (nb - 1 - ib) * cell;
      for (int dy = 0; dy < cell; ++dy) {
        for (int dx = 0; dx < cell; ++dx) {
          const std::size_t p = (static_cast<std::size_t>(row0 + dy) * img.width + ia * cell + dx) * 3;
          img.rgb[p] = c[0];
          img.rgb[p + 1] = c[1];
          img.rgb[p + 2] = c[2];
        }
      }
    }
  }
  return img;
}

std::string heatmap_legend(const std::vector<PointReport>& reports, HeatField field) {
  const GridIndex grid = grid_of(reports);
  std::ostringstream os;
  os << "field: " << to_string(field) << "\n";
  os << "x axis: A from " << format_number(grid.a_values.front()) << " to " << format_number(grid.a_values.back())
     << " (" << grid.a_values.size() << " columns, left to right)\n";
  os << "y axis: B from " << format_number(grid.b_values.front()) << " to " << format_number(grid.b_values.back())
     << " (" << grid.b_values.size() << " rows, bottom to top)\n";
  if (is_numeric(field)) {
    const Span s = span_of(reports, field);
    os << "grayscale: black = " << format_number(s.lo) << ", white = " << format_number(s.hi) << ", linear\n";
    os << "black also marks points where the field is absent\n";
  } else {
    auto rgb = [](const Rgb& c) {
      return std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]);
    };
    os << "rgb " << rgb(kConverged) << ": converged\n";
    os << "rgb " << rgb(kMarginal) << ": marginal band\n";
    os << "rgb " << rgb(kNotConverged) << ": not converged\n";
    os << "rgb " << rgb(kAbsent) << ": not evaluated\n";
  }
  return os.str();
}

void write_ppm(std::ostream& os, const Image& image) {
  os << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(image.rgb.data()), static_cast<std::streamsize>(image.rgb.size()));
}

}  // namespace ilcconv::io
