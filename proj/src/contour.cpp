#include "ilcconv/contour.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "ilcconv/error.hpp"

namespace ilcconv {

namespace {

// Edge identifiers: horizontal edge (ia,ib)-(ia+1,ib) and vertical edge (ia,ib)-(ia,ib+1).
struct EdgeKey {
  int ia, ib;
  bool along_a;
  auto operator<=>(const EdgeKey&) const = default;
};

struct Segment {
  EdgeKey from, to;
};

}  // namespace

std::string_view to_string(BoundaryField f) noexcept {
  switch (f) {
    case BoundaryField::SupT: return "zsup";
    case BoundaryField::SigmaSq: return "sigma";
    case BoundaryField::Rho: return "rho";
    case BoundaryField::Iterate: return "iterate";
  }
  return "";
}

BoundaryField parse_boundary_field(std::string_view token) {
  for (BoundaryField f : {BoundaryField::SupT, BoundaryField::SigmaSq, BoundaryField::Rho, BoundaryField::Iterate}) {
    if (to_string(f) == token) return f;
  }
  throw InvalidArgument("unknown boundary source '" + std::string(token) + "' (expected zsup, sigma, rho, iterate)");
}

std::vector<Polyline> iso_contour(const std::vector<double>& a_values, const std::vector<double>& b_values,
                                  const std::vector<double>& values, double level) {
  const auto na = static_cast<int>(a_values.size());
  const auto nb = static_cast<int>(b_values.size());
  if (na < 2 || nb < 2 || values.size() != static_cast<std::size_t>(na) * static_cast<std::size_t>(nb)) {
    throw InvalidArgument("iso_contour: field does not match the grid");
  }
  auto f = [&](int ia, int ib) { return values[static_cast<std::size_t>(ia) * nb + ib]; };
  auto above = [&](int ia, int ib) { return f(ia, ib) >= level; };

  auto crossing = [&](const EdgeKey& e) {
    const int ja = e.along_a ? e.ia + 1 : e.ia;
    const int jb = e.along_a ? e.ib : e.ib + 1;
    const double f0 = f(e.ia, e.ib), f1 = f(ja, jb);
    const double t = f1 == f0 ? 0.5 : (level - f0) / (f1 - f0);
    return ABPoint{a_values[e.ia] + t * (a_values[ja] - a_values[e.ia]),
                   b_values[e.ib] + t * (b_values[jb] - b_values[e.ib])};
  };

  std::vector<Segment> segments;
  for (int ia = 0; ia + 1 < na; ++ia) {
    for (int ib = 0; ib + 1 < nb; ++ib) {
      // corners counter-clockwise: (ia,ib) (ia+1,ib) (ia+1,ib+1) (ia,ib+1)
      const int mask = (above(ia, ib) ? 1 : 0) | (above(ia + 1, ib) ? 2 : 0) | (above(ia + 1, ib + 1) ? 4 : 0) |
                       (above(ia, ib + 1) ? 8 : 0);
      if (mask == 0 || mask == 15) continue;
      const EdgeKey bottom{ia, ib, true}, right{ia + 1, ib, false}, top{ia, ib + 1, true}, left{ia, ib, false};
      switch (mask) {
        case 1: case 14: segments.push_back({left, bottom}); break;
        case 2: case 13: segments.push_back({bottom, right}); break;
        case 3: case 12: segments.push_back({left, right}); break;
        case 4: case 11: segments.push_back({right, top}); break;
        case 6: case 9: segments.push_back({bottom, top}); break;
        case 7: case 8: segments.push_back({left, top}); break;
        case 5: case 10: {
          const double centre = 0.25 * (f(ia, ib) + f(ia + 1, ib) + f(ia + 1, ib + 1) + f(ia, ib + 1));
          const bool centre_above = centre >= level;
          // corners 0 and 2 are above in case 5; the centre decides whether they connect
          if ((mask == 5) == centre_above) {
            segments.push_back({left, top});
            segments.push_back({bottom, right});
          } else {
            segments.push_back({left, bottom});
            segments.push_back({right, top});
          }
          break;
        }
        default: break;
      }
    }
  }

  // Join segments that share an edge crossing into polylines.
  std::multimap<EdgeKey, std::size_t> by_edge;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    by_edge.emplace(segments[i].from, i);
    by_edge.emplace(segments[i].to, i);
  }
  std::vector<bool> used(segments.size(), false);
  auto next_segment = [&](const EdgeKey& at) -> std::optional<std::size_t> {
    auto [lo, hi] = by_edge.equal_range(at);
    for (auto it = lo; it != hi; ++it)
      if (!used[it->second]) return it->second;
    return std::nullopt;
  };

  std::vector<Polyline> lines;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<EdgeKey> chain{segments[s].from, segments[s].to};
    // extend forward, then backward
    for (int pass = 0; pass < 2; ++pass) {
      while (auto k = next_segment(chain.back())) {
        used[*k] = true;
        const Segment& seg = segments[*k];
        chain.push_back(seg.from == chain.back() ? seg.to : seg.from);
        if (chain.back() == chain.front()) break;
      }
      std::reverse(chain.begin(), chain.end());
    }
    Polyline line;
    line.reserve(chain.size());
    for (const auto& e : chain) line.push_back(crossing(e));
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<Polyline> extract_boundary(const std::vector<PointReport>& reports, BoundaryField which) {
  const GridIndex grid = grid_of(reports);
  std::vector<double> values(grid.at.size());
  for (std::size_t i = 0; i < grid.at.size(); ++i) {
    const PointReport& r = reports[static_cast<std::size_t>(grid.at[i])];
    std::optional<double> v;
    switch (which) {
      case BoundaryField::SupT: v = r.sup_t; break;
      case BoundaryField::SigmaSq: v = r.sigma_sq; break;
      case BoundaryField::Rho: v = r.rho; break;
      case BoundaryField::Iterate:
        if (r.mc_iter == Tri::True) v = 0.5;
        else if (r.mc_iter == Tri::False) v = 1.5;
        else if (r.mc_iter == Tri::Marginal) v = 1.0;
        break;
    }
    if (!v) {
      throw InvalidArgument("extract_boundary: field '" + std::string(to_string(which)) + "' missing at some grid point");
    }
    values[i] = *v;
  }
  return iso_contour(grid.a_values, grid.b_values, values, 1.0);
}

}  // namespace ilcconv
