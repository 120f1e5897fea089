#include "ilcconv/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "ilcconv/error.hpp"
#include "ilcconv/lifted.hpp"

namespace ilcconv {

namespace {

constexpr Verdict kMcColumns[] = {Verdict::McZ, Verdict::McSigma, Verdict::McIter, Verdict::McAnalytic};
constexpr Verdict kAcColumns[] = {Verdict::AcRho, Verdict::AcIter, Verdict::AcAnalytic};

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < std::min(threads, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

void add_flag(PointReport& r, std::string_view f) {
  if (!r.has_flag(f)) r.flags.emplace_back(f);
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::ZSup: return "zsup";
    case Method::Sigma: return "sigma";
    case Method::Rho: return "rho";
    case Method::Iterate: return "iterate";
    case Method::Analytic: return "analytic";
  }
  return "";
}

Method parse_method(std::string_view token) {
  for (Method m : {Method::ZSup, Method::Sigma, Method::Rho, Method::Iterate, Method::Analytic}) {
    if (to_string(m) == token) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(token) + "' (expected zsup, sigma, rho, iterate, analytic)");
}

std::set<Method> parse_methods(std::string_view text) {
  std::set<Method> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    if (item == "all") {
      out = {Method::ZSup, Method::Sigma, Method::Rho, Method::Iterate, Method::Analytic};
      continue;
    }
    out.insert(parse_method(item));
  }
  if (out.empty()) throw InvalidArgument("method list is empty");
  return out;
}

std::vector<double> AxisRange::values() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = i + 1 == steps ? max : min + (max - min) * i / (steps - 1);
  }
  return out;
}

AxisRange AxisRange::interior(double lo, double hi, int steps) {
  const double half = 0.5 * (hi - lo) / steps;
  return {lo + half, hi - half, steps};
}

void SweepConfig::validate() const {
  if (a_range.steps < 2 || b_range.steps < 2) throw InvalidArgument("sweep: each axis needs >= 2 steps");
  if (!(a_range.min > 0.0 && a_range.min <= a_range.max && a_range.max < 1.0)) {
    throw InvalidArgument("sweep: A range must satisfy 0 < min <= max < 1");
  }
  if (!(b_range.min > -1.0 && b_range.min <= b_range.max && b_range.max < 1.0)) {
    throw InvalidArgument("sweep: B range must lie inside (-1, 1)");
  }
  if (methods.empty()) throw InvalidArgument("sweep: no methods selected");
  if (n < learning.max_abs_shift() + 1) throw InvalidArgument("sweep: trial length too small for the learning taps");
  if (j_max < 1) throw InvalidArgument("sweep: iteration budget must be >= 1");
  if (workers < 1) throw InvalidArgument("sweep: workers must be >= 1");
}

bool PointReport::has_flag(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::McZ: return "mc_z";
    case Verdict::McSigma: return "mc_sigma";
    case Verdict::AcRho: return "ac_rho";
    case Verdict::McIter: return "mc_iter";
    case Verdict::AcIter: return "ac_iter";
    case Verdict::McAnalytic: return "mc_analytic";
    case Verdict::AcAnalytic: return "ac_analytic";
  }
  return "";
}

Tri verdict_of(const PointReport& r, Verdict v) noexcept {
  switch (v) {
    case Verdict::McZ: return r.mc_z;
    case Verdict::McSigma: return r.mc_sigma;
    case Verdict::AcRho: return r.ac_rho;
    case Verdict::McIter: return r.mc_iter;
    case Verdict::AcIter: return r.ac_iter;
    case Verdict::McAnalytic: return r.mc_analytic;
    case Verdict::AcAnalytic: return r.ac_analytic;
  }
  return Tri::Absent;
}

PointReport evaluate_point(const SweepConfig& config, ABPoint point) {
  PointReport r;
  r.point = point;
  const LearningFunction& lf = config.learning;
  const LearningKind kind = lf.kind();
  const double v = lf.gain();

  if (config.has(Method::Analytic)) {
    if (has_mc_closed_form(kind)) {
      const RegionVerdict mc = mc_region_analytic(kind, point, v);
      r.mc_analytic = mc.tri();
      if (mc.basis == RegionBasis::NecessaryOnly) add_flag(r, kFlagNecessary);
    }
    if (has_ac_closed_form(kind, v)) {
      const RegionVerdict ac = ac_region_analytic(kind, point, v);
      r.ac_analytic = ac.tri();
      if (ac.basis == RegionBasis::EmpiricalFit) add_flag(r, kFlagFit);
    }
  }

  if (config.has(Method::ZSup)) {
    try {
      const TLocus locus = sup_t(point, lf, config.theta_grid);
      r.sup_t = locus.sup_abs;
      r.mc_z = below_one(locus.sup_abs, config.eps_band);
    } catch (const Error& e) {
      r.flags.push_back(std::string("error:zsup:") + e.what());
    }
  }

  const bool need_sigma = config.has(Method::Sigma) || config.has(Method::Iterate);
  if (!need_sigma && !config.has(Method::Rho)) return r;

  try {
    const LiftedOperators ops = build_lifted(point, lf, config.n);
    TopSingular top;
    if (need_sigma) {
      top = config.has(Method::Iterate) ? top_singular(ops.m) : TopSingular{max_sv_sq(ops.m), {}};
      if (config.has(Method::Sigma)) {
        r.sigma_sq = top.sigma_sq;
        r.mc_sigma = below_one(top.sigma_sq, config.eps_band);
      }
    }
    std::optional<double> rho;
    if (config.has(Method::Rho)) {
      rho = lifted_spectral_radius(ops).rho;
      r.rho = rho;
      r.ac_rho = below_one(*rho, config.eps_band);
    }
    if (config.has(Method::Iterate)) {
      const IterationVerdict it = iteration_verdict(ops, config.j_max, config.seeds, &top.right_vector);
      r.mc_iter = it.mc ? Tri::True : Tri::False;
      if (it.ac) {
        r.ac_iter = Tri::True;
      } else if ((rho ? *rho : lifted_spectral_radius(ops).rho) < 1.0 - config.eps_band) {
        // the budget ran out before a decaying trace got back below its start
        r.ac_iter = Tri::Marginal;
        add_flag(r, kFlagSlow);
      } else {
        r.ac_iter = Tri::False;
      }
      if (it.trace.has_transient()) add_flag(r, kFlagTransient);
    }
  } catch (const Error& e) {
    r.flags.push_back(std::string("error:lifted:") + e.what());
  }
  return r;
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult out;
  out.a_values = config.a_range.values();
  out.b_values = config.b_range.values();
  const std::size_t nb = out.b_values.size();
  out.reports.resize(out.a_values.size() * nb);
  parallel_for(out.reports.size(), config.workers, [&](std::size_t idx) {
    const ABPoint p{out.a_values[idx / nb], out.b_values[idx % nb]};
    out.reports[idx] = evaluate_point(config, p);
  });

  int populated = 0;
  for (Verdict v : kMcColumns) populated += verdict_of(out.reports.front(), v) != Tri::Absent;
  for (Verdict v : kAcColumns) populated += verdict_of(out.reports.front(), v) != Tri::Absent;
  if (populated >= 2) out.stats = compare_methods(out.reports);
  return out;
}

GridIndex grid_of(const std::vector<PointReport>& reports) {
  if (reports.empty()) throw InvalidArgument("grid: no reports");
  GridIndex g;
  for (const auto& r : reports) {
    g.a_values.push_back(r.point.a_gain);
    g.b_values.push_back(r.point.b_pole);
  }
  for (auto* axis : {&g.a_values, &g.b_values}) {
    std::sort(axis->begin(), axis->end());
    axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
  }
  const std::size_t na = g.a_values.size();
  const std::size_t nb = g.b_values.size();
  if (na < 2 || nb < 2 || na * nb != reports.size()) {
    throw InvalidArgument("grid: reports do not form a complete rectangular grid");
  }
  g.at.assign(na * nb, -1);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto ia = std::lower_bound(g.a_values.begin(), g.a_values.end(), reports[i].point.a_gain) - g.a_values.begin();
    const auto ib = std::lower_bound(g.b_values.begin(), g.b_values.end(), reports[i].point.b_pole) - g.b_values.begin();
    int& slot = g.at[static_cast<std::size_t>(ia) * nb + static_cast<std::size_t>(ib)];
    if (slot != -1) throw InvalidArgument("grid: duplicate grid point");
    slot = static_cast<int>(i);
  }
  return g;
}

AgreementStats compare_methods(const std::vector<PointReport>& reports, double eps_boundary) {
  auto populated = [&](Verdict v) {
    return std::any_of(reports.begin(), reports.end(), [v](const PointReport& r) { return verdict_of(r, v) != Tri::Absent; });
  };
  std::vector<Verdict> mc, ac;
  for (Verdict v : kMcColumns) if (populated(v)) mc.push_back(v);
  for (Verdict v : kAcColumns) if (populated(v)) ac.push_back(v);
  if (mc.size() + ac.size() < 2) {
    throw InvalidArgument("compare_methods: needs at least two populated methods");
  }

  AgreementStats stats;
  stats.boundary_exclusion = eps_boundary;
  std::optional<GridIndex> grid;
  if (eps_boundary > 0.0) grid = grid_of(reports);

  // offsets (da, db) in index units within eps_boundary cells
  std::vector<std::pair<int, int>> offsets;
  const int reach = static_cast<int>(std::floor(eps_boundary));
  for (int da = -reach; da <= reach; ++da)
    for (int db = -reach; db <= reach; ++db)
      if ((da || db) && da * da + db * db <= eps_boundary * eps_boundary) offsets.emplace_back(da, db);

  auto near_change = [&](std::size_t idx, Verdict x, Verdict y) {
    if (!grid) return false;
    const auto nb = static_cast<int>(grid->b_values.size());
    const auto na = static_cast<int>(grid->a_values.size());
    const PointReport& p = reports[idx];
    const auto ia = static_cast<int>(std::lower_bound(grid->a_values.begin(), grid->a_values.end(), p.point.a_gain) - grid->a_values.begin());
    const auto ib = static_cast<int>(std::lower_bound(grid->b_values.begin(), grid->b_values.end(), p.point.b_pole) - grid->b_values.begin());
    for (auto [da, db] : offsets) {
      const int ja = ia + da, jb = ib + db;
      if (ja < 0 || jb < 0 || ja >= na || jb >= nb) continue;
      const PointReport& q = reports[static_cast<std::size_t>(grid->at[static_cast<std::size_t>(ja * nb + jb)])];
      for (Verdict v : {x, y}) {
        const Tri tq = verdict_of(q, v);
        if (tq != Tri::Absent && tq != verdict_of(p, v)) return true;
      }
    }
    return false;
  };

  auto tally = [&](Verdict x, Verdict y) {
    PairCounts c{x, y};
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const Tri tx = verdict_of(reports[i], x);
      const Tri ty = verdict_of(reports[i], y);
      if (tx == Tri::Absent || ty == Tri::Absent) {
        ++c.absent;
      } else if (tx == Tri::Marginal || ty == Tri::Marginal) {
        ++c.either_marginal;
      } else if (near_change(i, x, y)) {
        ++c.near_boundary;
      } else if (tx != ty) {
        ++c.disagree;
      } else if (tx == Tri::True) {
        ++c.both_true;
      } else {
        ++c.both_false;
      }
    }
    stats.pairs.push_back(c);
  };
  for (const auto* family : {&mc, &ac})
    for (std::size_t i = 0; i < family->size(); ++i)
      for (std::size_t j = i + 1; j < family->size(); ++j) tally((*family)[i], (*family)[j]);

  for (const auto& r : reports) {
    const Tri ac_v = r.ac_rho != Tri::Absent ? r.ac_rho : r.ac_analytic;
    const Tri mc_v = r.mc_sigma != Tri::Absent ? r.mc_sigma : r.mc_z;
    if (ac_v == Tri::True && mc_v == Tri::False) {
      ++stats.ac_true_mc_false;
      if (r.has_flag(kFlagTransient)) ++stats.learning_transients;
    }
  }
  return stats;
}

std::string BoundsAudit::table() const {
  std::ostringstream os;
  os << "printed-bounds audit: " << token_of(kind) << " v=" << v << " grid=" << grid << "x" << grid
     << " n=" << n << "\n";
  os << "  numeric verdict   printed&numeric  printed-only  numeric-only  neither  marginal\n";
  os << "  sup_T < 1         " << both << "  " << printed_only << "  " << numeric_only << "  " << neither << "  "
     << numeric_marginal << "\n";
  os << "  sigma^2 < 1       " << sigma_both << "  " << sigma_printed_only << "  " << sigma_numeric_only << "  "
     << sigma_neither << "  -\n";
  os << "  necessary direction (sup_T): " << (necessary_direction_holds() ? "holds" : "VIOLATED") << "\n";
  os << "  necessary direction (sigma): " << (sigma_necessary_direction_holds() ? "holds" : "VIOLATED") << "\n";
  if (discrepancy()) os << "  DISCREPANCY FLAGGED: numeric MC points outside the printed conditions\n";
  return os.str();
}

BoundsAudit audit_printed_bounds(LearningKind kind, double v, int grid, int n, int workers) {
  BoundsAudit audit;
  audit.kind = kind;
  audit.v = v;
  audit.grid = grid;
  audit.n = n;
  SweepConfig cfg;
  cfg.a_range = AxisRange::interior(0.0, 1.0, grid);
  cfg.b_range = AxisRange::interior(-1.0, 1.0, grid);
  cfg.learning = LearningFunction::named(kind, v);
  cfg.n = n;
  cfg.methods = {Method::ZSup, Method::Sigma, Method::Analytic};
  cfg.workers = workers;
  const SweepResult res = run_sweep(cfg);
  for (const auto& r : res.reports) {
    const bool printed = r.mc_analytic == Tri::True || r.mc_analytic == Tri::Marginal;
    if (r.mc_z == Tri::Marginal) {
      ++audit.numeric_marginal;
    } else {
      const bool numeric = r.mc_z == Tri::True;
      (printed ? (numeric ? audit.both : audit.printed_only) : (numeric ? audit.numeric_only : audit.neither))++;
    }
    const bool sig = r.mc_sigma == Tri::True;
    (printed ? (sig ? audit.sigma_both : audit.sigma_printed_only)
             : (sig ? audit.sigma_numeric_only : audit.sigma_neither))++;
  }
  return audit;
}

}  // namespace ilcconv
