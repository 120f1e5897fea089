#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ilcconv/cli.hpp"
#include "ilcconv/contour.hpp"
#include "ilcconv/error.hpp"
#include "ilcconv/io.hpp"
#include "ilcconv/iterdomain.hpp"
#include "ilcconv/lifted.hpp"
#include "ilcconv/sweep.hpp"
#include "ilcconv/zdomain.hpp"

#ifndef ILCCONV_VERSION
#define ILCCONV_VERSION "0.0.0"
#endif

namespace ilcconv::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using io::format_number;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::optional<double> a, b, u, kp;
  std::string learning = "l1";
  std::string taps;
  double v = 1.0;
  int n = kMapTrialLength;
  int iters = kDefaultIterations;
  std::string grid;
  std::string methods = "all";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string image;
  std::string config;
  std::string manifest;
  std::string in;
  std::string source;
  int workers = 1;
  int steps = 40;
  double reference = 1.0;
  double eps_boundary = kDefaultBoundaryCells;
};

// Every option that may also come from the JSON config, keyed by its config name.
struct Bound {
  const char* key;
  CLI::Option* opt;
};

std::vector<Bound> add_common(CLI::App& sub, Options& o) {
  std::vector<Bound> b;
  b.push_back({"A", sub.add_option("--A", o.a, "plant gain A in (0,1)")});
  b.push_back({"B", sub.add_option("--B", o.b, "plant pole B in (-1,1)")});
  b.push_back({"U", sub.add_option("--U", o.u, "U = a * tau_s > 0")});
  b.push_back({"Kp", sub.add_option("--Kp", o.kp, "proportional gain")});
  b[0].opt->excludes(b[2].opt)->excludes(b[3].opt);
  b[1].opt->excludes(b[2].opt)->excludes(b[3].opt);
  b.push_back({"learning", sub.add_option("--learning", o.learning,
                                          "l1, l2back, l2ahead, l3sym, l3symhalf, l3ahead, l3back")});
  b.push_back({"taps", sub.add_option("--taps", o.taps, "custom taps \"s:c,...\" (overrides --learning)")});
  b.push_back({"v", sub.add_option("--v", o.v, "learning gain")});
  b.push_back({"N", sub.add_option("--N", o.n, "trial length of the lifted operators")});
  b.push_back({"iters", sub.add_option("--iters", o.iters, "iteration budget")});
  b.push_back({"grid", sub.add_option("--grid", o.grid, "\"amin:amax:steps,bmin:bmax:steps\"")});
  b.push_back({"methods", sub.add_option("--methods", o.methods, "zsup,sigma,rho,iterate,analytic or all")});
  b.push_back({"seed", sub.add_option("--seed", o.seed, "seed of the random initial vectors")});
  b.push_back({"out", sub.add_option("--out", o.out, "output file")});
  b.push_back({"image", sub.add_option("--image", o.image, "heatmap path prefix")});
  b.push_back({"workers", sub.add_option("--workers", o.workers, "worker threads")});
  b.push_back({"manifest", sub.add_option("--manifest", o.manifest, "manifest path (default <out>.manifest.json)")});
  sub.add_option("--config", o.config, "JSON file with any of the flags above; flags win");
  return b;
}

template <class T>
void from_json_if_unset(const json& j, const char* key, CLI::Option* opt, T& target) {
  if (!j.contains(key) || (opt && opt->count() > 0)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

// Applies config-file values for every option that was not given on the command line.
void merge_config(Options& o, const std::vector<Bound>& bound, CLI::App& sub) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw Error("cannot read config " + o.config);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config " + o.config + ": " + e.what());
  }
  // a manifest can be fed back directly
  if (j.contains("config") && j["config"].is_object()) j = j["config"];
  auto opt_of = [&](const char* key) -> CLI::Option* {
    for (const auto& b : bound)
      if (std::string_view(b.key) == key) return b.opt;
    return nullptr;
  };
  auto get_opt = [&](const char* key, std::optional<double>& t) {
    CLI::Option* opt = opt_of(key);
    if (!j.contains(key) || (opt && opt->count() > 0)) return;
    if (j[key].is_null()) return;
    t = j[key].get<double>();
  };
  // coordinates come as a pair: flags for one system suppress the file's other system
  const bool ab_flags = opt_of("A")->count() + opt_of("B")->count() > 0;
  const bool uk_flags = opt_of("U")->count() + opt_of("Kp")->count() > 0;
  if (!uk_flags) {
    get_opt("A", o.a);
    get_opt("B", o.b);
  }
  if (!ab_flags) {
    get_opt("U", o.u);
    get_opt("Kp", o.kp);
  }
  from_json_if_unset(j, "learning", opt_of("learning"), o.learning);
  from_json_if_unset(j, "taps", opt_of("taps"), o.taps);
  from_json_if_unset(j, "v", opt_of("v"), o.v);
  from_json_if_unset(j, "N", opt_of("N"), o.n);
  from_json_if_unset(j, "iters", opt_of("iters"), o.iters);
  from_json_if_unset(j, "grid", opt_of("grid"), o.grid);
  from_json_if_unset(j, "methods", opt_of("methods"), o.methods);
  from_json_if_unset(j, "seed", opt_of("seed"), o.seed);
  from_json_if_unset(j, "out", opt_of("out"), o.out);
  from_json_if_unset(j, "image", opt_of("image"), o.image);
  from_json_if_unset(j, "workers", opt_of("workers"), o.workers);
  from_json_if_unset(j, "manifest", opt_of("manifest"), o.manifest);
  from_json_if_unset(j, "steps", sub.get_option_no_throw("--steps"), o.steps);
  from_json_if_unset(j, "reference", sub.get_option_no_throw("--reference"), o.reference);
  from_json_if_unset(j, "in", sub.get_option_no_throw("--in"), o.in);
  from_json_if_unset(j, "source", sub.get_option_no_throw("--source"), o.source);
  from_json_if_unset(j, "eps_boundary", sub.get_option_no_throw("--eps-boundary"), o.eps_boundary);
}

ABPoint resolve_point(const Options& o) {
  if ((o.a || o.b) && (o.u || o.kp)) throw UsageError("conflicting coordinate flags: give --A/--B or --U/--Kp");
  if (o.a || o.b) {
    if (!o.a || !o.b) throw UsageError("--A and --B must be given together");
    return {*o.a, *o.b};
  }
  if (o.u || o.kp) {
    if (!o.u || !o.kp) throw UsageError("--U and --Kp must be given together");
    return ab_from_plant({*o.u, *o.kp});
  }
  throw UsageError("a point needs --A/--B or --U/--Kp");
}

LearningFunction resolve_learning(const Options& o) {
  if (!o.taps.empty()) return LearningFunction(parse_taps(o.taps), o.v);
  const LearningKind kind = parse_kind(o.learning);
  if (kind == LearningKind::Custom) throw UsageError("--learning custom needs --taps");
  return LearningFunction::named(kind, o.v);
}

AxisRange parse_axis(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) throw UsageError("bad grid axis '" + std::string(text) + "' (expected min:max:steps)");
  AxisRange r;
  r.min = io::parse_number(parts[0]);
  r.max = io::parse_number(parts[1]);
  const double steps = io::parse_number(parts[2]);
  if (steps != std::floor(steps) || steps < 2 || steps > 100000) throw UsageError("grid steps must be an integer >= 2");
  r.steps = static_cast<int>(steps);
  return r;
}

std::pair<AxisRange, AxisRange> parse_grid(const std::string& text, int default_steps) {
  if (text.empty()) {
    return {AxisRange::interior(0.0, 1.0, default_steps), AxisRange::interior(-1.0, 1.0, default_steps)};
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--grid needs two axes separated by ','");
  return {parse_axis(text.substr(0, comma)), parse_axis(text.substr(comma + 1))};
}

std::string grid_string(const AxisRange& a, const AxisRange& b) {
  return format_number(a.min) + ":" + format_number(a.max) + ":" + std::to_string(a.steps) + "," +
         format_number(b.min) + ":" + format_number(b.max) + ":" + std::to_string(b.steps);
}

std::string methods_string(const std::set<Method>& ms) {
  std::string s;
  for (Method m : ms) {
    if (!s.empty()) s += ',';
    s += to_string(m);
  }
  return s;
}

SweepConfig resolve_sweep(const Options& o, int default_steps) {
  SweepConfig cfg;
  std::tie(cfg.a_range, cfg.b_range) = parse_grid(o.grid, default_steps);
  cfg.learning = resolve_learning(o);
  cfg.n = o.n;
  cfg.j_max = o.iters;
  try {
    cfg.methods = parse_methods(o.methods);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  cfg.seeds.seed = o.seed;
  cfg.workers = o.workers;
  cfg.validate();
  return cfg;
}

json sweep_config_json(const SweepConfig& cfg, const Options& o) {
  json j;
  j["grid"] = grid_string(cfg.a_range, cfg.b_range);
  if (cfg.learning.kind() == LearningKind::Custom) {
    j["taps"] = format_taps(cfg.learning.taps());
  } else {
    j["learning"] = std::string(token_of(cfg.learning.kind()));
  }
  j["v"] = cfg.learning.gain();
  j["N"] = cfg.n;
  j["iters"] = cfg.j_max;
  j["methods"] = methods_string(cfg.methods);
  j["seed"] = cfg.seeds.seed;
  j["workers"] = cfg.workers;
  if (!o.out.empty()) j["out"] = o.out;
  if (!o.image.empty()) j["image"] = o.image;
  return j;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Collects written files; the manifest goes out last and lists every one of them.
class Outputs {
 public:
  void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << content;
    f.close();
    if (!f) throw Error("write failed: " + path);
    files_.push_back(path);
  }
  [[nodiscard]] bool empty() const noexcept { return files_.empty(); }

  void write_manifest(const std::string& path, const std::string& command, const json& config,
                      std::uint64_t seed) const {
    json m;
    m["tool"] = "ilcconv";
    m["version"] = ILCCONV_VERSION;
    m["command"] = command;
    m["config"] = config;
    m["seed"] = seed;
    m["timestamp"] = utc_timestamp();
    json outs = json::array();
    for (const auto& p : files_) {
      outs.push_back({{"path", p}, {"sha256", io::sha256_file(p)}, {"bytes", fs::file_size(p)}});
    }
    m["outputs"] = outs;
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << m.dump(2) << '\n';
    f.close();
    if (!f) throw Error("write failed: " + path);
  }

 private:
  std::vector<std::string> files_;
};

std::string manifest_path(const Options& o) {
  if (!o.manifest.empty()) return o.manifest;
  return o.out + ".manifest.json";
}

std::string tri_label(Tri t) {
  switch (t) {
    case Tri::True: return "yes";
    case Tri::False: return "no";
    case Tri::Marginal: return "marginal";
    case Tri::Absent: return "-";
  }
  return "-";
}

// ---------------------------------------------------------------- point

int cmd_point(const Options& o, std::ostream& out) {
  const ABPoint p = resolve_point(o);
  const LearningFunction lf = resolve_learning(o);
  std::set<Method> methods;
  try {
    methods = parse_methods(o.methods);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  auto has = [&](Method m) { return methods.count(m) != 0; };

  out << std::setprecision(10);
  out << "point A=" << p.a_gain << " B=" << p.b_pole;
  if (p.a_gain > 0.0 && p.a_gain < 1.0) {
    const PlantParams pp = plant_from_ab(p);
    out << "  (U=" << pp.u_product << " Kp=" << pp.kp << ")";
  }
  if (!p.in_range()) out << "  [outside 0<A<1, -1<B<1]";
  out << "\nlearning " << lf.name() << " taps " << format_taps(lf.taps()) << " v=" << lf.gain() << "\n";

  if (has(Method::ZSup)) {
    const TLocus loc = sup_t(p, lf);
    out << "sup|T| = " << loc.sup_abs << " at theta = " << loc.argmax_theta
        << "  mc_z: " << tri_label(below_one(loc.sup_abs)) << "\n";
  }
  if (has(Method::Sigma) || has(Method::Rho) || has(Method::Iterate)) {
    const LiftedOperators ops = build_lifted(p, lf, o.n);
    const TopSingular top = top_singular(ops.m);
    if (has(Method::Sigma)) {
      out << "sigma_max^2 = " << top.sigma_sq << " (n=" << o.n << ")  mc_sigma: " << tri_label(below_one(top.sigma_sq))
          << "\n";
    }
    if (has(Method::Rho)) {
      const SpectralRadius sr = lifted_spectral_radius(ops);
      out << "rho = " << sr.rho << " (" << sr.method << ")  ac_rho: " << tri_label(below_one(sr.rho)) << "\n";
    }
    if (has(Method::Iterate)) {
      SeedSpec seeds;
      seeds.seed = o.seed;
      const IterationVerdict iv = iteration_verdict(ops, o.iters, seeds, &top.right_vector);
      const IterationTrace& t = iv.trace;
      out << "iteration (" << o.iters << " steps, seeds " << iv.seed_info() << "): mc " << (iv.mc ? "yes" : "no")
          << ", ac " << (iv.ac ? "yes" : "no");
      if (!iv.ac && below_one(lifted_spectral_radius(ops).rho) == Tri::True) {
        out << " (" << kFlagSlow << ": rho < 1, growth not yet undone)";
      }
      out << "\n";
      out << "  worst seed: mc_start=" << (t.mc_start ? std::to_string(*t.mc_start) : std::string("none"))
          << " mc_stop=" << (t.mc_stop ? std::to_string(*t.mc_stop) : std::string("none"))
          << " ac_log_ratio=" << t.ac_log_ratio << " peak_growth=" << t.peak_log_growth() / std::log(10.0)
          << " decades" << (t.has_transient() ? "  [learning transient]" : "") << "\n";
    }
  }
  if (has(Method::Analytic)) {
    auto show = [&](const char* label, auto&& fn) {
      out << label;
      try {
        const RegionVerdict rv = fn();
        out << tri_label(rv.tri()) << " [" << to_string(rv.basis) << "]";
        if (!rv.detail.empty()) out << " " << rv.detail;
      } catch (const Unsupported& e) {
        out << "n/a (" << e.what() << ")";
      }
      out << "\n";
    };
    show("analytic mc: ", [&] { return mc_region_analytic(lf.kind(), p, lf.gain()); });
    show("analytic ac: ", [&] { return ac_region_analytic(lf.kind(), p, lf.gain()); });
  }

  if (!o.out.empty()) {
    SweepConfig cfg;
    cfg.learning = lf;
    cfg.n = o.n;
    cfg.j_max = o.iters;
    cfg.methods = methods;
    cfg.seeds.seed = o.seed;
    const PointReport r = evaluate_point(cfg, p);
    std::ostringstream csv;
    io::write_sweep_csv(csv, {r});
    Outputs files;
    files.write_text(o.out, csv.str());
    json c = sweep_config_json(cfg, o);
    c.erase("grid");
    c.erase("workers");
    c["A"] = p.a_gain;
    c["B"] = p.b_pole;
    files.write_manifest(manifest_path(o), "point", c, o.seed);
  }
  return 0;
}

// ---------------------------------------------------------------- sweep

void print_stats(std::ostream& out, const AgreementStats& s) {
  out << "agreement (excluding marginal points and points within " << s.boundary_exclusion
      << " cells of a verdict change):\n";
  out << "  " << std::left << std::setw(26) << "pair" << std::right << std::setw(10) << "both-true" << std::setw(11)
      << "both-false" << std::setw(9) << "disagree" << std::setw(9) << "marginal" << std::setw(9) << "boundary"
      << std::setw(8) << "absent" << "\n";
  for (const auto& p : s.pairs) {
    const std::string name = std::string(to_string(p.x)) + " vs " + std::string(to_string(p.y));
    out << "  " << std::left << std::setw(26) << name << std::right << std::setw(10) << p.both_true << std::setw(11)
        << p.both_false << std::setw(9) << p.disagree << std::setw(9) << p.either_marginal << std::setw(9)
        << p.near_boundary << std::setw(8) << p.absent << "\n";
  }
  out << "AC-true/MC-false points: " << s.ac_true_mc_false << ", with learning transients: " << s.learning_transients
      << "\n";
}

int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw UsageError("sweep needs --out <csv>");
  const SweepConfig cfg = resolve_sweep(o, 21);
  const SweepResult res = run_sweep(cfg);

  Outputs files;
  std::ostringstream csv;
  io::write_sweep_csv(csv, res.reports);
  files.write_text(o.out, csv.str());
  if (!o.image.empty()) {
    for (io::HeatField f : io::populated_fields(res.reports)) {
      const std::string base = o.image + "_" + std::string(io::to_string(f));
      std::ostringstream ppm;
      io::write_ppm(ppm, io::render_heatmap(res.reports, f));
      files.write_text(base + ".ppm", ppm.str());
      files.write_text(base + ".txt", io::heatmap_legend(res.reports, f));
    }
  }
  files.write_manifest(manifest_path(o), "sweep", sweep_config_json(cfg, o), cfg.seeds.seed);

  out << "sweep " << res.a_values.size() << "x" << res.b_values.size() << " " << cfg.learning.name()
      << " v=" << cfg.learning.gain() << " n=" << cfg.n << " -> " << o.out << "\n";
  int flagged = 0;
  for (const auto& r : res.reports) flagged += r.has_flag(kFlagSlow) ? 1 : 0;
  if (flagged) out << "slow-converging points: " << flagged << "\n";
  if (!res.stats.pairs.empty()) print_stats(out, res.stats);
  return 0;
}

// ---------------------------------------------------------------- plant

int cmd_plant(const Options& o, std::ostream& out) {
  if (o.a || o.b) throw UsageError("plant takes --U and --Kp");
  if (!o.u || !o.kp) throw UsageError("plant needs --U and --Kp");
  if (!(*o.u > 0.0) || !std::isfinite(*o.u)) throw UsageError("--U must be > 0");
  if (o.steps < 1) throw UsageError("--steps must be >= 1");
  const double kp = *o.kp;
  const GainLimits lim = no_ilc_gain_limits(*o.u);
  const ABPoint p = ab_from_plant({*o.u, kp});

  out << std::setprecision(10);
  out << "U = " << *o.u << "  Kp = " << kp << "  ->  A = " << p.a_gain << ", B = " << p.b_pole << "\n";
  out << "condition 1 (B > -1): Kp < " << lim.kp_max_stable << "\n";
  out << "condition 2 (B > 0):  Kp < " << lim.kp_max_monotone << "\n";
  out << "condition 3 (B < 1):  Kp >= " << lim.kp_min << "\n";
  std::string verdict;
  if (kp > lim.kp_max_stable) {
    verdict = "unstable (condition 1 exceeded)";
  } else if (kp < lim.kp_min) {
    verdict = "unstable (condition 3 violated)";
  } else if (kp == lim.kp_max_stable || kp == lim.kp_min) {
    verdict = "marginal";
  } else if (kp > lim.kp_max_monotone) {
    verdict = "stable, oscillatory (condition 2 exceeded)";
  } else {
    verdict = "stable, monotone";
  }
  out << "Kp = " << kp << ": " << verdict << "\n";

  const TrialResponse tr = simulate_trial(p, o.reference, o.steps);
  out << "step response (" << o.steps << " steps, r = " << o.reference << "): " << to_string(tr.classification)
      << "\n";
  std::ostringstream csv;
  csv << "k,y\n";
  for (std::size_t k = 0; k < tr.samples.size(); ++k) csv << k << ',' << format_number(tr.samples[k]) << '\n';
  if (o.out.empty()) {
    out << csv.str();
    return 0;
  }
  Outputs files;
  files.write_text(o.out, csv.str());
  json c{{"U", *o.u}, {"Kp", kp}, {"steps", o.steps}, {"reference", o.reference}, {"out", o.out}};
  files.write_manifest(manifest_path(o), "plant", c, o.seed);
  return 0;
}

// ---------------------------------------------------------------- boundaries

std::vector<BoundaryField> resolve_sources(const std::string& text, const std::vector<PointReport>& reports) {
  std::vector<BoundaryField> out;
  if (text.empty() || text == "all") {
    auto all = [&](auto pred) { return std::all_of(reports.begin(), reports.end(), pred); };
    if (all([](const PointReport& r) { return r.sup_t.has_value(); })) out.push_back(BoundaryField::SupT);
    if (all([](const PointReport& r) { return r.sigma_sq.has_value(); })) out.push_back(BoundaryField::SigmaSq);
    if (all([](const PointReport& r) { return r.rho.has_value(); })) out.push_back(BoundaryField::Rho);
    if (all([](const PointReport& r) { return r.mc_iter != Tri::Absent; })) out.push_back(BoundaryField::Iterate);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(',', start);
    const std::string tok = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    try {
      out.push_back(parse_boundary_field(tok));
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

int cmd_boundaries(const Options& o, std::ostream& out) {
  const LearningFunction lf = resolve_learning(o);
  std::vector<AnalyticCurve> curves;
  if (lf.kind() != LearningKind::Custom) curves = analytic_curves(lf.kind(), lf.gain());
  if (curves.empty() && o.in.empty()) {
    throw UsageError("no closed-form region for " + lf.name() + "; supply a sweep CSV with --in");
  }

  std::vector<PointReport> reports;
  std::vector<double> a_values;
  if (!o.in.empty()) {
    std::ifstream in(o.in);
    if (!in) throw Error("cannot read " + o.in);
    reports = io::read_sweep_csv(in);
    a_values = grid_of(reports).a_values;
  } else {
    a_values = parse_grid(o.grid, 81).first.values();
  }

  std::ostringstream csv;
  csv << "source,label,segment,A,B\n";
  int lines = 0;
  for (const auto& c : curves) {
    int segment = 0;
    bool open = false;
    for (double a : a_values) {
      const double b = c.b_of_a(a, lf.gain());
      if (std::isfinite(b) && b > -1.0 && b < 1.0) {
        csv << "analytic," << c.label << ',' << segment << ',' << format_number(a) << ',' << format_number(b) << '\n';
        open = true;
      } else if (open) {
        ++segment;
        open = false;
      }
    }
    ++lines;
  }
  if (!reports.empty()) {
    for (BoundaryField f : resolve_sources(o.source, reports)) {
      const auto polys = extract_boundary(reports, f);
      for (std::size_t s = 0; s < polys.size(); ++s) {
        for (const ABPoint& q : polys[s]) {
          csv << to_string(f) << ",level1," << s << ',' << format_number(q.a_gain) << ',' << format_number(q.b_pole)
              << '\n';
        }
      }
      lines += static_cast<int>(polys.size());
    }
  }
  if (o.out.empty()) {
    out << csv.str();
    return 0;
  }
  Outputs files;
  files.write_text(o.out, csv.str());
  json c{{"v", lf.gain()}, {"out", o.out}};
  if (lf.kind() == LearningKind::Custom) {
    c["taps"] = format_taps(lf.taps());
  } else {
    c["learning"] = std::string(token_of(lf.kind()));
  }
  if (!o.in.empty()) c["in"] = o.in;
  if (!o.grid.empty()) c["grid"] = o.grid;
  if (!o.source.empty()) c["source"] = o.source;
  files.write_manifest(manifest_path(o), "boundaries", c, o.seed);
  out << lines << " polylines -> " << o.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const Options& o, std::ostream& out) {
  std::ostringstream report;
  const LearningFunction lf = resolve_learning(o);
  const bool audit = lf.kind() == LearningKind::L3Ahead || lf.kind() == LearningKind::L3Back;
  if (!o.in.empty()) {
    std::ifstream in(o.in);
    if (!in) throw Error("cannot read " + o.in);
    const auto reports = io::read_sweep_csv(in);
    print_stats(report, compare_methods(reports, o.eps_boundary));
  } else if (!audit) {
    const SweepConfig cfg = resolve_sweep(o, 21);
    const SweepResult res = run_sweep(cfg);
    report << "sweep " << res.a_values.size() << "x" << res.b_values.size() << " " << cfg.learning.name()
           << " v=" << cfg.learning.gain() << " n=" << cfg.n << "\n";
    print_stats(report, compare_methods(res.reports, o.eps_boundary));
  }
  if (audit) {
    const int steps = o.grid.empty() ? 41 : parse_grid(o.grid, 41).first.steps;
    report << audit_printed_bounds(lf.kind(), lf.gain(), steps, o.n, o.workers).table();
  }
  out << report.str();
  if (!o.out.empty()) {
    Outputs files;
    files.write_text(o.out, report.str());
    json c{{"v", lf.gain()}, {"N", o.n}, {"out", o.out}, {"learning", std::string(token_of(lf.kind()))}};
    if (!o.in.empty()) c["in"] = o.in;
    if (!o.grid.empty()) c["grid"] = o.grid;
    files.write_manifest(manifest_path(o), "compare", c, o.seed);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convergence domains of iterative learning control around a first-order sampled plant", "ilcconv"};
  app.set_version_flag("--version", ILCCONV_VERSION);
  app.require_subcommand(1);

  Options o;
  struct Sub {
    CLI::App* app;
    std::vector<Bound> bound;
    int (*fn)(const Options&, std::ostream&);
  };
  std::vector<Sub> subs;
  auto add = [&](const char* name, const char* help, int (*fn)(const Options&, std::ostream&)) -> CLI::App* {
    CLI::App* s = app.add_subcommand(name, help);
    subs.push_back({s, add_common(*s, o), fn});
    return s;
  };
  add("point", "all methods at one point", cmd_point);
  add("sweep", "grid sweep to CSV, heatmaps and manifest", cmd_sweep);
  CLI::App* plant = add("plant", "gain limits and step response without learning", cmd_plant);
  plant->add_option("--steps", o.steps, "samples in the trial");
  plant->add_option("--reference", o.reference, "step reference");
  CLI::App* bnd = add("boundaries", "closed-form and numeric boundary polylines", cmd_boundaries);
  bnd->add_option("--in", o.in, "sweep CSV");
  bnd->add_option("--source", o.source, "numeric sources: zsup,sigma,rho,iterate or all");
  CLI::App* cmp = add("compare", "method agreement statistics and printed-bounds audit", cmd_compare);
  cmp->add_option("--in", o.in, "sweep CSV");
  cmp->add_option("--eps-boundary", o.eps_boundary, "boundary exclusion in grid cells");

  std::vector<std::string> argv_store{"ilcconv"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (const Sub& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      merge_config(o, s.bound, *s.app);
      return s.fn(o, out);
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << "\n";
      return 2;
    } catch (const InvalidArgument& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ilcconv::cli
