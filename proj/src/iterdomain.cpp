#include "ilcconv/iterdomain.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ilcconv/error.hpp"

namespace ilcconv {

namespace {

bool lower_triangular(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 1; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (m(i, j) != 0.0) return false;
  return true;
}

void finish(IterationTrace& t) {
  const auto steps = static_cast<int>(t.log_norms.size()) - 1;
  for (int j = 0; j < steps; ++j) {
    const bool increasing = t.log_norms[j + 1] - t.log_norms[j] > kMonotoneTolerance;
    if (!t.mc_start) {
      if (!increasing) t.mc_start = j;
    } else if (increasing) {
      t.mc_stop = j;
      break;
    }
  }
  t.ac_log_ratio = (t.log_norms.back() - t.log_norms.front()) / std::log(10.0);
}

// Runs every column of `x` through the recursion at once; column norms are tracked separately.
// `step` maps the normalised block x to M x.
template <class Step>
std::vector<IterationTrace> iterate_columns(Step&& step, Eigen::MatrixXd x, int j_max) {
  if (j_max < 1) throw InvalidArgument("iterate: j_max must be >= 1");
  const auto k = x.cols();
  std::vector<IterationTrace> traces(static_cast<std::size_t>(k));
  for (Eigen::Index c = 0; c < k; ++c) {
    const double nrm = x.col(c).stableNorm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InvalidArgument("iterate: initial vector must be non-zero and finite");
    traces[c].log_norms.reserve(static_cast<std::size_t>(j_max) + 1);
    traces[c].log_norms.push_back(std::log(nrm));
    x.col(c) /= nrm;
  }
  Eigen::MatrixXd y(x.rows(), k);
  for (int j = 0; j < j_max; ++j) {
    step(x, y);
    for (Eigen::Index c = 0; c < k; ++c) {
      const double nrm = y.col(c).stableNorm();
      auto& ln = traces[c].log_norms;
      if (nrm == 0.0) {
        // exact annihilation; keep the trace finite and strictly decreasing
        ln.push_back(ln.back() - 745.0);
        y.col(c).setZero();
        y(0, c) = 1.0;
        continue;
      }
      ln.push_back(ln.back() + std::log(nrm));
      y.col(c) /= nrm;
    }
    x.swap(y);
  }
  for (auto& t : traces) finish(t);
  return traces;
}

auto dense_step(const Eigen::MatrixXd& m, Eigen::Index rows) {
  if (m.rows() != m.cols() || rows != m.rows()) throw InvalidArgument("iterate: dimension mismatch");
  return [&m, tri = lower_triangular(m)](const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
    if (tri) {
      y.noalias() = m.triangularView<Eigen::Lower>() * x;
    } else {
      y.noalias() = m * x;
    }
  };
}

// Uses the plant recursion when the operators carry their taps, else the dense matrix.
auto structured_step(const LiftedOperators& ops, Eigen::Index rows) {
  if (rows != ops.n) throw InvalidArgument("iterate: dimension mismatch");
  const bool have = !ops.taps.empty() && ops.m.rows() == ops.n;
  return [&ops, have](const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
    if (have) {
      y = apply_m(ops, x);
    } else {
      y.noalias() = ops.m * x;
    }
  };
}

}  // namespace

double IterationTrace::peak_log_growth() const noexcept {
  if (log_norms.empty()) return 0.0;
  return *std::max_element(log_norms.begin(), log_norms.end()) - log_norms.front();
}

IterationTrace iterate(const Eigen::MatrixXd& m, const Eigen::VectorXd& x0, int j_max) {
  return iterate_columns(dense_step(m, x0.size()), x0, j_max).front();
}

IterationTrace iterate(const LiftedOperators& ops, const Eigen::VectorXd& x0, int j_max) {
  return iterate_columns(structured_step(ops, x0.size()), x0, j_max).front();
}

SeedSpec SeedSpec::impulse_only() {
  SeedSpec s;
  s.singular_vector = false;
  s.ones = false;
  s.random_count = 0;
  return s;
}

std::string IterationVerdict::seed_info() const {
  std::string out;
  for (const auto& l : seed_labels) {
    if (!out.empty()) out += ',';
    out += l;
  }
  return out + " (seed " + std::to_string(seed) + ")";
}

IterationVerdict iteration_verdict(const LiftedOperators& ops, int j_max, const SeedSpec& seeds,
                                   const Eigen::VectorXd* top_right_vector) {
  const int n = ops.n;
  std::vector<Eigen::VectorXd> starts;
  IterationVerdict out;
  out.seed = seeds.seed;
  if (seeds.singular_vector) {
    starts.push_back(top_right_vector ? *top_right_vector : top_singular(ops.m).right_vector);
    out.seed_labels.emplace_back("singular");
  }
  if (seeds.impulse) {
    starts.push_back(Eigen::VectorXd::Unit(n, 0));
    out.seed_labels.emplace_back("impulse");
  }
  if (seeds.ones) {
    starts.push_back(Eigen::VectorXd::Ones(n));
    out.seed_labels.emplace_back("ones");
  }
  std::mt19937_64 rng(seeds.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < seeds.random_count; ++r) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    starts.push_back(v);
    out.seed_labels.push_back("random" + std::to_string(r));
  }
  if (starts.empty()) throw InvalidArgument("iteration_verdict: empty seed ensemble");

  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(starts.size()));
  for (std::size_t c = 0; c < starts.size(); ++c) x.col(static_cast<Eigen::Index>(c)) = starts[c];
  out.traces = iterate_columns(structured_step(ops, n), std::move(x), j_max);

  out.mc = std::all_of(out.traces.begin(), out.traces.end(), [](const IterationTrace& t) { return t.monotone(); });
  out.ac = std::all_of(out.traces.begin(), out.traces.end(), [](const IterationTrace& t) { return t.ac_log_ratio < 0.0; });
  std::size_t worst = 0;
  for (std::size_t c = 1; c < out.traces.size(); ++c) {
    if (out.traces[c].peak_log_growth() > out.traces[worst].peak_log_growth()) worst = c;
  }
  out.trace = out.traces[worst];
  return out;
}

}  // namespace ilcconv
