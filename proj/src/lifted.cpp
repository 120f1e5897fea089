#include "ilcconv/lifted.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <lapacke.h>

#include "ilcconv/error.hpp"

namespace ilcconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_square_finite(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument(std::string(who) + ": matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(who) + ": matrix has non-finite entries");
  }
}

bool is_lower_triangular(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 1; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (m(i, j) != 0.0) return false;
  return true;
}

bool is_upper_triangular(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != 0.0) return false;
  return true;
}

bool is_upper_hessenberg(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 2; i < m.rows(); ++i)
      if (m(i, j) != 0.0) return false;
  return true;
}

// Spectral radius of the graded matrix D^-1 H D, D = diag(e^{log_s k}); +inf when the
// solver fails or the grading overflows.
double graded_radius(const Eigen::MatrixXd& h, double log_s, bool hessenberg) {
  const auto n = static_cast<int>(h.rows());
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = h(i, j) == 0.0 ? 0.0 : h(i, j) * std::exp(log_s * (j - i));
  if (!g.allFinite()) return kInf;
  std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  lapack_int info = 0;
  if (hessenberg) {
    info = LAPACKE_dhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, g.data(), n, wr.data(), wi.data(), nullptr, 1);
  } else {
    info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, g.data(), n, wr.data(), wi.data(), nullptr, 1,
                         nullptr, 1);
  }
  if (info != 0) return kInf;
  double r = 0.0;
  for (int i = 0; i < n; ++i) r = std::max(r, std::hypot(wr[i], wi[i]));
  return std::isfinite(r) ? r : kInf;
}

}  // namespace

Eigen::MatrixXd lifted_plant(ABPoint point, int n) {
  if (n < 1) throw InvalidArgument("lifted_plant: n must be >= 1");
  Eigen::VectorXd column(n);
  double value = point.a_gain;
  for (int k = 0; k < n; ++k) {
    column(k) = value;
    value *= point.b_pole;
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) p.col(j).tail(n - j) = column.head(n - j);
  return p;
}

LiftedOperators build_lifted(ABPoint point, const LearningFunction& lf, int n) {
  const int needed = lf.max_abs_shift() + 1;
  if (n < needed) {
    throw InvalidArgument("build_lifted: trial length " + std::to_string(n) + " too small for learning '" +
                          lf.name() + "' (needs n >= " + std::to_string(needed) + ")");
  }
  LiftedOperators ops;
  ops.n = n;
  ops.p_lift = lifted_plant(point, n);
  ops.l_mat = toeplitz_of(lf, n);
  ops.m = Eigen::MatrixXd::Identity(n, n) - ops.p_lift * ops.l_mat;
  ops.point = point;
  ops.taps = lf.taps();
  ops.gain = lf.gain();
  return ops;
}

SpectralRadius spectral_radius_detail(const Eigen::MatrixXd& m) {
  require_square_finite(m, "spectral_radius");
  if (is_lower_triangular(m) || is_upper_triangular(m)) {
    return {m.diagonal().cwiseAbs().maxCoeff(), "triangular"};
  }
  const auto n = static_cast<double>(m.rows());
  Eigen::MatrixXd h;
  bool hessenberg = true;
  if (is_upper_hessenberg(m)) {
    h = m;
  } else if (Eigen::MatrixXd t = m.transpose(); is_upper_hessenberg(t)) {
    h = std::move(t);
  } else {
    h = m;
    hessenberg = false;
  }

  // Coarse scan of log s, then golden-section refinement around the best node.
  const double span = std::min(1.5, 300.0 / std::max(1.0, n - 1.0));
  constexpr int kNodes = 9;
  std::vector<double> xs(kNodes), fs(kNodes);
  int best = 0;
  for (int k = 0; k < kNodes; ++k) {
    xs[k] = -span + 2.0 * span * k / (kNodes - 1);
    fs[k] = graded_radius(h, xs[k], hessenberg);
    if (fs[k] < fs[best]) best = k;
  }
  double result = fs[best];
  double lo = xs[std::max(0, best - 1)];
  double hi = xs[std::min(kNodes - 1, best + 1)];
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = graded_radius(h, x1, hessenberg);
  double f2 = graded_radius(h, x2, hessenberg);
  for (int it = 0; it < 8; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = graded_radius(h, x1, hessenberg);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = graded_radius(h, x2, hessenberg);
    }
    result = std::min({result, f1, f2});
  }
  if (!std::isfinite(result)) {
    throw Error("spectral_radius: eigenvalue iteration failed to converge");
  }
  return {result, hessenberg ? "graded-hessenberg-qr" : "graded-dense-qr"};
}

double spectral_radius(const Eigen::MatrixXd& m) { return spectral_radius_detail(m).rho; }

double max_sv_sq(const Eigen::MatrixXd& m) {
  require_square_finite(m, "max_sv_sq");
  const Eigen::MatrixXd gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

TopSingular top_singular(const Eigen::MatrixXd& m) {
  require_square_finite(m, "top_singular");
  const Eigen::MatrixXd gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  Eigen::Index k = 0;
  const double top = es.eigenvalues().maxCoeff(&k);
  Eigen::VectorXd v = es.eigenvectors().col(k);
  // fix the sign so the vector is reproducible
  Eigen::Index lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  if (v(lead) < 0.0) v = -v;
  return {top, v.normalized()};
}

double gelfand_radius(const Eigen::MatrixXd& m, int k_max) {
  require_square_finite(m, "gelfand_radius");
  if (k_max < 4) throw InvalidArgument("gelfand_radius: k_max must be >= 4");
  double norm = m.stableNorm();
  if (norm == 0.0) return 0.0;
  Eigen::MatrixXd x = m / norm;
  double log_norm = std::log(norm);  // log ||M^(2^j)||
  for (int j = 1; j <= k_max; ++j) {
    Eigen::MatrixXd sq = x * x;
    const double f = sq.stableNorm();
    if (f == 0.0 || !std::isfinite(f)) return 0.0;
    log_norm = 2.0 * log_norm + std::log(f);
    x = sq / f;
  }
  return std::exp(log_norm / std::ldexp(1.0, k_max));
}

SpectralRadius lifted_spectral_radius(const LiftedOperators& ops) {
  double k[3] = {0.0, 0.0, 0.0};  // A v c_s for s = -1, 0, 1
  bool narrow = !ops.taps.empty();
  for (const Tap& t : ops.taps) {
    if (t.shift < -1 || t.shift > 1) {
      narrow = false;
      break;
    }
    k[t.shift + 1] = ops.point.a_gain * ops.gain * t.coefficient;
  }
  if (!narrow || ops.n < 1) return spectral_radius_detail(ops.m);
  const double b = ops.point.b_pole;
  if (k[2] == 0.0) return {std::abs(1.0 - k[1]), "triangular"};

  // det(A L - mu (I - B S)) = prod_j [(k0 - mu)^2 - 4 c_j k1 (k_-1 + mu B)], times (k0 - mu) for odd n
  using cd = std::complex<double>;
  const int n = ops.n;
  double rho = n % 2 == 1 ? std::abs(1.0 - k[1]) : 0.0;
  for (int j = 1; 2 * j <= n; ++j) {
    const double cj = std::cos(M_PI * j / (n + 1));
    const double c = cj * cj;
    const double h = k[1] + 2.0 * c * b * k[2];
    const double q = k[1] * k[1] - 4.0 * c * k[2] * k[0];
    const cd root = std::sqrt(cd(h * h - q, 0.0));
    const cd r1 = std::abs(cd(h) + root) >= std::abs(cd(h) - root) ? cd(h) + root : cd(h) - root;
    const cd r2 = std::abs(r1) > 0.0 ? cd(q) / r1 : cd(0.0);
    rho = std::max({rho, std::abs(1.0 - r1), std::abs(1.0 - r2)});
  }
  return {rho, "tridiagonal-pencil"};
}

Eigen::MatrixXd apply_m(const LiftedOperators& ops, const Eigen::MatrixXd& x) {
  const int n = ops.n;
  if (x.rows() != n) throw InvalidArgument("apply_m: dimension mismatch");
  const double a = ops.point.a_gain, b = ops.point.b_pole;
  Eigen::MatrixXd out(n, x.cols());
  Eigen::VectorXd w(n);
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    w.setZero();
    for (const Tap& t : ops.taps) {
      const double g = ops.gain * t.coefficient;
      const int lo = std::max(0, -t.shift), hi = std::min(n, n - t.shift);
      for (int i = lo; i < hi; ++i) w(i) += g * x(i + t.shift, c);
    }
    double y = 0.0;
    for (int i = 0; i < n; ++i) {
      y = b * y + a * w(i);
      out(i, c) = x(i, c) - y;
    }
  }
  return out;
}

SpectralSummary summarize(const LiftedOperators& ops) {
  const SpectralRadius r = lifted_spectral_radius(ops);
  SpectralSummary s;
  s.rho = r.rho;
  s.sigma_sq_max = max_sv_sq(ops.m);
  s.method_note = "rho: " + r.method + "; sigma^2: symmetric eigensolve of M^T M";
  return s;
}

}  // namespace ilcconv
