#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ilcconv/learning.hpp"
#include "ilcconv/plant.hpp"

namespace ilcconv {

/// Finite-trial (lifted) operators of one learning loop.
struct LiftedOperators {
  int n = 0;
  Eigen::MatrixXd p_lift;  ///< lower-triangular Toeplitz, column 0 = A, AB, AB^2, ...
  Eigen::MatrixXd l_mat;   ///< banded learning matrix
  Eigen::MatrixXd m;       ///< iteration matrix I - p_lift * l_mat
  ABPoint point;           ///< kept so M can be applied in O(n) without the dense product
  std::vector<Tap> taps;
  double gain = 0.0;
};

inline constexpr int kMapTrialLength = 128;
inline constexpr int kAcceptanceTrialLength = 256;

/// Impulse response of z P(z) = A / (1 - B z^-1) arranged as an N x N lower-triangular matrix.
[[nodiscard]] Eigen::MatrixXd lifted_plant(ABPoint point, int n);

/// Requires n >= max|shift| + 1 so that every tap lands inside the trial on some row.
[[nodiscard]] LiftedOperators build_lifted(ABPoint point, const LearningFunction& lf, int n);

struct SpectralRadius {
  double rho = 0.0;
  std::string method;  ///< "triangular", "graded-hessenberg-qr" or "graded-dense-qr"
};

/// Largest eigenvalue modulus.
///
/// Triangular input short-circuits to max |diagonal|. Otherwise the eigenvalues of the
/// diagonally graded similarities D^-1 M D, D = diag(s^k), are computed by dense QR and the
/// smallest resulting radius over s is returned. The grading leaves the exact spectrum
/// unchanged but suppresses the rounding-driven spread that the exponentially non-normal
/// look-ahead iteration matrices otherwise show at N in the hundreds.
[[nodiscard]] SpectralRadius spectral_radius_detail(const Eigen::MatrixXd& m);
[[nodiscard]] double spectral_radius(const Eigen::MatrixXd& m);

/// Spectral radius of ops.m using its structure. M = I - A (I - B S)^-1 L with S the down-shift,
/// so its eigenvalues are 1 - mu for the roots mu of the banded pencil (A L, I - B S). For taps
/// within shifts -1..1 that pencil is tridiagonal Toeplitz and its determinant factors into one
/// quadratic in mu per Chebyshev node cos^2(pi j / (n + 1)), which gives the spectrum exactly.
/// Wider tap sets fall back to spectral_radius_detail(ops.m).
[[nodiscard]] SpectralRadius lifted_spectral_radius(const LiftedOperators& ops);

/// M X for an N x k block, via the plant recursion y_i = B y_{i-1} + A w_i: O(N k taps).
[[nodiscard]] Eigen::MatrixXd apply_m(const LiftedOperators& ops, const Eigen::MatrixXd& x);

/// Largest eigenvalue of M^T M, i.e. the squared induced 2-norm.
[[nodiscard]] double max_sv_sq(const Eigen::MatrixXd& m);

struct TopSingular {
  double sigma_sq = 0.0;
  Eigen::VectorXd right_vector;  ///< unit vector maximising |M x|
};

[[nodiscard]] TopSingular top_singular(const Eigen::MatrixXd& m);

/// Gelfand estimate ||M^(2^k)||^(1/2^k) by repeated squaring with log-scale renormalisation.
/// Independent check on spectral_radius; not used by the sweep.
[[nodiscard]] double gelfand_radius(const Eigen::MatrixXd& m, int k_max);

struct SpectralSummary {
  double rho = 0.0;
  double sigma_sq_max = 0.0;
  std::string method_note;
};

[[nodiscard]] SpectralSummary summarize(const LiftedOperators& ops);

}  // namespace ilcconv
