#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ilcconv {

/// One FIR tap. shift +1 reads element k+1 of the previous trial (look-ahead),
/// shift -1 reads element k-1 (look-back).
struct Tap {
  int shift = 0;
  double coefficient = 0.0;

  friend bool operator==(const Tap&, const Tap&) = default;
};

enum class LearningKind { L1, L2Back, L2Ahead, L3Symmetric, L3SymmetricHalf, L3Ahead, L3Back, Custom };

inline constexpr int kMaxShift = 8;

/// L(z) = v * sum_s c_s z^s.
///
/// The gain is kept apart from the taps because every region formula is written
/// in terms of the product A*v.
class LearningFunction {
 public:
  LearningFunction(std::vector<Tap> taps, double gain, std::string name = {},
                   LearningKind kind = LearningKind::Custom);

  /// One of the seven tabulated tap sets.
  static LearningFunction named(LearningKind kind, double gain);

  [[nodiscard]] const std::vector<Tap>& taps() const noexcept { return taps_; }
  [[nodiscard]] double gain() const noexcept { return gain_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] LearningKind kind() const noexcept { return kind_; }

  [[nodiscard]] int max_abs_shift() const noexcept;
  [[nodiscard]] bool causal() const noexcept;
  /// Coefficient at the given shift, 0 when there is no such tap.
  [[nodiscard]] double coefficient(int shift) const noexcept;

  [[nodiscard]] LearningFunction with_gain(double gain) const;

 private:
  std::vector<Tap> taps_;  // sorted by shift
  double gain_;
  std::string name_;
  LearningKind kind_;
};

[[nodiscard]] std::vector<Tap> taps_of(LearningKind kind);
[[nodiscard]] std::string_view token_of(LearningKind kind) noexcept;
/// Accepts l1, l2back, l2ahead, l3sym, l3symhalf, l3ahead, l3back (and custom).
[[nodiscard]] LearningKind parse_kind(std::string_view token);
/// Parses "s:c,s:c,...", e.g. "0:1,1:0.5,-1:0.5".
[[nodiscard]] std::vector<Tap> parse_taps(std::string_view text);
[[nodiscard]] std::string format_taps(const std::vector<Tap>& taps);
[[nodiscard]] bool is_look_ahead(LearningKind kind) noexcept;

[[nodiscard]] std::complex<double> eval_learning(const LearningFunction& lf, std::complex<double> z);

/// Banded N x N matrix with entry (i, i+s) = v c_s. Taps falling outside the trial are dropped.
[[nodiscard]] Eigen::MatrixXd toeplitz_of(const LearningFunction& lf, int n);

}  // namespace ilcconv
