#include "ilcconv/learning.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>

#include "ilcconv/error.hpp"

namespace ilcconv {

namespace {

struct KindEntry {
  LearningKind kind;
  std::string_view token;
};

constexpr KindEntry kKinds[] = {
    {LearningKind::L1, "l1"},
    {LearningKind::L2Back, "l2back"},
    {LearningKind::L2Ahead, "l2ahead"},
    {LearningKind::L3Symmetric, "l3sym"},
    {LearningKind::L3SymmetricHalf, "l3symhalf"},
    {LearningKind::L3Ahead, "l3ahead"},
    {LearningKind::L3Back, "l3back"},
    {LearningKind::Custom, "custom"},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

LearningFunction::LearningFunction(std::vector<Tap> taps, double gain, std::string name,
                                   LearningKind kind)
    : taps_(std::move(taps)), gain_(gain), name_(std::move(name)), kind_(kind) {
  if (taps_.empty()) {
    throw InvalidArgument("learning function needs at least one tap");
  }
  if (!std::isfinite(gain_) || gain_ < 0.0) {
    throw InvalidArgument("learning gain must be finite and non-negative");
  }
  std::set<int> seen;
  for (const Tap& t : taps_) {
    if (std::abs(t.shift) > kMaxShift) {
      throw InvalidArgument("tap shift " + std::to_string(t.shift) + " exceeds |shift| <= 8");
    }
    if (!std::isfinite(t.coefficient)) {
      throw InvalidArgument("tap coefficient must be finite");
    }
    if (!seen.insert(t.shift).second) {
      throw InvalidArgument("duplicate tap shift " + std::to_string(t.shift));
    }
  }
  std::sort(taps_.begin(), taps_.end(), [](const Tap& a, const Tap& b) { return a.shift < b.shift; });
  if (name_.empty()) {
    name_ = kind_ == LearningKind::Custom ? format_taps(taps_) : std::string(token_of(kind_));
  }
}

LearningFunction LearningFunction::named(LearningKind kind, double gain) {
  if (kind == LearningKind::Custom) {
    throw InvalidArgument("named(): custom learning needs explicit taps");
  }
  return LearningFunction(taps_of(kind), gain, std::string(token_of(kind)), kind);
}

int LearningFunction::max_abs_shift() const noexcept {
  int m = 0;
  for (const Tap& t : taps_) m = std::max(m, std::abs(t.shift));
  return m;
}

bool LearningFunction::causal() const noexcept {
  return std::all_of(taps_.begin(), taps_.end(), [](const Tap& t) { return t.shift <= 0; });
}

double LearningFunction::coefficient(int shift) const noexcept {
  for (const Tap& t : taps_) {
    if (t.shift == shift) return t.coefficient;
  }
  return 0.0;
}

LearningFunction LearningFunction::with_gain(double gain) const {
  return LearningFunction(taps_, gain, name_, kind_);
}

std::vector<Tap> taps_of(LearningKind kind) {
  switch (kind) {
    case LearningKind::L1: return {{0, 1.0}};
    case LearningKind::L2Back: return {{-1, 1.0}, {0, 1.0}};
    case LearningKind::L2Ahead: return {{0, 1.0}, {1, 1.0}};
    case LearningKind::L3Symmetric: return {{-1, 1.0}, {0, 1.0}, {1, 1.0}};
    case LearningKind::L3SymmetricHalf: return {{-1, 0.5}, {0, 1.0}, {1, 0.5}};
    case LearningKind::L3Ahead: return {{0, 1.0}, {1, 1.0}, {2, 1.0}};
    case LearningKind::L3Back: return {{-2, 1.0}, {-1, 1.0}, {0, 1.0}};
    case LearningKind::Custom: break;
  }
  throw InvalidArgument("custom learning kind has no fixed taps");
}

std::string_view token_of(LearningKind kind) noexcept {
  for (const auto& e : kKinds) {
    if (e.kind == kind) return e.token;
  }
  return "custom";
}

LearningKind parse_kind(std::string_view token) {
  token = trim(token);
  for (const auto& e : kKinds) {
    if (e.token == token) return e.kind;
  }
  throw InvalidArgument("unknown learning kind '" + std::string(token) +
                        "' (expected l1, l2back, l2ahead, l3sym, l3symhalf, l3ahead, l3back)");
}

bool is_look_ahead(LearningKind kind) noexcept {
  // any tap reaching forward into the previous trial
  return kind != LearningKind::L1 && kind != LearningKind::L2Back && kind != LearningKind::L3Back;
}

std::vector<Tap> parse_taps(std::string_view text) {
  std::vector<Tap> taps;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw InvalidArgument("tap '" + std::string(item) + "' is not of the form shift:coefficient");
    }
    std::string_view shift_text = trim(item.substr(0, colon));
    if (!shift_text.empty() && shift_text.front() == '+') shift_text.remove_prefix(1);
    const std::string coef_text(trim(item.substr(colon + 1)));
    Tap tap;
    auto [p, ec] = std::from_chars(shift_text.data(), shift_text.data() + shift_text.size(), tap.shift);
    if (ec != std::errc{} || p != shift_text.data() + shift_text.size()) {
      throw InvalidArgument("bad tap shift '" + std::string(shift_text) + "'");
    }
    char* end = nullptr;
    tap.coefficient = std::strtod(coef_text.c_str(), &end);
    if (coef_text.empty() || end != coef_text.c_str() + coef_text.size()) {
      throw InvalidArgument("bad tap coefficient '" + coef_text + "'");
    }
    taps.push_back(tap);
  }
  if (taps.empty()) {
    throw InvalidArgument("empty tap list");
  }
  return taps;
}

std::string format_taps(const std::vector<Tap>& taps) {
  std::string out;
  for (const Tap& t : taps) {
    if (!out.empty()) out += ',';
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, t.coefficient);
    out += std::to_string(t.shift) + ':' + std::string(buf, r.ptr);
  }
  return out;
}

std::complex<double> eval_learning(const LearningFunction& lf, std::complex<double> z) {
  if (z == 0.0 && lf.taps().front().shift < 0) {
    throw PoleError("eval_learning: z = 0 with negative shifts");
  }
  std::complex<double> sum = 0.0;
  for (const Tap& t : lf.taps()) {
    sum += t.coefficient * std::pow(z, t.shift);
  }
  return lf.gain() * sum;
}

Eigen::MatrixXd toeplitz_of(const LearningFunction& lf, int n) {
  if (n < 1) {
    throw InvalidArgument("toeplitz_of: n must be >= 1");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (const Tap& t : lf.taps()) {
    const double value = lf.gain() * t.coefficient;
    for (int i = 0; i < n; ++i) {
      const int j = i + t.shift;
      if (j >= 0 && j < n) out(i, j) = value;
    }
  }
  return out;
}

}  // namespace ilcconv
