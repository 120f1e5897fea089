#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ilcconv/sweep.hpp"

namespace ilcconv::io {

inline constexpr std::string_view kSweepHeader =
    "A,B,sup_T,sigma_sq,rho,mc_z,mc_sigma,ac_rho,mc_iter,ac_iter,mc_analytic,ac_analytic,flags";

/// Shortest decimal string that parses back to the same double.
[[nodiscard]] std::string format_number(double x);
[[nodiscard]] double parse_number(std::string_view text);

[[nodiscard]] Tri parse_tri(std::string_view text);

void write_sweep_csv(std::ostream& os, const std::vector<PointReport>& reports);
[[nodiscard]] std::vector<PointReport> read_sweep_csv(std::istream& is);

/// Packed 8-bit RGB image.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
};

/// Fields that can be rendered: the seven verdict columns and the three numeric ones.
enum class HeatField { SupT, SigmaSq, Rho, McZ, McSigma, AcRho, McIter, AcIter, McAnalytic, AcAnalytic };

[[nodiscard]] std::string_view to_string(HeatField f) noexcept;
[[nodiscard]] bool is_numeric(HeatField f) noexcept;
/// Fields with at least one populated value in the reports.
[[nodiscard]] std::vector<HeatField> populated_fields(const std::vector<PointReport>& reports);

/// One block of `cell` x `cell` pixels per grid point; A grows to the right, B grows upwards.
/// Verdicts use a fixed palette, numeric fields a linear grayscale over [lo, hi].
[[nodiscard]] Image render_heatmap(const std::vector<PointReport>& reports, HeatField field, int cell = 4);
[[nodiscard]] std::string heatmap_legend(const std::vector<PointReport>& reports, HeatField field);

void write_ppm(std::ostream& os, const Image& image);

[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

}  // namespace ilcconv::io
