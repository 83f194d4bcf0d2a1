#ifndef SPINPHOTON_SWEEP_HPP
#define SPINPHOTON_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinphoton/excitation.hpp"

namespace spinphoton {

struct AxisSpec {
  double min = -4.0;
  double max = 4.0;
  int count = 81;

  double value(int i) const;
  void validate(std::string_view name) const;
};

enum class Quantity : std::uint32_t { NtrMax = 1, Fc = 2, Concurrence = 3, Tau = 4 };

std::string quantity_name(Quantity q);
/// Accepts N_tr_max, Fc, concurrence, tau (case-insensitive).
std::optional<Quantity> parse_quantity(std::string_view name);

struct SweepSpec {
  AxisSpec detuning;  ///< omega_0 - omega_c
  AxisSpec delta;
  std::vector<Quantity> quantities{Quantity::NtrMax, Quantity::Fc, Quantity::Tau};
  OptimizerConfig optimizer;
};

/// NaN marks quantities that were not requested.
struct SweepCell {
  double n_tr_max = std::numeric_limits<double>::quiet_NaN();
  double fc = std::numeric_limits<double>::quiet_NaN();
  /// 2 J_perp F_c, J_perp of the normalized optimal trion state (1/2 without N_tr_max).
  double concurrence = std::numeric_limits<double>::quiet_NaN();
  double tau = std::numeric_limits<double>::quiet_NaN();
  bool optimizer_converged = true;

  double get(Quantity q) const;
};

/// Cells are stored row-major with delta as the row index:
/// cell(i_detuning, i_delta) = cells[i_delta * detuning.count + i_detuning].
struct SweepGrid {
  AxisSpec detuning;
  AxisSpec delta;
  std::vector<Quantity> quantities;
  std::vector<SweepCell> cells;
  int optimizer_warnings = 0;

  bool has(Quantity q) const;
  const SweepCell& cell(int i_detuning, int i_delta) const;
  double value(Quantity q, int i_detuning, int i_delta) const { return cell(i_detuning, i_delta).get(q); }
};

/// Evaluates the requested quantities on every (omega_0 - omega_c, delta)
/// cell; other fields of `base` are kept. Output does not depend on `workers`.
SweepGrid run_map(const SystemParams& base, const SweepSpec& spec, int workers = 1);

struct Polyline {
  std::vector<std::pair<double, double>> points;  ///< (omega_0 - omega_c, delta)
  bool closed = false;
};

/// Marching-squares iso-lines at `level`. A cell vertex counts as inside when
/// its value is strictly above `level`, so a constant field yields no lines.
/// Saddles are resolved with the cell-center average.
std::vector<Polyline> extract_contour(const SweepGrid& grid, Quantity q, double level);

/// 4-connected components of cells with value >= level; -1 marks cells below.
std::vector<int> superlevel_components(const SweepGrid& grid, Quantity q, double level);

/// Long format: header omega0,delta,quantity,value; one row per cell and quantity.
void write_long_csv(std::ostream& out, const SweepGrid& grid);

/// 16-byte header ("SPGD", uint32 n_omega0, uint32 n_delta, uint32 quantity id),
/// four doubles (omega0 min/max, delta min/max), then n_delta * n_omega0
/// doubles, delta-major. Little-endian.
void write_binary(std::ostream& out, const SweepGrid& grid, Quantity q);

struct BinaryGrid {
  AxisSpec detuning;
  AxisSpec delta;
  Quantity quantity = Quantity::NtrMax;
  std::vector<double> values;
};

BinaryGrid read_binary(std::istream& in);

}  // namespace spinphoton

#endif  // SPINPHOTON_SWEEP_HPP
