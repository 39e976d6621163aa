#pragma once

// Reference tables and figure data, with CSV / JSON / text / SVG
// serializations. CSV and JSON carry full precision (17 significant digits);
// the text form applies each column's display format.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppgw/offspring.hpp"

namespace ppgw {

enum class TableId { T1, T2, T3, T4, T5 };

std::string_view to_string(TableId id);
TableId parse_table_id(std::string_view s);

struct NumberFormat {
  enum class Kind { Fixed, Significant, Scientific };
  Kind kind = Kind::Fixed;
  int digits = 7;  // decimals for Fixed/Scientific, significant digits for Significant
};

std::string format_number(double x, NumberFormat f);

struct Column {
  std::string name;
  NumberFormat display;
};

struct TableRow {
  std::string label;
  std::vector<double> values;
};

struct TableSpec {
  TableId id;
  std::string title;
  std::string label_header;
  std::vector<Column> columns;
  std::vector<TableRow> rows;
  /// Free-form metadata (parameters, solver, seed) for JSON and text headers.
  std::vector<std::pair<std::string, std::string>> config;

  /// Value at (row label, column name); throws std::out_of_range if absent.
  double at(std::string_view row, std::string_view column) const;
};

struct CurveConfig {
  OffspringModel model;
  std::size_t generations = 20;
  NumberFormat display{};
};

inline constexpr double kTable1MuOffset = 1e-4;
inline constexpr std::uint64_t kDefaultSeed = 20240229;

/// Extinction probability, Poisson vs Janardan with mu = lambda - mu_offset.
/// Columns `pm` and `jm` use the grid + Brent procedure at R's default
/// tolerance; `pm_exact` and `jm_exact` are the
/// bisection roots.
TableSpec table1(std::span<const double> lambdas, double mu_offset);
TableSpec table1();

/// Extinction curves q_n at the listed generations, one column per config.
TableSpec table_curves(TableId id, std::string title, std::span<const CurveConfig> configs,
                       std::span<const std::size_t> at_generations);

/// Poisson curves for lambda in {0.8, 2, 8} at generations 1, 4, 5, 10, 15, 20.
TableSpec table2();
/// Janardan curves (0.8, 0.4), (2, 0.2), (2, 1), (2, 1.9) at generations 1, 5, 10, 15, 20.
TableSpec table3();

/// Extinction-time pmf Pr(T = n) at generations 1, 5, 10, 15, 20.
TableSpec table4(std::span<const CurveConfig> configs);
TableSpec table4();

/// Repeated-moment estimates regenerated from seeded samples of size n for
/// (0.8, 0.4), (2, 1.9), (2, 1); row i uses derive_seed(seed, i).
TableSpec table5(std::uint64_t seed = kDefaultSeed, std::size_t n = 1000);

/// All default tables by id.
TableSpec reference_table(TableId id, std::uint64_t seed = kDefaultSeed);

enum class LineStyle { Solid, Dashed };

struct Series {
  std::string name;
  LineStyle style;
  std::vector<double> values;  // generations 1..N
};

struct FigureData {
  std::size_t generations;
  std::vector<Series> series;
};

/// Extinction curves JM(2, 0.2), JM(2, 1), JM(2, 1.9) (solid) and PM(2) (dashed).
FigureData figure1(std::size_t generations = 20);

// Serialization ---------------------------------------------------------------

void write_csv(std::ostream& out, const TableSpec& table);
void write_json(std::ostream& out, const TableSpec& table);
void write_text(std::ostream& out, const TableSpec& table);

/// Header plus rows of (label, values) read back from write_csv output.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<TableRow> rows;
};
CsvTable read_csv(std::istream& in);

/// Columns generation, then one per series.
void write_figure_csv(std::ostream& out, const FigureData& fig);
void write_figure_json(std::ostream& out, const FigureData& fig);
void write_figure_text(std::ostream& out, const FigureData& fig);
/// Standalone SVG 1.1 line chart, 800x600.
void write_figure_svg(std::ostream& out, const FigureData& fig, std::string_view title);

/// %.17g, enough to round-trip any double.
std::string full_precision(double x);

}  // namespace ppgw
