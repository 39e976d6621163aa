#include "ppgw/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>

#include "ppgw/branching.hpp"
#include "ppgw/error.hpp"
#include "ppgw/estimation.hpp"
#include "ppgw/rng.hpp"
#include "ppgw/roots.hpp"

namespace ppgw {

namespace {

using Kind = NumberFormat::Kind;

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quoted field");
  return fields;
}

constexpr std::array<std::size_t, 6> kTable2Generations{1, 4, 5, 10, 15, 20};
constexpr std::array<std::size_t, 5> kTable3Generations{1, 5, 10, 15, 20};

struct Table5Row {
  double lambda;
  double mu;
};
constexpr std::array<Table5Row, 3> kTable5Rows{{{0.8, 0.4}, {2.0, 1.9}, {2.0, 1.0}}};

}  // namespace

std::string_view to_string(TableId id) {
  switch (id) {
    case TableId::T1: return "T1";
    case TableId::T2: return "T2";
    case TableId::T3: return "T3";
    case TableId::T4: return "T4";
    case TableId::T5: return "T5";
  }
  return "T?";
}

TableId parse_table_id(std::string_view s) {
  for (auto id : {TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5})
    if (s == to_string(id)) return id;
  throw DomainError("unknown table id '" + std::string(s) + "' (expected T1..T5)");
}

std::string format_number(double x, NumberFormat f) {
  char buf[64];
  switch (f.kind) {
    case Kind::Fixed: std::snprintf(buf, sizeof buf, "%.*f", f.digits, x); break;
    case Kind::Significant: std::snprintf(buf, sizeof buf, "%.*g", f.digits, x); break;
    case Kind::Scientific: std::snprintf(buf, sizeof buf, "%.*e", f.digits, x); break;
  }
  return buf;
}

std::string full_precision(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double TableSpec::at(std::string_view row, std::string_view column) const {
  const auto col = std::find_if(columns.begin(), columns.end(), [&](const Column& c) { return c.name == column; });
  const auto r = std::find_if(rows.begin(), rows.end(), [&](const TableRow& x) { return x.label == row; });
  if (col == columns.end() || r == rows.end()) {
    throw std::out_of_range("table " + std::string(to_string(id)) + ": no cell (" + std::string(row) + ", " +
                            std::string(column) + ")");
  }
  return r->values.at(static_cast<std::size_t>(col - columns.begin()));
}

// Tables ---------------------------------------------------------------------

TableSpec table1(std::span<const double> lambdas, double mu_offset) {
  TableSpec t{TableId::T1, "Extinction probability, Poisson vs Janardan", "lambda", {}, {}, {}};
  const NumberFormat sig7{Kind::Significant, 7}, sig10{Kind::Significant, 10};
  t.columns = {{"pm", sig7}, {"jm_mu", {Kind::Significant, 6}}, {"jm", sig7}, {"pm_exact", sig10}, {"jm_exact", sig10}};
  t.config = {{"mu_offset", short_number(mu_offset)},
              {"pm/jm solver", "100-cell grid + Brent zeroin, tol = DBL_EPSILON^0.2"},
              {"exact solver", "bisection to machine precision"}};
  for (double lambda : lambdas) {
    const auto pm = OffspringModel::poisson(lambda);
    const auto jm = OffspringModel::janardan(lambda, lambda - mu_offset);
    t.rows.push_back({short_number(lambda),
                      {extinction_probability_grid_brent(pm), lambda - mu_offset, extinction_probability_grid_brent(jm),
                       extinction_probability(pm), extinction_probability(jm)}});
  }
  return t;
}

TableSpec table1() {
  constexpr std::array<double, 5> lambdas{1.5, 2.0, 3.0, 4.5, 6.0};
  return table1(lambdas, kTable1MuOffset);
}

TableSpec table_curves(TableId id, std::string title, std::span<const CurveConfig> configs,
                       std::span<const std::size_t> at_generations) {
  TableSpec t{id, std::move(title), "generation", {}, {}, {}};
  std::vector<ExtinctionCurve> curves;
  for (const auto& c : configs) {
    t.columns.push_back({c.model.label(), c.display});
    curves.push_back(extinction_curve(c.model, c.generations));
  }
  for (std::size_t n : at_generations) {
    TableRow row{std::to_string(n), {}};
    for (const auto& curve : curves) row.values.push_back(curve.at(n));
    t.rows.push_back(std::move(row));
  }
  return t;
}

TableSpec table2() {
  const NumberFormat f{Kind::Fixed, 10};
  const std::array<CurveConfig, 3> configs{{{OffspringModel::poisson(0.8), 20, f},
                                            {OffspringModel::poisson(2.0), 20, f},
                                            {OffspringModel::poisson(8.0), 20, f}}};
  return table_curves(TableId::T2, "Poisson extinction curves q_n", configs,
                      kTable2Generations);
}

TableSpec table3() {
  const NumberFormat f{Kind::Fixed, 7};
  const std::array<CurveConfig, 4> configs{{{OffspringModel::janardan(0.8, 0.4), 20, f},
                                            {OffspringModel::janardan(2.0, 0.2), 20, f},
                                            {OffspringModel::janardan(2.0, 1.0), 20, f},
                                            {OffspringModel::janardan(2.0, 1.9), 20, f}}};
  return table_curves(TableId::T3, "Janardan extinction curves q_n", configs,
                      kTable3Generations);
}

TableSpec table4(std::span<const CurveConfig> configs) {
  TableSpec t{TableId::T4, "Extinction-time pmf Pr(T = n)",
              "generation", {}, {}, {}};
  std::vector<ExtinctionTimeDist> dists;
  for (const auto& c : configs) {
    t.columns.push_back({c.model.label(), c.display});
    dists.push_back(extinction_time_pmf(c.model, c.generations));
  }
  for (std::size_t n : kTable3Generations) {
    TableRow row{std::to_string(n), {}};
    for (const auto& d : dists) row.values.push_back(n <= d.pt.size() ? d.pt[n - 1] : 0.0);
    t.rows.push_back(std::move(row));
  }
  return t;
}

TableSpec table4() {
  const NumberFormat sci3{Kind::Scientific, 2};
  const std::array<CurveConfig, 3> configs{{{OffspringModel::poisson(0.8), 20, sci3},
                                            {OffspringModel::janardan(0.8, 0.4), 20, sci3},
                                            {OffspringModel::janardan(2.0, 0.2), 20, {Kind::Fixed, 9}}}};
  return table4(configs);
}

TableSpec table5(std::uint64_t seed, std::size_t n) {
  TableSpec t{TableId::T5, "Repeated-moment estimates from seeded samples", "model",
              {}, {}, {}};
  const NumberFormat f5{Kind::Fixed, 5};
  t.columns = {{"lambda", {Kind::Significant, 6}},
               {"mu", {Kind::Significant, 6}},
               {"lambda_hat", f5},
               {"mu_hat", f5},
               {"f0", {Kind::Fixed, 0}},
               {"sample_mean", {Kind::Fixed, 4}},
               {"admissible", {Kind::Fixed, 0}},
               {"poisson_mle", {Kind::Fixed, 3}}};
  t.config = {{"seed", std::to_string(seed)},
              {"n", std::to_string(n)},
              {"note", "regenerated from seeded samples"}};
  for (std::size_t i = 0; i < kTable5Rows.size(); ++i) {
    const auto [lambda, mu] = kTable5Rows[i];
    const auto model = OffspringModel::janardan(lambda, mu);
    const FrequencyTable freq = sample(model, n, derive_seed(seed, i));
    const Estimates e = repeated_moment_estimate(freq);
    t.rows.push_back({model.label(),
                      {lambda, mu, e.lambda_hat, e.mu_hat, static_cast<double>(freq.count(0)), e.sample_mean,
                       e.admissible ? 1.0 : 0.0, poisson_mle(freq)}});
  }
  return t;
}

TableSpec reference_table(TableId id, std::uint64_t seed) {
  switch (id) {
    case TableId::T1: return table1();
    case TableId::T2: return table2();
    case TableId::T3: return table3();
    case TableId::T4: return table4();
    case TableId::T5: return table5(seed);
  }
  throw DomainError("unknown table id");
}

FigureData figure1(std::size_t generations) {
  FigureData fig{generations, {}};
  const std::array<std::pair<OffspringModel, LineStyle>, 4> models{{
      {OffspringModel::janardan(2.0, 0.2), LineStyle::Solid},
      {OffspringModel::janardan(2.0, 1.0), LineStyle::Solid},
      {OffspringModel::janardan(2.0, 1.9), LineStyle::Solid},
      {OffspringModel::poisson(2.0), LineStyle::Dashed},
  }};
  for (const auto& [model, style] : models) {
    fig.series.push_back({model.label(), style, extinction_curve(model, generations).q});
  }
  return fig;
}

// Serialization --------------------------------------------------------------

void write_csv(std::ostream& out, const TableSpec& table) {
  out << csv_field(table.label_header);
  for (const auto& c : table.columns) out << ',' << csv_field(c.name);
  out << '\n';
  for (const auto& row : table.rows) {
    out << csv_field(row.label);
    for (double v : row.values) out << ',' << full_precision(v);
    out << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: missing header");
  t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != t.header.size()) throw ParseError("csv: row width differs from header");
    TableRow row{fields[0], {}};
    for (std::size_t i = 1; i < fields.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(fields[i].c_str(), &end);
      if (fields[i].empty() || *end != '\0') throw ParseError("csv: non-numeric cell '" + fields[i] + "'");
      row.values.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_json(std::ostream& out, const TableSpec& table) {
  nlohmann::ordered_json j;
  j["id"] = std::string(to_string(table.id));
  j["title"] = table.title;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.config) config[k] = v;
  j["config"] = config;
  nlohmann::ordered_json columns = nlohmann::ordered_json::array({table.label_header});
  for (const auto& c : table.columns) columns.push_back(c.name);
  j["columns"] = columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array({r.label});
    for (double v : r.values) row.push_back(v);
    rows.push_back(row);
  }
  j["rows"] = rows;
  out << j.dump(2) << '\n';
}

void write_text(std::ostream& out, const TableSpec& table) {
  out << to_string(table.id) << ": " << table.title << '\n';
  for (const auto& [k, v] : table.config) out << "  " << k << ": " << v << '\n';

  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{table.label_header};
  for (const auto& c : table.columns) header.push_back(c.name);
  cells.push_back(header);
  for (const auto& r : table.rows) {
    std::vector<std::string> line{r.label};
    for (std::size_t i = 0; i < r.values.size(); ++i) line.push_back(format_number(r.values[i], table.columns[i].display));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out << "  ";
      out << std::string(width[i] - line[i].size(), ' ') << line[i];
    }
    out << '\n';
  }
}

void write_figure_csv(std::ostream& out, const FigureData& fig) {
  out << "generation";
  for (const auto& s : fig.series) out << ',' << csv_field(s.name);
  out << '\n';
  for (std::size_t n = 1; n <= fig.generations; ++n) {
    out << n;
    for (const auto& s : fig.series) out << ',' << full_precision(s.values[n - 1]);
    out << '\n';
  }
}

void write_figure_json(std::ostream& out, const FigureData& fig) {
  nlohmann::ordered_json j;
  j["id"] = "figure1";
  j["generations"] = fig.generations;
  nlohmann::ordered_json series = nlohmann::ordered_json::array();
  for (const auto& s : fig.series) {
    series.push_back({{"name", s.name}, {"style", s.style == LineStyle::Solid ? "solid" : "dashed"}, {"values", s.values}});
  }
  j["series"] = series;
  out << j.dump(2) << '\n';
}

void write_figure_text(std::ostream& out, const FigureData& fig) {
  out << "Figure 1: extinction curves q_n, lambda = 2\n";
  std::vector<std::string> header{"generation"};
  for (const auto& s : fig.series) header.push_back(s.name + (s.style == LineStyle::Dashed ? " (dashed)" : ""));
  out << header[0];
  for (std::size_t i = 1; i < header.size(); ++i) out << "  " << header[i];
  out << '\n';
  for (std::size_t n = 1; n <= fig.generations; ++n) {
    std::string label = std::to_string(n);
    out << std::string(header[0].size() - std::min(header[0].size(), label.size()), ' ') << label;
    for (std::size_t i = 0; i < fig.series.size(); ++i) {
      const std::string v = format_number(fig.series[i].values[n - 1], {Kind::Fixed, 7});
      out << "  " << std::string(header[i + 1].size() - std::min(header[i + 1].size(), v.size()), ' ') << v;
    }
    out << '\n';
  }
}

void write_figure_svg(std::ostream& out, const FigureData& fig, std::string_view title) {
  constexpr double kWidth = 800, kHeight = 600;
  constexpr double kLeft = 80, kRight = 40, kTop = 60, kBottom = 70;
  constexpr double kPlotW = kWidth - kLeft - kRight, kPlotH = kHeight - kTop - kBottom;
  constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#000000", "#9467bd", "#ff7f0e"};

  const double n_max = static_cast<double>(std::max<std::size_t>(fig.generations, 2));
  const auto x_of = [&](double n) { return kLeft + (n - 1.0) / (n_max - 1.0) * kPlotW; };
  const auto y_of = [&](double v) { return kTop + (1.0 - std::clamp(v, 0.0, 1.0)) * kPlotH; };
  char buf[128];

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n"
      << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double v = i * 0.2;
    std::snprintf(buf, sizeof buf, "%.1f", v);
    out << "<line x1=\"" << kLeft << "\" y1=\"" << y_of(v) << "\" x2=\"" << kLeft + kPlotW << "\" y2=\"" << y_of(v)
        << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << kLeft - 10 << "\" y=\"" << y_of(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << buf << "</text>\n";
  }
  const std::size_t tick_step = fig.generations > 20 ? (fig.generations + 9) / 10 : 1;
  for (std::size_t n = 1; n <= fig.generations; n += tick_step) {
    out << "<text x=\"" << x_of(double(n)) << "\" y=\"" << kTop + kPlotH + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << n << "</text>\n";
  }
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW << "\" height=\"" << kPlotH
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kHeight - 20
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">generation</text>\n"
      << "<text x=\"20\" y=\"" << kTop + kPlotH / 2 << "\" transform=\"rotate(-90 20 " << kTop + kPlotH / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">Pr(X_n = 0)</text>\n";

  for (std::size_t k = 0; k < fig.series.size(); ++k) {
    const auto& s = fig.series[k];
    const char* color = kColors[k % kColors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (s.style == LineStyle::Dashed) out << " stroke-dasharray=\"8,5\"";
    out << " points=\"";
    for (std::size_t n = 1; n <= s.values.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", n > 1 ? " " : "", x_of(double(n)), y_of(s.values[n - 1]));
      out << buf;
    }
    out << "\"/>\n";
    const double ly = kTop + 20 + 20.0 * static_cast<double>(k);
    out << "<line x1=\"" << kLeft + kPlotW - 170 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + kPlotW - 130
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (s.style == LineStyle::Dashed ? " stroke-dasharray=\"8,5\"" : "") << "/>\n"
        << "<text x=\"" << kLeft + kPlotW - 122 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ppgw
