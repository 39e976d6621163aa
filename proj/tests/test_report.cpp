#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "golden.hpp"
#include "ppgw/branching.hpp"
#include "ppgw/error.hpp"
#include "ppgw/report.hpp"

using namespace ppgw;

namespace {

void expect_cells(const TableSpec& t, const std::vector<golden::Cell>& cells, double tol) {
  for (const auto& c : cells) EXPECT_NEAR(t.at(c.row, c.column), c.value, tol) << c.row << " / " << c.column;
}

std::vector<double> flat_values(const TableSpec& t) {
  std::vector<double> v;
  for (const auto& r : t.rows) v.insert(v.end(), r.values.begin(), r.values.end());
  return v;
}

}  // namespace

TEST(Table1, ReferenceValues) {
  const TableSpec t = table1();
  EXPECT_EQ(t.id, TableId::T1);
  expect_cells(t, golden::kTable1, 5e-7);
  EXPECT_DOUBLE_EQ(t.at("2", "jm_mu"), 1.9999);
  EXPECT_DOUBLE_EQ(t.at("4.5", "jm_mu"), 4.4999);
}

TEST(Table1, ExactColumnsAreBisectionRoots) {
  const TableSpec t = table1();
  EXPECT_EQ(t.at("2", "pm_exact"), extinction_probability(OffspringModel::poisson(2)));
  EXPECT_EQ(t.at("2", "jm_exact"), extinction_probability(OffspringModel::janardan(2, 1.9999)));
}

TEST(Table1, PoissonLimitAsOffsetVanishes) {
  const double lambdas[] = {2.0};
  const TableSpec t = table1(lambdas, 1e-12);
  EXPECT_NEAR(t.at("2", "pm_exact"), t.at("2", "jm_exact"), 1e-9);
  EXPECT_NEAR(t.at("2", "pm"), t.at("2", "jm"), 1e-9);
}

TEST(Table2, ReferenceValues) { expect_cells(table2(), golden::kTable2, 5e-10); }

TEST(Table3, ReferenceValues) { expect_cells(table3(), golden::kTable3, 5e-7); }

TEST(Table4, ReferenceValues) {
  const TableSpec t = table4();
  for (const auto& c : golden::kTable4Scientific) {
    EXPECT_EQ(format_number(t.at(c.row, c.column), {NumberFormat::Kind::Scientific, 2}), c.printed)
        << c.row << " / " << c.column;
  }
  expect_cells(t, golden::kTable4Fixed, 5e-8);
}

TEST(Table4, FirstRowIsFirstGeneration) {
  const TableSpec t = table4();
  EXPECT_EQ(t.at("1", "PM(0.8)"), std::exp(-0.8));
  EXPECT_EQ(t.at("1", "JM(2,0.2)"), std::exp(-2.0));
}

TEST(Table5, RegeneratedAndDeterministic) {
  const TableSpec a = table5(kDefaultSeed);
  const TableSpec b = table5(kDefaultSeed);
  ASSERT_EQ(a.rows.size(), 3u);
  EXPECT_EQ(flat_values(a), flat_values(b));
  EXPECT_NE(flat_values(a), flat_values(table5(kDefaultSeed + 1)));
  for (const auto& r : golden::kTable5) {
    const std::string label = OffspringModel::janardan(r.lambda, r.mu).label();
    EXPECT_NEAR(a.at(label, "lambda_hat"), r.lambda, 0.15) << label;
    EXPECT_NEAR(a.at(label, "mu_hat"), r.mu, 0.3) << label;
  }
}

TEST(ReferenceTable, Dispatch) {
  EXPECT_EQ(reference_table(TableId::T3).id, TableId::T3);
  EXPECT_EQ(parse_table_id("T4"), TableId::T4);
  EXPECT_THROW(parse_table_id("T9"), DomainError);
}

TEST(TableSpec, MissingCellThrows) {
  EXPECT_THROW(table2().at("3", "PM(2)"), std::out_of_range);
  EXPECT_THROW(table2().at("4", "PM(3)"), std::out_of_range);
}

TEST(Csv, RoundTripIsBitExact) {
  for (TableId id : {TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5}) {
    const TableSpec t = reference_table(id);
    std::stringstream ss;
    write_csv(ss, t);
    const CsvTable back = read_csv(ss);
    ASSERT_EQ(back.rows.size(), t.rows.size());
    ASSERT_EQ(back.header.size(), t.columns.size() + 1);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      EXPECT_EQ(back.rows[i].label, t.rows[i].label);
      ASSERT_EQ(back.rows[i].values.size(), t.rows[i].values.size());
      for (std::size_t j = 0; j < t.rows[i].values.size(); ++j) {
        EXPECT_EQ(back.rows[i].values[j], t.rows[i].values[j]) << to_string(id);
      }
    }
  }
}

TEST(Csv, QuotesLabelsWithCommas) {
  std::stringstream ss;
  write_csv(ss, table3());
  const std::string text = ss.str();
  EXPECT_NE(text.find("\"JM(2,0.2)\""), std::string::npos);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(read_csv(ss).header.at(2), "JM(2,0.2)");
}

TEST(Csv, FullPrecisionRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 2.2250738585072014e-308, 4.9e-324, 1e300, 0.20318786997997995}) {
    EXPECT_EQ(std::strtod(full_precision(x).c_str(), nullptr), x);
  }
}

TEST(Json, MirrorsCsvColumns) {
  const TableSpec t = table2();
  std::stringstream ss;
  write_json(ss, t);
  const auto j = nlohmann::json::parse(ss.str());
  EXPECT_EQ(j.at("id"), "T2");
  EXPECT_TRUE(j.contains("config"));
  ASSERT_EQ(j.at("columns").size(), t.columns.size() + 1);
  EXPECT_EQ(j.at("columns")[0], "generation");
  ASSERT_EQ(j.at("rows").size(), t.rows.size());
  EXPECT_EQ(j.at("rows")[3][0], "10");
  EXPECT_EQ(j.at("rows")[3][2].get<double>(), t.at("10", "PM(2)"));
}

TEST(Text, UsesDisplayFormat) {
  std::stringstream ss;
  write_text(ss, table3());
  const std::string text = ss.str();
  EXPECT_NE(text.find("0.3060074"), std::string::npos);
  EXPECT_NE(text.find("0.9997675"), std::string::npos);
  std::stringstream s4;
  write_text(s4, table4());
  EXPECT_NE(s4.str().find("9.44e-04"), std::string::npos);
}

TEST(FormatNumber, Kinds) {
  EXPECT_EQ(format_number(0.20320277, {NumberFormat::Kind::Fixed, 7}), "0.2032028");
  EXPECT_EQ(format_number(0.002517337287, {NumberFormat::Kind::Significant, 7}), "0.002517337");
  EXPECT_EQ(format_number(0.000943951386, {NumberFormat::Kind::Scientific, 2}), "9.44e-04");
}

TEST(Figure1, SeriesAndInvariants) {
  const FigureData fig = figure1(20);
  ASSERT_EQ(fig.series.size(), 4u);
  EXPECT_EQ(fig.series[0].name, "JM(2,0.2)");
  EXPECT_EQ(fig.series[3].name, "PM(2)");
  EXPECT_EQ(fig.series[3].style, LineStyle::Dashed);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(fig.series[i].style, LineStyle::Solid);
  for (const auto& s : fig.series) {
    ASSERT_EQ(s.values.size(), 20u);
    EXPECT_NEAR(s.values[0], 0.1353353, 5e-8);
    for (std::size_t n = 0; n < s.values.size(); ++n) {
      EXPECT_GE(s.values[n], 0.0);
      EXPECT_LE(s.values[n], 1.0);
      if (n) EXPECT_GE(s.values[n], s.values[n - 1]);
    }
  }
  EXPECT_NEAR(fig.series[2].values[19], 0.2083325, 5e-8);
  EXPECT_NEAR(fig.series[3].values[19], 0.2031878677, 5e-11);
}

TEST(Figure1, Serializations) {
  const FigureData fig = figure1(20);
  std::stringstream csv;
  write_figure_csv(csv, fig);
  const CsvTable back = read_csv(csv);
  ASSERT_EQ(back.rows.size(), 20u);
  EXPECT_EQ(back.header.front(), "generation");
  EXPECT_EQ(back.rows[19].values[3], fig.series[3].values[19]);

  std::stringstream js;
  write_figure_json(js, fig);
  const auto j = nlohmann::json::parse(js.str());
  EXPECT_EQ(j.at("series").size(), 4u);
  EXPECT_EQ(j.at("series")[3].at("style"), "dashed");

  std::stringstream svg;
  write_figure_svg(svg, fig, "Extinction curves");
  const std::string s = svg.str();
  EXPECT_EQ(s.rfind("<?xml", 0), 0u);
  EXPECT_NE(s.find("version=\"1.1\""), std::string::npos);
  EXPECT_NE(s.find("width=\"800\" height=\"600\""), std::string::npos);
  EXPECT_NE(s.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
}
