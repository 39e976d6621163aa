#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <variant>

#include "CLI11.hpp"
#include "ppgw/branching.hpp"
#include "ppgw/error.hpp"
#include "ppgw/estimation.hpp"
#include "ppgw/frequency.hpp"
#include "ppgw/offspring.hpp"
#include "ppgw/report.hpp"
#include <nlohmann/json.hpp>

namespace ppgw::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json, Text };

struct Globals {
  std::string format = "text";
  std::string out_path;
  int precision = 7;
  std::uint64_t seed = kDefaultSeed;

  Format fmt() const {
    if (format == "csv") return Format::Csv;
    if (format == "json") return Format::Json;
    return Format::Text;
  }
};

struct ModelFlags {
  std::optional<double> lambda, mu, poisson, bernoulli;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "Janardan lambda (> 0)");
    cmd->add_option("--mu", mu, "Janardan mu (0 < mu < lambda)");
    cmd->add_option("--poisson", poisson, "Poisson offspring law with this lambda");
    cmd->add_option("--bernoulli", bernoulli, "Bernoulli offspring law with this p");
  }

  OffspringModel resolve() const {
    const bool jm = lambda || mu;
    if (poisson && jm) throw UsageError("conflicting model flags: --poisson cannot be combined with --lambda/--mu");
    if (bernoulli && jm) throw UsageError("conflicting model flags: --bernoulli cannot be combined with --lambda/--mu");
    if (poisson && bernoulli) throw UsageError("conflicting model flags: --poisson and --bernoulli");
    if (poisson) return OffspringModel::poisson(*poisson);
    if (bernoulli) return OffspringModel::bernoulli(*bernoulli);
    if (lambda && mu) return OffspringModel::janardan(*lambda, *mu);
    if (jm) throw UsageError("--lambda and --mu must be given together (use --poisson L for the Poisson model)");
    throw UsageError("a model is required: --lambda L --mu M, --poisson L or --bernoulli P");
  }
};

// Small record emitter shared by the non-table subcommands ------------------

using Cell = std::variant<std::string, double, std::uint64_t, bool>;

std::string cell_text(const Cell& c, int precision, bool full) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return std::to_string(*u);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  const double d = std::get<double>(c);
  if (full) return full_precision(d);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, d);
  return buf;
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

using KeyValues = std::vector<std::pair<std::string, Cell>>;

struct Records {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void emit(std::ostream& out, const Globals& g, const KeyValues& kv, const Records* records = nullptr) {
  switch (g.fmt()) {
    case Format::Text: {
      for (const auto& [k, v] : kv) out << k << ": " << cell_text(v, g.precision, false) << '\n';
      if (records) {
        std::vector<std::vector<std::string>> lines{records->columns};
        for (const auto& r : records->rows) {
          std::vector<std::string> line;
          for (const auto& c : r) line.push_back(cell_text(c, g.precision, false));
          lines.push_back(std::move(line));
        }
        std::vector<std::size_t> width(records->columns.size(), 0);
        for (const auto& l : lines)
          for (std::size_t i = 0; i < l.size(); ++i) width[i] = std::max(width[i], l[i].size());
        for (const auto& l : lines) {
          for (std::size_t i = 0; i < l.size(); ++i) {
            if (i) out << "  ";
            out << std::string(width[i] - l[i].size(), ' ') << l[i];
          }
          out << '\n';
        }
      }
      break;
    }
    case Format::Csv: {
      if (records) {
        for (std::size_t i = 0; i < records->columns.size(); ++i) out << (i ? "," : "") << csv_escape(records->columns[i]);
        out << '\n';
        for (const auto& r : records->rows) {
          for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(r[i], 0, true));
          out << '\n';
        }
      } else {
        out << "key,value\n";
        for (const auto& [k, v] : kv) out << csv_escape(k) << ',' << csv_escape(cell_text(v, 0, true)) << '\n';
      }
      break;
    }
    case Format::Json: {
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      for (const auto& [k, v] : kv) j[k] = cell_json(v);
      if (records) {
        j["columns"] = records->columns;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& r : records->rows) {
          nlohmann::ordered_json row = nlohmann::ordered_json::array();
          for (const auto& c : r) row.push_back(cell_json(c));
          rows.push_back(row);
        }
        j["rows"] = rows;
      }
      out << j.dump(2) << '\n';
      break;
    }
  }
}

// Output goes to --out when given, else the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

// Subcommands -----------------------------------------------------------------

void cmd_dist(const Globals& g, const ModelFlags& mf, std::optional<std::size_t> max_m, std::ostream& out) {
  const OffspringModel model = mf.resolve();
  const PmfTable table = pmf_table(model);
  const std::size_t top = max_m ? *max_m : table.max_class();
  Records rec{{"m", "p", "cumulative"}, {}};
  double cum = 0.0;
  for (std::size_t m = 0; m <= top; ++m) {
    const double p = m <= table.max_class() ? table.probs()[m] : pmf(model, m);
    cum = m <= table.max_class() ? table.cum()[m] : cum + p;
    rec.rows.push_back({std::uint64_t{m}, p, cum});
  }
  const KeyValues kv{{"model", model.label()},
                     {"mean", mean(model)},
                     {"variance", variance(model)},
                     {"tail_bound", table.tail_bound()}};
  emit(out, g, g.fmt() == Format::Csv ? KeyValues{} : kv, &rec);
}

void cmd_classify(const Globals& g, const ModelFlags& mf, std::ostream& out) {
  const OffspringModel model = mf.resolve();
  const Criticality c = classify(model);
  KeyValues kv{{"model", model.label()}, {"class", std::string(to_string(c.cls))}, {"mean_offspring", c.mean_offspring}};
  if (c.threshold_mu) kv.emplace_back("threshold_mu", *c.threshold_mu);
  emit(out, g, kv);
}

void cmd_extinction(const Globals& g, const ModelFlags& mf, double tol, const std::string& solver, std::ostream& out) {
  const OffspringModel model = mf.resolve();
  double q = 0.0;
  if (solver == "grid") {
    q = extinction_probability_grid_brent(model);
  } else {
    q = extinction_probability(model, tol);
  }
  if (g.fmt() == Format::Text) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", g.precision, q);
    out << buf << '\n';
    return;
  }
  emit(out, g, {{"model", model.label()}, {"solver", solver}, {"extinction_probability", q}});
}

void cmd_curve(const Globals& g, const ModelFlags& mf, std::size_t n, std::ostream& out) {
  const OffspringModel model = mf.resolve();
  const ExtinctionCurve curve = extinction_curve(model, n);
  Records rec{{"generation", "q"}, {}};
  for (std::size_t k = 1; k <= n; ++k) rec.rows.push_back({std::uint64_t{k}, curve.at(k)});
  emit(out, g, g.fmt() == Format::Csv ? KeyValues{} : KeyValues{{"model", model.label()}, {"limit", curve.limit}}, &rec);
}

void cmd_ext_time(const Globals& g, const ModelFlags& mf, std::size_t n, std::ostream& out) {
  const OffspringModel model = mf.resolve();
  const ExtinctionTimeDist dist = extinction_time_pmf(model, n);
  Records rec{{"generation", "pr_T", "cumulative"}, {}};
  for (std::size_t k = 1; k <= n; ++k) rec.rows.push_back({std::uint64_t{k}, dist.pt[k - 1], dist.cumulative[k - 1]});
  emit(out, g, g.fmt() == Format::Csv ? KeyValues{} : KeyValues{{"model", model.label()}}, &rec);
}

void cmd_simulate(const Globals& g, const ModelFlags& mf, std::size_t traces, std::size_t max_gen, std::uint64_t cap,
                  unsigned threads, std::ostream& out) {
  const OffspringModel model = mf.resolve();
  const SimulationSummary s = simulate_many(model, g.seed, traces, max_gen, cap, threads);
  const ExtinctionCurve curve = extinction_curve(model, max_gen);

  Records rec{{"generation", "empirical_q", "analytic_q", "std_error"}, {}};
  std::vector<std::size_t> marks;
  for (std::size_t m : {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000})
    if (m <= max_gen) marks.push_back(m);
  if (marks.empty() || marks.back() != max_gen) marks.push_back(max_gen);
  for (std::size_t n : marks) {
    const double qn = curve.at(n);
    rec.rows.push_back({std::uint64_t{n}, s.extinct_by_fraction(n), qn,
                        std::sqrt(qn * (1.0 - qn) / static_cast<double>(traces))});
  }
  const KeyValues kv{{"model", model.label()},
                     {"seed", g.seed},
                     {"traces", std::uint64_t{s.traces}},
                     {"extinct", std::uint64_t{s.extinct}},
                     {"truncated", std::uint64_t{s.truncated}},
                     {"censored", std::uint64_t{s.censored}},
                     {"extinct_fraction", s.extinct_fraction()},
                     {"extinction_probability", curve.limit}};
  emit(out, g, g.fmt() == Format::Csv ? KeyValues{} : kv, &rec);
}

void cmd_sample(const Globals& g, const ModelFlags& mf, std::size_t n, bool as_freq, std::ostream& out) {
  const OffspringModel model = mf.resolve();
  const auto xs = draw(model, n, g.seed);
  if (as_freq) write_frequency_csv(out, FrequencyTable::from_observations(xs));
  else write_observations(out, xs);
}

void cmd_estimate(const Globals& g, const std::string& input, bool from_freq, std::ostream& out) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + input + "'");
  const FrequencyTable freq = from_freq ? read_frequency_csv(in) : read_observations(in);
  const Estimates e = repeated_moment_estimate(freq);
  emit(out, g,
       {{"n", freq.n()},
        {"f0", freq.count(0)},
        {"sample_mean", e.sample_mean},
        {"zero_fraction", e.zero_fraction},
        {"lambda_hat", e.lambda_hat},
        {"mu_hat", e.mu_hat},
        {"admissible", e.admissible},
        {"poisson_mle", poisson_mle(freq)}});
}

std::string extension(Format f) {
  switch (f) {
    case Format::Csv: return ".csv";
    case Format::Json: return ".json";
    case Format::Text: return ".txt";
  }
  return ".txt";
}

void write_table(std::ostream& out, const TableSpec& t, Format f) {
  switch (f) {
    case Format::Csv: write_csv(out, t); break;
    case Format::Json: write_json(out, t); break;
    case Format::Text: write_text(out, t); break;
  }
}

void write_figure(std::ostream& out, const FigureData& fig, Format f) {
  switch (f) {
    case Format::Csv: write_figure_csv(out, fig); break;
    case Format::Json: write_figure_json(out, fig); break;
    case Format::Text: write_figure_text(out, fig); break;
  }
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + p.string() + "'");
  return f;
}

void cmd_tables(const Globals& g, bool all, const std::vector<std::string>& ids, bool figure,
                std::size_t fig_generations, std::ostream& out) {
  std::vector<TableId> which;
  if (all) which = {TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5};
  for (const auto& s : ids) which.push_back(parse_table_id(s));
  if (all) figure = true;
  if (which.empty() && !figure) throw UsageError("tables: give --all, --id T1..T5 or --figure");

  std::string dir = g.out_path;
  if (dir.empty()) {
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) dir = env;
  }
  const Format f = g.fmt();

  if (dir.empty()) {
    bool first = true;
    for (TableId id : which) {
      if (!first) out << '\n';
      first = false;
      write_table(out, reference_table(id, g.seed), f);
    }
    if (figure) {
      if (!first) out << '\n';
      write_figure(out, figure1(fig_generations), f);
    }
    return;
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir + "': " + ec.message());
  for (TableId id : which) {
    auto file = open_out(fs::path(dir) / (std::string(to_string(id)) + extension(f)));
    write_table(file, reference_table(id, g.seed), f);
  }
  if (figure) {
    const FigureData fig = figure1(fig_generations);
    auto file = open_out(fs::path(dir) / ("figure1" + extension(f)));
    write_figure(file, fig, f);
    auto svg = open_out(fs::path(dir) / "figure1.svg");
    write_figure_svg(svg, fig, "Extinction probability by generation, lambda = 2");
  }
  out << "wrote " << which.size() << " table(s)" << (figure ? " and figure1" : "") << " to " << dir << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Galton-Watson analysis for Janardan (perturbed Poisson) offspring laws", "ppgw"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--out", g.out_path, "Output file (directory for `tables`)");
  app.add_option("--precision", g.precision, "Decimals for text output")->check(CLI::Range(0, 17));
  app.add_option("--seed", g.seed, "Random seed (default " + std::to_string(kDefaultSeed) + ")");

  ModelFlags mf;

  auto* dist = app.add_subcommand("dist", "Tabulate the offspring pmf");
  mf.attach(dist);
  std::optional<std::size_t> max_m;
  dist->add_option("--max-m", max_m, "Largest class to print");

  auto* cls = app.add_subcommand("classify", "Criticality class and threshold g(lambda)");
  mf.attach(cls);

  auto* ext = app.add_subcommand("extinction", "Extinction probability");
  mf.attach(ext);
  double tol = 1e-12;
  std::string solver = "bisection";
  ext->add_option("--tol", tol, "Residual tolerance, 0 < tol <= 1e-6");
  ext->add_option("--solver", solver, "bisection (exact) or grid (100-cell grid + Brent at R's default tolerance)")
      ->check(CLI::IsMember({"bisection", "grid"}));

  std::size_t generations = 20;
  auto* curve = app.add_subcommand("curve", "Extinction curve q_1..q_N");
  mf.attach(curve);
  curve->add_option("--generations", generations, "N")->check(CLI::PositiveNumber);

  auto* ext_time = app.add_subcommand("ext-time", "Extinction-time pmf Pr(T = n)");
  mf.attach(ext_time);
  ext_time->add_option("--generations", generations, "N")->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo generation traces");
  mf.attach(sim);
  std::size_t traces = 10000, max_gen = 100;
  std::uint64_t cap = kDefaultPopulationCap;
  unsigned threads = 1;
  sim->add_option("--traces", traces, "Number of traces")->check(CLI::PositiveNumber);
  sim->add_option("--max-gen", max_gen, "Generation horizon")->check(CLI::PositiveNumber);
  sim->add_option("--population-cap", cap, "Stop a trace once X_n exceeds this")->check(CLI::PositiveNumber);
  sim->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 64u));

  auto* smp = app.add_subcommand("sample", "Draw raw observations");
  mf.attach(smp);
  std::size_t n_obs = 1000;
  bool as_freq = false;
  smp->add_option("-n", n_obs, "Number of observations")->check(CLI::PositiveNumber);
  smp->add_flag("--freq", as_freq, "Write class,count CSV instead of raw observations");

  auto* est = app.add_subcommand("estimate", "Repeated-moment estimates from data");
  std::string input;
  bool from_freq = false;
  est->add_option("--input", input, "Observation file (one integer per line) or class,count CSV")->required();
  est->add_flag("--from-freq", from_freq, "Input is a class,count CSV");

  auto* tbl = app.add_subcommand("tables", "Reference tables and figure 1 data");
  bool all = false, figure = false;
  std::vector<std::string> ids;
  std::size_t fig_generations = 20;
  tbl->add_flag("--all", all, "All tables plus the figure");
  tbl->add_option("--id", ids, "Table id(s): T1..T5")->check(CLI::IsMember({"T1", "T2", "T3", "T4", "T5"}));
  tbl->add_flag("--figure", figure, "Include figure 1 curve data");
  tbl->add_option("--figure-generations", fig_generations, "Generations for the figure")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "ppgw: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*tbl) {
      cmd_tables(g, all, ids, figure, fig_generations, out);
      return kOk;
    }
    Sink sink(g.out_path, out);
    std::ostream& o = sink.stream();
    if (*dist) cmd_dist(g, mf, max_m, o);
    else if (*cls) cmd_classify(g, mf, o);
    else if (*ext) cmd_extinction(g, mf, tol, solver, o);
    else if (*curve) cmd_curve(g, mf, generations, o);
    else if (*ext_time) cmd_ext_time(g, mf, generations, o);
    else if (*sim) cmd_simulate(g, mf, traces, max_gen, cap, threads, o);
    else if (*smp) cmd_sample(g, mf, n_obs, as_freq, o);
    else if (*est) cmd_estimate(g, input, from_freq, o);
    return kOk;
  } catch (const UsageError& e) {
    err << "ppgw: " << e.what() << '\n';
    return kUsage;
  } catch (const NonConvergenceError& e) {
    err << "ppgw: numerical non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const ConsistencyError& e) {
    err << "ppgw: numerical inconsistency: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const DomainError& e) {
    err << "ppgw: " << e.what() << '\n';
    return kDomain;
  } catch (const ParseError& e) {
    err << "ppgw: invalid input: " << e.what() << '\n';
    return kDomain;
  } catch (const EvaluationError& e) {
    err << "ppgw: " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace ppgw::cli
