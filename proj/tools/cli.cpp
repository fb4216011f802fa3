#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "kfib/invariants.hpp"
#include "kfib/oracle.hpp"
#include "kfib/problem.hpp"

namespace kfib::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<long> split_longs(const std::string& text, char separator) {
  std::vector<long> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, separator)) {
    size_t used = 0;
    long value = 0;
    try {
      value = std::stol(token, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("cannot parse integer '" + token + "'");
    }
    if (used != token.size())
      throw std::runtime_error("cannot parse integer '" + token + "'");
    out.push_back(value);
  }
  if (out.empty()) throw std::runtime_error("expected a non-empty integer list");
  return out;
}

Json rational_json(const Rational& value) {
  Json out = Json::object();
  const Integer num = numerator(value);
  const Integer den = denominator(value);
  const Integer lo(std::numeric_limits<long long>::min());
  const Integer hi(std::numeric_limits<long long>::max());
  if (num >= lo && num <= hi && den >= lo && den <= hi) {
    out["num"] = static_cast<long long>(num);
    out["den"] = static_cast<long long>(den);
  } else {
    out["num"] = num.str();
    out["den"] = den.str();
  }
  return out;
}

struct AnalyzeArgs {
  std::string file;
  bool json = false;
  bool oracle = false;
  bool fail_on_unstable = false;
  long max_k = 24;
};

int run_analyze(const AnalyzeArgs& args) {
  ProblemSpec spec = parse_problem(read_file(args.file));
  if (args.oracle) spec.oracle_check = true;
  RunOptions options;
  options.max_k = args.max_k;
  const StabilityReport report = run_problem(spec, options);
  std::cout << render_report(report,
                             args.json ? ReportFormat::Json : ReportFormat::Text);
  if (args.json) std::cout << "\n";
  return (args.fail_on_unstable && report.unstable) ? 2 : 0;
}

struct DfArgs {
  bool has_normal_cone = false;
  long normal_cone_degree = 2;
  std::string base_dims;
  std::string polarization;
  std::string summands;
  std::string weights;
  long h_xi = 1;
  std::string h_base;
  bool json = false;
};

void print_df_text(const std::vector<std::pair<std::string, Rational>>& rows) {
  for (const auto& [name, value] : rows) std::cout << name << " = " << value.str() << "\n";
}

void print_df_json(const std::vector<std::pair<std::string, Rational>>& rows) {
  Json out = Json::object();
  for (const auto& [name, value] : rows) out[name] = rational_json(value);
  std::cout << out.dump(2) << "\n";
}

int run_df(const DfArgs& args) {
  std::vector<std::pair<std::string, Rational>> rows;
  if (args.has_normal_cone) {
    const TestConfiguration tc =
        make_point_normal_cone_tc(static_cast<int>(args.normal_cone_degree));
    rows.emplace_back("df_intersection", df_intersection(tc));
    rows.emplace_back("df_weights", df_weights(tc_hilbert_poly_from_model(tc),
                                               tc_weight_poly_via_chi(tc)));
    rows.emplace_back("minimum_norm", min_norm_tc(tc));
  } else {
    if (args.base_dims.empty() || args.summands.empty() || args.weights.empty())
      throw std::runtime_error(
          "df: provide --normal-cone, or a bundle description with --base-dims, "
          "--summands and --weights");
    ProblemSpec spec;
    for (long d : split_longs(args.base_dims, ','))
      spec.base_dimensions.push_back(static_cast<int>(d));
    spec.polarization = args.polarization.empty()
                            ? std::vector<long>(spec.base_dimensions.size(), 1)
                            : split_longs(args.polarization, ',');
    std::string row;
    std::istringstream rows_in(args.summands);
    while (std::getline(rows_in, row, ';')) spec.summands.push_back(split_longs(row, ','));
    spec.H_is_xi = args.h_base.empty() && args.h_xi == 1;
    spec.H_xi = args.h_xi;
    if (!args.h_base.empty()) spec.H_base = split_longs(args.h_base, ',');
    spec.mode = DegenerationMode::Explicit;
    spec.explicit_weights.push_back(split_longs(args.weights, ','));

    const PolarisedFibration fibration = build_fibration(spec);
    const FibrationDegeneration degeneration =
        make_weight_degeneration(fibration, spec.explicit_weights.front());
    const TestConfiguration fibre_tc = make_fibre_test_configuration(degeneration);
    rows.emplace_back("df_intersection", df_intersection(fibre_tc));
    rows.emplace_back("df_weights", df_weights(fibre_hilbert_poly(fibre_tc),
                                               fibre_weight_poly(fibre_tc)));
    const DFExpansion expansion = df_fibration_expansion(degeneration);
    rows.emplace_back("W0", expansion.W0);
    rows.emplace_back("W1", expansion.W1);
    rows.emplace_back("minimum_norm", min_norm_fibration(degeneration));
  }
  if (args.json) print_df_json(rows);
  else print_df_text(rows);
  return 0;
}

struct OracleArgs {
  std::string file;
  bool json = false;
  long max_k = 24;
};

std::string degeneration_label(const FibrationDegeneration& degeneration) {
  std::ostringstream out;
  if (degeneration.subsheaf) {
    out << "F={";
    for (size_t i = 0; i < degeneration.subsheaf->size(); ++i)
      out << (i ? "," : "") << (*degeneration.subsheaf)[i];
    out << "}";
  } else {
    out << "weights (";
    for (size_t i = 0; i < degeneration.weights.size(); ++i)
      out << (i ? "," : "") << degeneration.weights[i];
    out << ")";
  }
  return out.str();
}

Json bivariate_json(const BivariatePolynomial& p) {
  Json terms = Json::array();
  for (const auto& [key, value] : p.terms()) {
    Json term = Json::object();
    term["j"] = key.first;
    term["k"] = key.second;
    term["coefficient"] = rational_json(value);
    terms.push_back(term);
  }
  return terms;
}

int run_oracle(const OracleArgs& args) {
  const ProblemSpec spec = parse_problem(read_file(args.file));
  const PolarisedFibration fibration = build_fibration(spec);
  const std::vector<FibrationDegeneration> degenerations =
      build_degenerations(spec, fibration);
  const FitOptions fit = build_fit_options(spec, args.max_k);
  Json all = Json::array();
  for (const auto& degeneration : degenerations) {
    const FittedCounts counts = fit_h_and_w(degeneration, fit);
    if (args.json) {
      Json entry = Json::object();
      entry["label"] = degeneration_label(degeneration);
      entry["h"] = bivariate_json(counts.h);
      entry["w"] = bivariate_json(counts.w);
      all.push_back(entry);
    } else {
      std::cout << "degeneration " << degeneration_label(degeneration) << ":\n";
      std::cout << "  h(j,k) = " << counts.h.str() << "\n";
      std::cout << "  w(j,k) = " << counts.w.str() << "\n";
    }
  }
  if (args.json) std::cout << all.dump(2) << "\n";
  return 0;
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"exact stability invariants of polarised fibrations built from split "
               "bundles over products of projective spaces"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand("analyze", "full analysis of a problem document");
  analyze->add_option("file", analyze_args.file, "problem document (JSON)")->required();
  analyze->add_flag("--json", analyze_args.json, "emit the report as JSON");
  analyze->add_flag("--oracle-check", analyze_args.oracle,
                    "verify every dual-route identity by honest enumeration");
  analyze->add_option("--max-k", analyze_args.max_k,
                      "enumeration cap for the counting oracle");
  analyze->add_flag("--fail-on-unstable", analyze_args.fail_on_unstable,
                    "exit with code 2 when an instability certificate is found");

  DfArgs df_args;
  CLI::App* df = app.add_subcommand("df", "invariants of a single test configuration");
  CLI::Option* nc = df->add_option("--normal-cone", df_args.normal_cone_degree,
                                   "point normal-cone family in the line of this degree");
  df->add_option("--base-dims", df_args.base_dims,
                 "projective factor dimensions, comma-separated");
  df->add_option("--polarization", df_args.polarization,
                 "base polarization coefficients, comma-separated (default: all 1)");
  df->add_option("--summands", df_args.summands,
                 "per-summand degree vectors: ';'-separated rows of comma-separated degrees");
  df->add_option("--weights", df_args.weights,
                 "one scaling weight per summand, comma-separated");
  df->add_option("--h-xi", df_args.h_xi, "coefficient of the tautological class (default 1)");
  df->add_option("--h-base", df_args.h_base,
                 "base part of the relatively ample class, comma-separated");
  df->add_flag("--json", df_args.json, "emit the invariants as JSON");

  OracleArgs oracle_args;
  CLI::App* oracle =
      app.add_subcommand("oracle", "dump the fitted section-count and weight polynomials");
  oracle->add_option("file", oracle_args.file, "problem document (JSON)")->required();
  oracle->add_flag("--json", oracle_args.json, "emit the polynomials as JSON");
  oracle->add_option("--max-k", oracle_args.max_k,
                     "enumeration cap for the counting oracle");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  df_args.has_normal_cone = nc->count() > 0;

  try {
    if (analyze->parsed()) return run_analyze(analyze_args);
    if (df->parsed()) return run_df(df_args);
    if (oracle->parsed()) return run_oracle(oracle_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace kfib::cli
