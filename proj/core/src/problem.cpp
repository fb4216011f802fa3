#include "kfib/problem.hpp"

#include <json.hpp>

#include <limits>
#include <sstream>

namespace kfib {

namespace {

using Json = nlohmann::ordered_json;

std::string joined_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const Json& require_object(const Json& value, const std::string& path) {
  if (!value.is_object())
    throw ParseError(path.empty() ? "root: expected a JSON object"
                                  : path + ": expected an object");
  return value;
}

void reject_unknown_keys(const Json& obj, const std::string& path,
                         const std::vector<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto& key : allowed)
      if (item.key() == key) { known = true; break; }
    if (!known)
      throw ParseError(joined_path(path, item.key()) + ": unknown field");
  }
}

const Json& require_field(const Json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(joined_path(path, key) + ": missing required field");
  return *it;
}

long get_integer(const Json& value, const std::string& path) {
  if (!value.is_number_integer())
    throw ParseError(path + ": expected an integer");
  return value.get<long>();
}

bool get_boolean(const Json& value, const std::string& path) {
  if (!value.is_boolean()) throw ParseError(path + ": expected a boolean");
  return value.get<bool>();
}

std::vector<long> get_integer_array(const Json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path + ": expected an array");
  std::vector<long> out;
  for (size_t i = 0; i < value.size(); ++i)
    out.push_back(get_integer(value[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void parse_base(const Json& value, ProblemSpec& spec) {
  const Json& base = require_object(value, "base");
  reject_unknown_keys(base, "base", {"dimensions", "polarization"});
  const std::vector<long> dims =
      get_integer_array(require_field(base, "base", "dimensions"), "base.dimensions");
  if (dims.empty()) throw ValidationError("base.dimensions: at least one factor is required");
  long total = 0;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 0)
      throw ValidationError("base.dimensions[" + std::to_string(i) +
                            "]: factor dimension must be non-negative");
    total += dims[i];
  }
  if (total < 1)
    throw ValidationError("base.dimensions: total base dimension must be positive");
  for (long d : dims) spec.base_dimensions.push_back(static_cast<int>(d));

  spec.polarization =
      get_integer_array(require_field(base, "base", "polarization"), "base.polarization");
  if (spec.polarization.size() != dims.size())
    throw ValidationError("base.polarization: expected " + std::to_string(dims.size()) +
                          " coefficients, one per factor");
  for (size_t i = 0; i < spec.polarization.size(); ++i)
    if (spec.polarization[i] < 1)
      throw ValidationError("base.polarization[" + std::to_string(i) +
                            "]: ample coefficients must be positive");
}

void parse_bundle(const Json& value, ProblemSpec& spec) {
  const Json& bundle = require_object(value, "bundle");
  reject_unknown_keys(bundle, "bundle", {"summands"});
  const Json& summands = require_field(bundle, "bundle", "summands");
  if (!summands.is_array() || summands.empty())
    throw ParseError("bundle.summands: expected a non-empty array");
  for (size_t i = 0; i < summands.size(); ++i) {
    const std::string path = "bundle.summands[" + std::to_string(i) + "]";
    std::vector<long> row = get_integer_array(summands[i], path);
    if (row.size() != spec.base_dimensions.size())
      throw ValidationError(path + ": expected " +
                            std::to_string(spec.base_dimensions.size()) +
                            " degrees, one per factor");
    spec.summands.push_back(std::move(row));
  }
}

void parse_fibration_H(const Json& value, ProblemSpec& spec) {
  if (value.is_string()) {
    if (value.get<std::string>() != "xi")
      throw ParseError("fibration_H: unknown form '" + value.get<std::string>() + "'");
    spec.H_is_xi = true;
    spec.H_xi = 1;
    return;
  }
  if (!value.is_object())
    throw ParseError("fibration_H: expected the string \"xi\" or an object");
  reject_unknown_keys(value, "fibration_H", {"xi", "base"});
  spec.H_is_xi = false;
  spec.H_xi = get_integer(require_field(value, "fibration_H", "xi"), "fibration_H.xi");
  if (spec.H_xi < 1)
    throw ValidationError("fibration_H.xi: the tautological coefficient must be positive");
  spec.H_base =
      get_integer_array(require_field(value, "fibration_H", "base"), "fibration_H.base");
  if (spec.H_base.size() != spec.base_dimensions.size())
    throw ValidationError("fibration_H.base: expected " +
                          std::to_string(spec.base_dimensions.size()) +
                          " coefficients, one per factor");
}

void parse_degenerations(const Json& value, ProblemSpec& spec) {
  const Json& deg = require_object(value, "degenerations");
  reject_unknown_keys(deg, "degenerations", {"mode", "weights"});
  const Json& mode = require_field(deg, "degenerations", "mode");
  if (!mode.is_string()) throw ParseError("degenerations.mode: expected a string");
  const std::string name = mode.get<std::string>();
  if (name == "all_subsums") {
    spec.mode = DegenerationMode::AllSubsums;
    if (deg.contains("weights"))
      throw ParseError("degenerations.weights: not allowed with mode \"all_subsums\"");
    return;
  }
  if (name != "explicit")
    throw ParseError("degenerations.mode: unknown mode '" + name + "'");
  spec.mode = DegenerationMode::Explicit;
  const Json& weights = require_field(deg, "degenerations", "weights");
  if (!weights.is_array() || weights.empty())
    throw ParseError("degenerations.weights: expected a non-empty array");
  for (size_t i = 0; i < weights.size(); ++i) {
    const std::string path = "degenerations.weights[" + std::to_string(i) + "]";
    std::vector<long> row = get_integer_array(weights[i], path);
    if (row.size() != spec.summands.size())
      throw ValidationError(path + ": expected " + std::to_string(spec.summands.size()) +
                            " weights, one per summand");
    spec.explicit_weights.push_back(std::move(row));
  }
}

GridSpec parse_grid(const Json& value) {
  const Json& grid = require_object(value, "grid");
  reject_unknown_keys(grid, "grid", {"j_range", "k_range"});
  auto read_range = [&](const std::string& key, long& first, long& last) {
    const std::string path = "grid." + key;
    const std::vector<long> pair = get_integer_array(require_field(grid, "grid", key), path);
    if (pair.size() != 2 || pair[0] > pair[1])
      throw ValidationError(path + ": expected [first, last] with first <= last");
    first = pair[0];
    last = pair[1];
  };
  GridSpec out;
  read_range("j_range", out.j_first, out.j_last);
  read_range("k_range", out.k_first, out.k_last);
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

Json poly_json(const Poly& p) {
  Json coeffs = Json::array();
  for (int i = 0; i <= (p.degree() < 0 ? -1 : p.degree()); ++i)
    coeffs.push_back(rational_json(p.coefficient(i)));
  return coeffs;
}

Json record_json(const DegenerationRecord& rec) {
  Json out = Json::object();
  out["label"] = rec.label;
  out["weights"] = rec.weights;
  if (rec.subsheaf) out["subsheaf"] = *rec.subsheaf;
  if (rec.subsheaf_slope) out["subsheaf_slope"] = rational_json(*rec.subsheaf_slope);
  out["W0"] = rational_json(rec.df.W0);
  out["W1"] = rational_json(rec.df.W1);
  Json lower = Json::array();
  for (const Rational& c : rec.df.lower_terms) lower.push_back(rational_json(c));
  out["lower_terms"] = lower;
  out["df_polynomial"] = poly_json(rec.df.polynomial_part);
  out["w0_fibre_route"] = rational_json(rec.w0_fibre_route);
  Json audit = Json::object();
  audit["W0_closed"] = rational_json(rec.audit.W0_closed);
  audit["W1_closed"] = rational_json(rec.audit.W1_closed);
  audit["C1"] = rational_json(rec.audit.C1);
  audit["C2"] = rational_json(rec.audit.C2);
  audit["C3"] = rational_json(rec.audit.C3);
  audit["C4"] = rational_json(rec.audit.C4);
  audit["W0_matches"] = rec.audit.W0_matches;
  audit["W1_matches"] = rec.audit.W1_matches;
  out["closed_form"] = audit;
  out["minimum_norm"] = rational_json(rec.minimum_norm);
  Json sup = Json::object();
  sup["c0"] = rational_json(rec.sup_norm.c0);
  sup["c1"] = rational_json(rec.sup_norm.c1);
  out["sup_norm"] = sup;
  Json chow = Json::object();
  chow["intersection"] = rational_json(rec.chow.intersection_number);
  chow["fitted_b00"] = rational_json(rec.chow.fitted_b00);
  chow["ratio"] = rec.chow.ratio ? rational_json(*rec.chow.ratio) : Json(nullptr);
  out["chow"] = chow;
  if (rec.fano) {
    Json fano = Json::object();
    fano["gamma"] = rational_json(rec.fano->gamma);
    fano["W0_fano"] = rational_json(rec.fano->W0_fano);
    fano["W1_fano"] = rational_json(rec.fano->W1_fano);
    out["fano"] = fano;
  }
  out["verdict"] = verdict_name(rec.verdict);
  out["product_detected"] = rec.product_detected;
  out["consistency_violation"] = rec.consistency_violation;
  if (rec.certificate) out["certificate"] = *rec.certificate;
  return out;
}

std::string render_text(const StabilityReport& report) {
  std::ostringstream out;
  out << "polarised fibration: base dimension n = " << report.n << ", fibre dimension m = "
      << report.m << ", rank = " << report.rank << "\n";
  out << "bundle slope: " << report.bundle_slope.str() << "\n";
  out << "summand slopes:";
  for (const Rational& s : report.summand_slopes) out << " " << s.str();
  out << "\n";
  if (report.gamma) out << "gamma: " << report.gamma->str() << "\n";
  for (const DegenerationRecord& rec : report.records) {
    out << "degeneration " << rec.label << ": W0 = " << rec.df.W0.str()
        << ", W1 = " << rec.df.W1.str() << ", minimum norm = " << rec.minimum_norm.str()
        << ", sup norm c0 = " << rec.sup_norm.c0.str() << ", c1 = " << rec.sup_norm.c1.str();
    if (rec.chow.ratio) out << ", chow ratio = " << rec.chow.ratio->str();
    out << ", verdict = " << verdict_name(rec.verdict) << "\n";
    if (rec.certificate) out << "  certificate: " << *rec.certificate << "\n";
  }
  out << "summary: " << report.summary << "\n";
  return out.str();
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  require_object(doc, "");
  reject_unknown_keys(doc, "", {"base", "bundle", "fibration_H", "degenerations",
                                "fano_check", "oracle_check", "grid"});
  ProblemSpec spec;
  parse_base(require_field(doc, "", "base"), spec);
  parse_bundle(require_field(doc, "", "bundle"), spec);
  if (doc.contains("fibration_H")) parse_fibration_H(doc["fibration_H"], spec);
  parse_degenerations(require_field(doc, "", "degenerations"), spec);
  if (doc.contains("fano_check"))
    spec.fano_check = get_boolean(doc["fano_check"], "fano_check");
  if (doc.contains("oracle_check"))
    spec.oracle_check = get_boolean(doc["oracle_check"], "oracle_check");
  if (doc.contains("grid")) spec.grid = parse_grid(doc["grid"]);
  return spec;
}

std::string render_problem(const ProblemSpec& spec) {
  Json doc = Json::object();
  Json base = Json::object();
  base["dimensions"] = spec.base_dimensions;
  base["polarization"] = spec.polarization;
  doc["base"] = base;
  Json bundle = Json::object();
  bundle["summands"] = spec.summands;
  doc["bundle"] = bundle;
  if (spec.H_is_xi) {
    doc["fibration_H"] = "xi";
  } else {
    Json h = Json::object();
    h["xi"] = spec.H_xi;
    h["base"] = spec.H_base;
    doc["fibration_H"] = h;
  }
  Json deg = Json::object();
  if (spec.mode == DegenerationMode::AllSubsums) {
    deg["mode"] = "all_subsums";
  } else {
    deg["mode"] = "explicit";
    deg["weights"] = spec.explicit_weights;
  }
  doc["degenerations"] = deg;
  doc["fano_check"] = spec.fano_check;
  doc["oracle_check"] = spec.oracle_check;
  if (spec.grid) {
    Json grid = Json::object();
    grid["j_range"] = std::vector<long>{spec.grid->j_first, spec.grid->j_last};
    grid["k_range"] = std::vector<long>{spec.grid->k_first, spec.grid->k_last};
    doc["grid"] = grid;
  }
  return doc.dump(2);
}

PolarisedFibration build_fibration(const ProblemSpec& spec) {
  const ModelPtr base = build_projective_product(spec.base_dimensions);
  const std::vector<std::string> generators = base->generator_names();
  DivisorClass L;
  for (size_t i = 0; i < spec.polarization.size(); ++i)
    L += DivisorClass(generators[i], Rational(spec.polarization[i]));

  std::vector<std::vector<Rational>> degrees;
  for (const auto& row : spec.summands) {
    std::vector<Rational> converted;
    for (long d : row) converted.emplace_back(d);
    degrees.push_back(std::move(converted));
  }
  const SplitBundle bundle = make_split_bundle(base, degrees);

  DivisorClass H_base;
  if (!spec.H_is_xi)
    for (size_t i = 0; i < spec.H_base.size(); ++i)
      H_base += DivisorClass(generators[i], Rational(spec.H_base[i]));
  return make_projectivised_fibration(bundle, L, static_cast<int>(spec.H_xi), H_base);
}

std::vector<FibrationDegeneration> build_degenerations(const ProblemSpec& spec,
                                                       const PolarisedFibration& fibration) {
  if (spec.mode == DegenerationMode::AllSubsums)
    return all_subsheaf_degenerations(fibration);
  std::vector<FibrationDegeneration> degenerations;
  for (const auto& weights : spec.explicit_weights)
    degenerations.push_back(make_weight_degeneration(fibration, weights));
  return degenerations;
}

FitOptions build_fit_options(const ProblemSpec& spec, long max_k) {
  FitOptions fit;
  fit.max_k = max_k;
  if (spec.grid) {
    std::vector<long> j_values, k_values;
    for (long j = spec.grid->j_first; j <= spec.grid->j_last; ++j) j_values.push_back(j);
    for (long k = spec.grid->k_first; k <= spec.grid->k_last; ++k) k_values.push_back(k);
    fit.j_values = std::move(j_values);
    fit.k_values = std::move(k_values);
  }
  return fit;
}

StabilityReport run_problem(const ProblemSpec& spec, const RunOptions& options) {
  const PolarisedFibration fibration = build_fibration(spec);
  const std::vector<FibrationDegeneration> degenerations =
      build_degenerations(spec, fibration);
  ClassifyOptions copts;
  copts.fano_check = spec.fano_check;
  copts.oracle_check = spec.oracle_check;
  copts.fit = build_fit_options(spec, options.max_k);
  return classify(fibration, degenerations, copts);
}

std::string render_report(const StabilityReport& report, ReportFormat format) {
  if (format == ReportFormat::Text) return render_text(report);
  Json doc = Json::object();
  doc["n"] = report.n;
  doc["m"] = report.m;
  doc["rank"] = report.rank;
  doc["bundle_slope"] = rational_json(report.bundle_slope);
  Json slopes = Json::array();
  for (const Rational& s : report.summand_slopes) slopes.push_back(rational_json(s));
  doc["summand_slopes"] = slopes;
  if (report.gamma) doc["gamma"] = rational_json(*report.gamma);
  Json records = Json::array();
  for (const DegenerationRecord& rec : report.records) records.push_back(record_json(rec));
  doc["degenerations"] = records;
  doc["unstable"] = report.unstable;
  doc["certificates"] = report.certificates;
  doc["summary"] = report.summary;
  return doc.dump(2);
}

}  // namespace kfib
