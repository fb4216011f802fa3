#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfib/invariants.hpp"

namespace kfib {

// The input document is malformed: not valid JSON, or a field has the wrong
// shape.  The message names the offending field by path.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// The document is well-formed but semantically inconsistent (e.g. a summand
// degree vector whose length disagrees with the number of base factors).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

enum class DegenerationMode { AllSubsums, Explicit };

// Inclusive ranges for the sampling grid used by the counting oracle.
struct GridSpec {
  long j_first = 0;
  long j_last = 0;
  long k_first = 0;
  long k_last = 0;
  bool operator==(const GridSpec&) const = default;
};

// Declarative description of one analysis problem: a split bundle over a
// product of projective spaces, a polarization, and a family of degenerations.
struct ProblemSpec {
  std::vector<int> base_dimensions;          // one entry per projective factor
  std::vector<long> polarization;            // ample coefficients, one per factor
  std::vector<std::vector<long>> summands;   // per-summand degree vectors
  bool H_is_xi = true;                       // fibration_H given as the symbol "xi"
  long H_xi = 1;                             // coefficient of the tautological class
  std::vector<long> H_base;                  // base part of H; empty when H_is_xi
  DegenerationMode mode = DegenerationMode::AllSubsums;
  std::vector<std::vector<long>> explicit_weights;  // used when mode == Explicit
  bool fano_check = false;
  bool oracle_check = false;
  std::optional<GridSpec> grid;
  bool operator==(const ProblemSpec&) const = default;
};

// parse_problem ∘ render_problem is the identity on valid specs.
ProblemSpec parse_problem(const std::string& text);
std::string render_problem(const ProblemSpec& spec);

struct RunOptions {
  long max_k = 24;  // enumeration cap for the counting oracle
};

// Construction helpers shared by run_problem and the front-end subcommands.
PolarisedFibration build_fibration(const ProblemSpec& spec);
std::vector<FibrationDegeneration> build_degenerations(const ProblemSpec& spec,
                                                       const PolarisedFibration& fibration);
FitOptions build_fit_options(const ProblemSpec& spec, long max_k);

// Builds the fibration and degeneration family the problem describes and
// classifies it.  Computation errors are propagated with the degeneration
// index in the message.
StabilityReport run_problem(const ProblemSpec& spec, const RunOptions& options = {});

enum class ReportFormat { Text, Json };

// Text format is a human-readable summary; JSON is stable-keyed with every
// rational serialized as {"num", "den"}.
std::string render_report(const StabilityReport& report, ReportFormat format);

}  // namespace kfib
