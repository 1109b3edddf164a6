#pragma once

// Problem specifications: a JSON document describing one run.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "ouq/admissible.hpp"
#include "ouq/error.hpp"
#include "ouq/minimax.hpp"
#include "ouq/ouq_solver.hpp"
#include "ouq/risk.hpp"

namespace ouq::cli {

enum class ProblemKind {
  OuqBound,
  Certify,
  MinimaxEstimate,
  ConfidenceInterval,
  CompareExperiments,
  MixEstimators,
  BrittlenessDemo,
};

const char* to_string(ProblemKind k) noexcept;

/// Estimator given by rule, resolved once the data alphabet is known.
struct EstimatorSpec {
  enum class Rule { SampleMean, Constant, Table };
  Rule rule = Rule::SampleMean;
  double shift = 0.0;  // added to the sample mean
  double value = 0.0;  // constant
  std::vector<double> table;
};

struct ExplicitCandidate {
  DiscreteMeasure measure;
  std::optional<std::vector<double>> function_values;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::OuqBound;
  nlohmann::json source;

  Interval domain;
  std::vector<double> grid;
  std::vector<MomentConstraint> constraints;
  std::optional<FunctionBand> band;
  std::optional<QuantityOfInterest> qoi;
  std::optional<double> epsilon;

  LossFunction loss;
  std::vector<DataMap> data_maps;
  std::optional<LatticeSpec> lattice;
  std::vector<ExplicitCandidate> candidates;
  std::vector<EstimatorSpec> estimators;
  std::optional<Prior> base_prior;
  std::optional<Prior> alternative_prior;

  SolverOptions solver;
  GameOptions game;
  std::size_t alphabet_cap = kDefaultAlphabetCap;

  AdmissibleSet admissible_set() const;
};

struct Diagnostic {
  std::string path;
  std::string message;
};

struct Validation {
  std::optional<ProblemSpec> spec;
  std::vector<Diagnostic> diagnostics;
  /// ParseError, SchemaError or InfeasibleProbe when `spec` is empty.
  ErrorKind error = ErrorKind::SchemaError;
};

/// Parses and schema-checks a specification. Never throws for bad input.
Validation validate(const std::string& text);

}  // namespace ouq::cli
