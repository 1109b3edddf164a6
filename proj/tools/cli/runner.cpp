#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ouq/brittleness.hpp"
#include "ouq/confidence.hpp"
#include "ouq/error.hpp"
#include "ouq/minimax.hpp"
#include "ouq/ouq_solver.hpp"

namespace ouq::cli {

using nlohmann::json;

void apply(const Overrides& o, ProblemSpec& spec) {
  if (o.seed) spec.solver.seed = *o.seed;
  if (o.threads) spec.solver.threads = *o.threads;
  if (o.restarts) spec.solver.restarts = *o.restarts;
  if (o.tol) spec.solver.tol = *o.tol;
  if (o.max_iters) {
    spec.solver.max_iters = *o.max_iters;
    spec.game.max_iters = *o.max_iters;
  }
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json measure_json(const DiscreteMeasure& mu, const std::optional<std::vector<double>>& fv) {
  json j{{"points", std::vector<double>(mu.support().begin(), mu.support().end())},
         {"weights", std::vector<double>(mu.weights().begin(), mu.weights().end())}};
  if (fv) j["function_values"] = *fv;
  return j;
}

json bound_json(const BoundResult& b) {
  return {{"value", b.value},
          {"extremizer", measure_json(b.extremizer, b.function_values)},
          {"status", b.status == SolveStatus::Converged ? "converged" : "max_iter"},
          {"iterations", b.trace.iterations},
          {"restarts", b.trace.restarts}};
}

void restart_rows(std::ostringstream& out, const char* side, const BoundResult& b) {
  for (const RestartTrace& t : b.trace.per_restart)
    out << side << ',' << t.restart << ',' << t.iterations << ',' << fmt(t.best_value) << ','
        << (t.converged ? 1 : 0) << '\n';
}

std::string restarts_csv(const BoundResult* lower, const BoundResult* upper) {
  std::ostringstream out;
  out << "bound,restart,iterations,best_value,converged\n";
  if (lower) restart_rows(out, "lower", *lower);
  if (upper) restart_rows(out, "upper", *upper);
  return out.str();
}

std::string trajectory_csv(const std::vector<std::pair<std::string, const GameSolution*>>& games) {
  std::ostringstream out;
  out << "experiment,iteration,value\n";
  for (const auto& [name, g] : games)
    for (std::size_t i = 0; i < g->trajectory.size(); ++i) out << name << ',' << i << ',' << fmt(g->trajectory[i]) << '\n';
  return out.str();
}

json options_json(const ProblemSpec& s) {
  json solver{{"seed", s.solver.seed},         {"restarts", s.solver.restarts},
              {"tol", s.solver.tol},           {"max_iters", s.solver.max_iters},
              {"threads", s.solver.threads},   {"stall_window", s.solver.stall_window},
              {"alphabet_cap", s.alphabet_cap}};
  if (s.solver.atoms) solver["atoms"] = *s.solver.atoms;
  json game{{"max_iters", s.game.max_iters},
            {"gradient_tol", s.game.gradient_tol},
            {"certificate_tol", s.game.certificate_tol},
            {"oracle_tol", s.game.oracle_tol},
            {"max_oracle_rounds", s.game.max_oracle_rounds},
            {"decision_grid", s.game.decision_grid}};
  return {{"solver", solver}, {"game", game}};
}

std::vector<Candidate> build_candidates(const ProblemSpec& s, const DataMap& map) {
  std::vector<Candidate> out;
  if (s.lattice) {
    for (AdmissibleCandidate& c : enumerate_candidates(s.admissible_set(), *s.lattice))
      out.push_back(make_candidate(std::move(c.measure), *s.qoi, map, std::move(c.function_values)));
  } else {
    for (const ExplicitCandidate& c : s.candidates) out.push_back(make_candidate(c.measure, *s.qoi, map, c.function_values));
  }
  return out;
}

json symbols_json(const CandidateSet& set) {
  json a = json::array();
  for (const DataSymbol& d : set.alphabet()) a.push_back(d);
  return a;
}

json candidates_json(const CandidateSet& set) {
  json c = json::array();
  for (const Candidate& k : set.candidates())
    c.push_back({{"phi", k.phi_value}, {"measure", measure_json(k.measure, k.function_values)}});
  return c;
}

json game_json(const GameSolution& g, const CandidateSet& set, const LossFunction& loss) {
  json j{{"minimax_value", g.minimax_value},
         {"maximin_value", g.maximin_value},
         {"duality_gap", g.duality_gap},
         {"iterations", g.iterations},
         {"status", g.status == GameStatus::Converged ? "converged" : "non_converged"},
         {"least_favorable_prior", g.least_favorable_prior.weights}};
  if (g.estimator.is_randomized()) {
    json support = json::array();
    for (std::size_t i = 0; i < g.support_estimators.size(); ++i)
      support.push_back({{"weight", g.support_weights[i]}, {"values", g.support_estimators[i].values()}});
    j["estimator"] = {{"randomized", true}, {"mean_values", g.estimator.values()}, {"support", support}};
  } else {
    j["estimator"] = {{"randomized", false}, {"values", g.estimator.values()}};
  }
  j["risk_profile"] = risk_profile(g.estimator, set, loss);
  return j;
}

Estimator resolve(const EstimatorSpec& e, const CandidateSet& set) {
  std::vector<double> v;
  v.reserve(set.alphabet_size());
  switch (e.rule) {
    case EstimatorSpec::Rule::SampleMean:
      for (const DataSymbol& d : set.alphabet())
        v.push_back(std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size()) + e.shift);
      break;
    case EstimatorSpec::Rule::Constant:
      v.assign(set.alphabet_size(), e.value);
      break;
    case EstimatorSpec::Rule::Table:
      v = e.table;
      break;
  }
  return Estimator::deterministic(std::move(v));
}

}  // namespace

RunReport run(const ProblemSpec& s, ReportFormat format) {
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  json results;
  const bool curves = format == ReportFormat::Csv;
  auto best_found = [&rep] { rep.status = RunStatus::BestFound; };

  switch (s.kind) {
    case ProblemKind::OuqBound: {
      const AdmissibleSet a = s.admissible_set();
      const BoundResult lo = lower_bound(a, *s.qoi, s.solver);
      const BoundResult hi = upper_bound(a, *s.qoi, s.solver);
      if (lo.status != SolveStatus::Converged || hi.status != SolveStatus::Converged) best_found();
      results = {{"lower", bound_json(lo)}, {"upper", bound_json(hi)}};
      if (curves) rep.curves["restarts.csv"] = restarts_csv(&lo, &hi);
      break;
    }
    case ProblemKind::Certify: {
      const CertifyResult c = certify(s.admissible_set(), *s.qoi, *s.epsilon, s.solver);
      if (c.lower.status != SolveStatus::Converged || c.upper.status != SolveStatus::Converged) best_found();
      results = {{"verdict", to_string(c.verdict)},
                 {"epsilon", *s.epsilon},
                 {"lower", bound_json(c.lower)},
                 {"upper", bound_json(c.upper)}};
      if (curves) rep.curves["restarts.csv"] = restarts_csv(&c.lower, &c.upper);
      break;
    }
    case ProblemKind::MinimaxEstimate: {
      const CandidateSet set(build_candidates(s, s.data_maps.front()));
      const GameSolution g = minimax_estimator(set, s.loss, s.game);
      if (g.status != GameStatus::Converged) best_found();
      results = {{"loss", s.loss.kind == LossFunction::Kind::Squared ? "squared" : "threshold"},
                 {"candidates", candidates_json(set)},
                 {"alphabet", symbols_json(set)},
                 {"game", game_json(g, set, s.loss)}};
      if (s.loss.kind == LossFunction::Kind::Threshold) results["gamma"] = s.loss.gamma;
      if (curves) rep.curves["prior_ascent.csv"] = trajectory_csv({{"game", &g}});
      break;
    }
    case ProblemKind::ConfidenceInterval: {
      const CandidateSet set(build_candidates(s, s.data_maps.front()));
      const ConfidenceResult c = optimal_confidence_interval(*s.epsilon, set, s.game);
      if (!c.game_converged) best_found();
      json intervals = json::array();
      for (std::size_t d = 0; d < set.alphabet_size(); ++d) {
        const auto [lo, hi] = c.interval(d);
        intervals.push_back({lo, hi});
      }
      results = {{"epsilon", c.epsilon},
                 {"gamma", c.gamma_eps},
                 {"phi_range", {set.phi_min(), set.phi_max()}},
                 {"half_range", 0.5 * (set.phi_max() - set.phi_min())},
                 {"range_midpoint", 0.5 * (set.phi_min() + set.phi_max())},
                 {"alphabet", symbols_json(set)},
                 {"estimator", c.estimator.values()},
                 {"intervals", intervals},
                 {"worst_case_miss", c.rounded_value},
                 {"game_value", c.game_value_at_gamma},
                 {"game_converged", c.game_converged},
                 {"evaluations", c.bisection_trace.size()}};
      if (curves) rep.curves["gamma_curve.csv"] = curve_csv(c);
      break;
    }
    case ProblemKind::CompareExperiments: {
      const std::vector<Candidate> cands = build_candidates(s, s.data_maps[0]);
      const ExperimentComparison c = compare_experiments(s.data_maps[0], s.data_maps[1], cands, s.loss, s.game);
      if (c.first.status != GameStatus::Converged || c.second.status != GameStatus::Converged) best_found();
      auto summary = [](const GameSolution& g) {
        return json{{"minimax_value", g.minimax_value},
                    {"maximin_value", g.maximin_value},
                    {"duality_gap", g.duality_gap},
                    {"status", g.status == GameStatus::Converged ? "converged" : "non_converged"},
                    {"least_favorable_prior", g.least_favorable_prior.weights}};
      };
      results = {{"preference", to_string(c.preference)}, {"first", summary(c.first)}, {"second", summary(c.second)}};
      if (curves) rep.curves["prior_ascent.csv"] = trajectory_csv({{"first", &c.first}, {"second", &c.second}});
      break;
    }
    case ProblemKind::MixEstimators: {
      const CandidateSet set(build_candidates(s, s.data_maps.front()));
      std::vector<Estimator> thetas;
      for (const EstimatorSpec& e : s.estimators) thetas.push_back(resolve(e, set));
      const MixResult m = mix_estimators(thetas, set, s.loss);
      results = {{"alpha", m.alpha},
                 {"value", m.value},
                 {"vertex_values", m.vertex_values},
                 {"best_vertex", *std::min_element(m.vertex_values.begin(), m.vertex_values.end())}};
      break;
    }
    case ProblemKind::BrittlenessDemo: {
      const CandidateSet set(build_candidates(s, s.data_maps.front()));
      const SandwichReport r = sandwich_check(*s.base_prior, *s.alternative_prior, set);
      json atoms = json::array();
      for (std::size_t i = 0; i < r.gap.atoms.size(); ++i)
        atoms.push_back({{"symbol", set.alphabet()[r.gap.atoms[i]]},
                         {"mass", r.gap.atom_mass[i]},
                         {"worst_value", r.gap.worst_values[i]},
                         {"best_value", r.gap.best_values[i]}});
      results = {{"sup_gap", r.gap.sup_gap},
                 {"ratio", r.gap.ratio},
                 {"null_mass", r.gap.null_mass},
                 {"phi_range", {set.phi_min(), set.phi_max()}},
                 {"null_atoms", atoms},
                 {"lower_bound_holds", r.lower_ok},
                 {"upper_bound_holds", r.upper_ok},
                 {"worst_version_risk", r.worst_risk},
                 {"best_version_risk", r.best_risk},
                 {"reproduced_gap", r.reproduced_gap}};
      try {
        const MidpointComparison m = midpoint_comparison(*s.base_prior, *s.alternative_prior, set);
        results["midpoint_comparison"] = {{"midpoint_risk", m.midpoint_risk}, {"holds", m.holds}};
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotOrthogonal) throw;
        results["midpoint_comparison"] = nullptr;
      }
      break;
    }
  }

  rep.document = {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                  {"kind", to_string(s.kind)},
                  {"seed", s.solver.seed},
                  {"spec", s.source},
                  {"options", options_json(s)},
                  {"status", rep.status == RunStatus::Converged ? "converged" : "best_found"},
                  {"results", results}};
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string report_text(const RunReport& report) { return report.document.dump(2) + "\n"; }

void write_report(const RunReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(out_dir / name, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorKind::DomainError, "cli", "cannot write " + (out_dir / name).string());
  };
  write("report.json", report_text(report));
  write("timing.json", json{{"wall_seconds", report.wall_seconds}}.dump(2) + "\n");
  for (const auto& [name, text] : report.curves) write(name, text);
}

}  // namespace ouq::cli
