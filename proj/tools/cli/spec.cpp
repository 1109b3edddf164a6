#include "spec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <string_view>
#include <utility>

namespace ouq::cli {

using nlohmann::json;

const char* to_string(ProblemKind k) noexcept {
  switch (k) {
    case ProblemKind::OuqBound: return "ouq_bound";
    case ProblemKind::Certify: return "certify";
    case ProblemKind::MinimaxEstimate: return "minimax_estimate";
    case ProblemKind::ConfidenceInterval: return "confidence_interval";
    case ProblemKind::CompareExperiments: return "compare_experiments";
    case ProblemKind::MixEstimators: return "mix_estimators";
    case ProblemKind::BrittlenessDemo: return "brittleness_demo";
  }
  return "unknown";
}

AdmissibleSet ProblemSpec::admissible_set() const { return AdmissibleSet(domain, grid, constraints, band); }

namespace {

std::optional<ProblemKind> parse_kind(std::string_view s) {
  for (ProblemKind k : {ProblemKind::OuqBound, ProblemKind::Certify, ProblemKind::MinimaxEstimate,
                        ProblemKind::ConfidenceInterval, ProblemKind::CompareExperiments,
                        ProblemKind::MixEstimators, ProblemKind::BrittlenessDemo}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Collects path-addressed diagnostics while reading the document.
class Reader {
 public:
  std::vector<Diagnostic> diags;

  void fail(const std::string& path, std::string message) { diags.push_back({path, std::move(message)}); }

  bool object(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) {
      fail(path, "object expected");
      return false;
    }
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (auto key : keys) known = known || key == k;
      if (!known) fail(child(path, k), "unknown key");
    }
    return true;
  }

  // JSON number or decimal string.
  std::optional<double> number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      const std::string& s = j.get_ref<const std::string&>();
      double x = 0.0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec == std::errc() && p == s.data() + s.size() && std::isfinite(x)) return x;
    }
    fail(path, "number expected");
    return std::nullopt;
  }

  std::optional<double> positive(const json& j, const std::string& path, const char* what = "positive value required") {
    auto x = number(j, path);
    if (x && !(*x > 0.0)) {
      fail(path, what);
      return std::nullopt;
    }
    return x;
  }

  std::optional<long long> integer(const json& j, const std::string& path, long long min_value) {
    std::optional<long long> out;
    if (j.is_number_integer()) {
      out = j.get<long long>();
    } else if (j.is_string()) {
      const std::string& s = j.get_ref<const std::string&>();
      long long x = 0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec == std::errc() && p == s.data() + s.size()) out = x;
    }
    if (!out) {
      fail(path, "integer expected");
    } else if (*out < min_value) {
      fail(path, "integer >= " + std::to_string(min_value) + " required");
      out.reset();
    }
    return out;
  }

  std::optional<std::uint64_t> unsigned64(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_string()) {
      const std::string& s = j.get_ref<const std::string&>();
      std::uint64_t x = 0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec == std::errc() && p == s.data() + s.size() && !s.empty()) return x;
    }
    fail(path, "unsigned integer expected");
    return std::nullopt;
  }

  std::optional<std::vector<double>> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) {
      fail(path, "array expected");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto x = number(j[i], index(path, i));
      ok = ok && x.has_value();
      if (x) out.push_back(*x);
    }
    if (!ok) return std::nullopt;
    return out;
  }
};

struct Context {
  Interval domain;
  std::vector<double> grid;
  std::set<long long> grid_keys;
};

// "identity" or a list of [x, value] pairs whose knots are grid points and span the domain.
std::optional<TabulatedFunction> parse_function(Reader& r, const json& j, const std::string& path, const Context& ctx) {
  if (j.is_string()) {
    if (j.get_ref<const std::string&>() == "identity") return TabulatedFunction::identity(ctx.domain);
    r.fail(path, "unknown function \"" + j.get<std::string>() + "\"");
    return std::nullopt;
  }
  if (!j.is_array() || j.size() < 2) {
    r.fail(path, "\"identity\" or at least two [x, value] pairs expected");
    return std::nullopt;
  }
  std::vector<double> xs, ys;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = index(path, i);
    if (!j[i].is_array() || j[i].size() != 2) {
      r.fail(p, "[x, value] pair expected");
      ok = false;
      continue;
    }
    auto x = r.number(j[i][0], p + "[0]");
    auto y = r.number(j[i][1], p + "[1]");
    if (!x || !y) {
      ok = false;
      continue;
    }
    if (!ctx.grid_keys.empty() && !ctx.grid_keys.count(canonical_key(*x))) {
      r.fail(p, "knot is not a grid point");
      ok = false;
    }
    if (!xs.empty() && *x <= xs.back()) {
      r.fail(p, "knots must increase");
      ok = false;
    }
    xs.push_back(*x);
    ys.push_back(*y);
  }
  if (!ok) return std::nullopt;
  if (xs.front() > ctx.domain.lo || xs.back() < ctx.domain.hi) {
    r.fail(path, "function must be tabulated over the whole domain");
    return std::nullopt;
  }
  return TabulatedFunction(std::move(xs), std::move(ys));
}

std::optional<DataMap> parse_data_map(Reader& r, const json& j, const std::string& path, const Context& ctx,
                                      std::size_t cap) {
  if (!r.object(j, path, {"kind", "n", "g"})) return std::nullopt;
  if (!j.contains("kind") || !j["kind"].is_string()) {
    r.fail(child(path, "kind"), "one of iid, coarse, none required");
    return std::nullopt;
  }
  const std::string kind = j["kind"];
  if (kind == "none") return DataMap::no_data();
  if (kind != "iid" && kind != "coarse") {
    r.fail(child(path, "kind"), "one of iid, coarse, none required");
    return std::nullopt;
  }
  if (!j.contains("n")) {
    r.fail(child(path, "n"), "required");
    return std::nullopt;
  }
  auto n = r.integer(j["n"], child(path, "n"), 1);
  if (!n) return std::nullopt;
  if (*n > std::numeric_limits<int>::max()) {
    r.fail(child(path, "n"), "sample size too large");
    return std::nullopt;
  }
  if (kind == "iid") return DataMap::iid(static_cast<int>(*n), cap);
  if (!j.contains("g")) {
    r.fail(child(path, "g"), "required for coarse observations");
    return std::nullopt;
  }
  auto g = parse_function(r, j["g"], child(path, "g"), ctx);
  if (!g) return std::nullopt;
  return DataMap::coarse(std::move(*g), static_cast<int>(*n), cap);
}

std::optional<Prior> parse_prior(Reader& r, const json& j, const std::string& path) {
  auto w = r.numbers(j, path);
  if (!w) return std::nullopt;
  try {
    return Prior(std::move(*w));
  } catch (const Error& e) {
    r.fail(path, e.what());
    return std::nullopt;
  }
}

void parse_solver(Reader& r, const json& j, ProblemSpec& s) {
  const std::string path = "solver";
  if (!r.object(j, path, {"seed", "restarts", "tol", "max_iters", "threads", "atoms", "stall_window", "alphabet_cap"}))
    return;
  if (j.contains("seed"))
    if (auto v = r.unsigned64(j["seed"], child(path, "seed"))) s.solver.seed = *v;
  if (j.contains("restarts"))
    if (auto v = r.integer(j["restarts"], child(path, "restarts"), 1)) s.solver.restarts = static_cast<int>(*v);
  if (j.contains("tol"))
    if (auto v = r.positive(j["tol"], child(path, "tol"))) s.solver.tol = *v;
  if (j.contains("max_iters"))
    if (auto v = r.integer(j["max_iters"], child(path, "max_iters"), 1)) s.solver.max_iters = static_cast<int>(*v);
  if (j.contains("threads"))
    if (auto v = r.integer(j["threads"], child(path, "threads"), 1)) s.solver.threads = static_cast<int>(*v);
  if (j.contains("atoms"))
    if (auto v = r.integer(j["atoms"], child(path, "atoms"), 1)) s.solver.atoms = static_cast<std::size_t>(*v);
  if (j.contains("stall_window"))
    if (auto v = r.integer(j["stall_window"], child(path, "stall_window"), 1))
      s.solver.stall_window = static_cast<int>(*v);
  if (j.contains("alphabet_cap"))
    if (auto v = r.integer(j["alphabet_cap"], child(path, "alphabet_cap"), 1))
      s.alphabet_cap = static_cast<std::size_t>(*v);
}

void parse_game(Reader& r, const json& j, ProblemSpec& s) {
  const std::string path = "game";
  if (!r.object(j, path, {"max_iters", "gradient_tol", "certificate_tol", "oracle_tol", "max_oracle_rounds",
                          "decision_grid"}))
    return;
  if (j.contains("max_iters"))
    if (auto v = r.integer(j["max_iters"], child(path, "max_iters"), 1)) s.game.max_iters = static_cast<int>(*v);
  if (j.contains("gradient_tol"))
    if (auto v = r.positive(j["gradient_tol"], child(path, "gradient_tol"))) s.game.gradient_tol = *v;
  if (j.contains("certificate_tol"))
    if (auto v = r.positive(j["certificate_tol"], child(path, "certificate_tol"))) s.game.certificate_tol = *v;
  if (j.contains("oracle_tol"))
    if (auto v = r.positive(j["oracle_tol"], child(path, "oracle_tol"))) s.game.oracle_tol = *v;
  if (j.contains("max_oracle_rounds"))
    if (auto v = r.integer(j["max_oracle_rounds"], child(path, "max_oracle_rounds"), 1))
      s.game.max_oracle_rounds = static_cast<int>(*v);
  if (j.contains("decision_grid"))
    if (auto v = r.integer(j["decision_grid"], child(path, "decision_grid"), 2))
      s.game.decision_grid = static_cast<std::size_t>(*v);
}

void parse_lattice(Reader& r, const json& j, ProblemSpec& s) {
  const std::string path = "lattice";
  if (!r.object(j, path, {"weight_step", "position_step", "positions", "band_levels", "cap"})) return;
  LatticeSpec l;
  if (j.contains("weight_step")) {
    auto v = r.positive(j["weight_step"], child(path, "weight_step"), "positive step required");
    if (v && *v > 1.0) r.fail(child(path, "weight_step"), "step at most 1 required");
    if (v) l.weight_step = *v;
  }
  if (j.contains("position_step"))
    if (auto v = r.positive(j["position_step"], child(path, "position_step"), "positive step required"))
      l.position_step = *v;
  if (j.contains("positions")) {
    if (auto v = r.numbers(j["positions"], child(path, "positions"))) {
      for (std::size_t i = 0; i < v->size(); ++i)
        if (!s.domain.contains((*v)[i])) r.fail(index(child(path, "positions"), i), "position outside the domain");
      l.positions = std::move(*v);
    }
  }
  if (j.contains("band_levels"))
    if (auto v = r.integer(j["band_levels"], child(path, "band_levels"), 1))
      l.band_levels = static_cast<std::size_t>(*v);
  if (j.contains("cap"))
    if (auto v = r.integer(j["cap"], child(path, "cap"), 1)) l.cap = static_cast<std::size_t>(*v);
  s.lattice = l;
}

void parse_candidates(Reader& r, const json& j, ProblemSpec& s) {
  const std::string path = "candidates";
  if (!j.is_array() || j.empty()) {
    r.fail(path, "non-empty array expected");
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = index(path, i);
    if (!r.object(j[i], p, {"points", "weights", "function_values"})) continue;
    if (!j[i].contains("points") || !j[i].contains("weights")) {
      r.fail(p, "points and weights required");
      continue;
    }
    auto pts = r.numbers(j[i]["points"], child(p, "points"));
    auto ws = r.numbers(j[i]["weights"], child(p, "weights"));
    if (!pts || !ws) continue;
    ExplicitCandidate c;
    try {
      c.measure = make_measure(*pts, *ws, s.domain);
    } catch (const Error& e) {
      r.fail(p, std::string(to_string(e.kind())) + ": " + e.what());
      continue;
    }
    if (c.measure.size() != pts->size()) {
      r.fail(child(p, "points"), "points must be distinct");
      continue;
    }
    if (j[i].contains("function_values")) {
      auto fv = r.numbers(j[i]["function_values"], child(p, "function_values"));
      if (!fv) continue;
      if (fv->size() != pts->size()) {
        r.fail(child(p, "function_values"), "one value per point required");
        continue;
      }
      // Reorder to the measure's sorted support.
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t a = 0; a < pts->size(); ++a) pairs.emplace_back((*pts)[a], (*fv)[a]);
      std::sort(pairs.begin(), pairs.end());
      std::vector<double> sorted;
      for (const auto& pr : pairs) sorted.push_back(pr.second);
      c.function_values = std::move(sorted);
    }
    s.candidates.push_back(std::move(c));
  }
}

void parse_estimators(Reader& r, const json& j, ProblemSpec& s) {
  const std::string path = "estimators";
  if (!j.is_array() || j.empty()) {
    r.fail(path, "non-empty array expected");
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = index(path, i);
    if (!r.object(j[i], p, {"kind", "shift", "value", "values"})) continue;
    const std::string kind = j[i].value("kind", "");
    EstimatorSpec e;
    if (kind == "sample_mean") {
      e.rule = EstimatorSpec::Rule::SampleMean;
      if (j[i].contains("shift"))
        if (auto v = r.number(j[i]["shift"], child(p, "shift"))) e.shift = *v;
    } else if (kind == "constant") {
      e.rule = EstimatorSpec::Rule::Constant;
      if (!j[i].contains("value")) {
        r.fail(child(p, "value"), "required");
        continue;
      }
      if (auto v = r.number(j[i]["value"], child(p, "value"))) e.value = *v;
    } else if (kind == "table") {
      e.rule = EstimatorSpec::Rule::Table;
      if (!j[i].contains("values")) {
        r.fail(child(p, "values"), "required");
        continue;
      }
      if (auto v = r.numbers(j[i]["values"], child(p, "values"))) e.table = std::move(*v);
    } else {
      r.fail(child(p, "kind"), "one of sample_mean, constant, table required");
      continue;
    }
    s.estimators.push_back(std::move(e));
  }
}

bool needs_candidates(ProblemKind k) { return k != ProblemKind::OuqBound && k != ProblemKind::Certify; }

void parse_document(Reader& r, const json& doc, ProblemSpec& s) {
  if (!r.object(doc, "", {"kind", "domain", "grid", "constraints", "function_band", "qoi", "epsilon", "loss",
                          "data_map", "data_maps", "candidates", "lattice", "priors", "estimators", "solver", "game"}))
    return;

  if (!doc.contains("kind") || !doc["kind"].is_string() || !parse_kind(doc["kind"].get<std::string>())) {
    r.fail("kind", "one of ouq_bound, certify, minimax_estimate, confidence_interval, compare_experiments, "
                   "mix_estimators, brittleness_demo required");
    return;
  }
  s.kind = *parse_kind(doc["kind"].get<std::string>());

  if (doc.contains("solver")) parse_solver(r, doc["solver"], s);
  if (doc.contains("game")) parse_game(r, doc["game"], s);

  // Domain and grid come first: every function is checked against them.
  if (!doc.contains("domain")) {
    r.fail("domain", "required");
    return;
  }
  auto dom = r.numbers(doc["domain"], "domain");
  if (!dom) return;
  if (dom->size() != 2 || !((*dom)[0] < (*dom)[1])) {
    r.fail("domain", "[lo, hi] with lo < hi required");
    return;
  }
  s.domain = Interval{(*dom)[0], (*dom)[1]};

  if (!doc.contains("grid")) {
    r.fail("grid", "required");
    return;
  }
  const json& g = doc["grid"];
  if (g.is_object()) {
    if (!r.object(g, "grid", {"points"})) return;
    if (!g.contains("points")) {
      r.fail("grid.points", "required");
      return;
    }
    auto n = r.integer(g["points"], "grid.points", 2);
    if (!n) return;
    if (*n > 1'000'000) {
      r.fail("grid.points", "at most 1000000 points");
      return;
    }
    s.grid = uniform_grid(s.domain, static_cast<std::size_t>(*n));
  } else {
    auto pts = r.numbers(g, "grid");
    if (!pts) return;
    if (pts->size() < 2) {
      r.fail("grid", "at least two points required");
      return;
    }
    for (std::size_t i = 0; i < pts->size(); ++i) {
      if (!s.domain.contains((*pts)[i])) r.fail(index("grid", i), "point outside the domain");
      if (i > 0 && (*pts)[i] <= (*pts)[i - 1]) r.fail(index("grid", i), "grid must increase");
    }
    s.grid = std::move(*pts);
  }
  Context ctx{s.domain, s.grid, {}};
  for (double x : s.grid) ctx.grid_keys.insert(canonical_key(x));

  if (doc.contains("constraints")) {
    const json& cs = doc["constraints"];
    if (!cs.is_array()) r.fail("constraints", "array expected");
    for (std::size_t i = 0; cs.is_array() && i < cs.size(); ++i) {
      const std::string p = index("constraints", i);
      if (!r.object(cs[i], p, {"g", "relation", "bound"})) continue;
      if (!cs[i].contains("g") || !cs[i].contains("relation") || !cs[i].contains("bound")) {
        r.fail(p, "g, relation and bound required");
        continue;
      }
      auto fn = parse_function(r, cs[i]["g"], child(p, "g"), ctx);
      auto bound = r.number(cs[i]["bound"], child(p, "bound"));
      const std::string rel = cs[i]["relation"].is_string() ? cs[i]["relation"].get<std::string>() : "";
      std::optional<ConstraintRelation> relation;
      if (rel == "<=") relation = ConstraintRelation::LessEqual;
      if (rel == ">=") relation = ConstraintRelation::GreaterEqual;
      if (rel == "=" || rel == "==") relation = ConstraintRelation::Equal;
      if (!relation) r.fail(child(p, "relation"), "one of <=, >=, = required");
      if (fn && bound && relation) s.constraints.push_back(MomentConstraint{std::move(*fn), *relation, *bound});
    }
  }

  if (doc.contains("function_band")) {
    const json& b = doc["function_band"];
    if (r.object(b, "function_band", {"center", "half_width"})) {
      if (!b.contains("center") || !b.contains("half_width")) {
        r.fail("function_band", "center and half_width required");
      } else {
        auto c = parse_function(r, b["center"], "function_band.center", ctx);
        auto w = r.number(b["half_width"], "function_band.half_width");
        if (w && *w < 0.0) r.fail("function_band.half_width", "nonnegative value required");
        if (c && w && *w >= 0.0) s.band = FunctionBand{std::move(*c), *w};
      }
    }
  }

  if (!doc.contains("qoi")) {
    r.fail("qoi", "required for kind " + std::string(to_string(s.kind)));
  } else {
    const json& q = doc["qoi"];
    if (r.object(q, "qoi", {"kind", "f", "threshold"})) {
      const std::string kind = q.value("kind", "");
      if (!q.contains("f")) {
        r.fail("qoi.f", "required");
      } else if (kind == "tail_probability") {
        auto f = parse_function(r, q["f"], "qoi.f", ctx);
        std::optional<double> a;
        if (!q.contains("threshold"))
          r.fail("qoi.threshold", "required");
        else
          a = r.number(q["threshold"], "qoi.threshold");
        if (f && a) s.qoi = QuantityOfInterest::tail_probability(std::move(*f), *a);
      } else if (kind == "expectation") {
        if (auto f = parse_function(r, q["f"], "qoi.f", ctx)) s.qoi = QuantityOfInterest::expectation(std::move(*f));
      } else {
        r.fail("qoi.kind", "one of tail_probability, expectation required");
      }
    }
  }

  const bool wants_eps = s.kind == ProblemKind::Certify || s.kind == ProblemKind::ConfidenceInterval;
  if (doc.contains("epsilon")) {
    auto e = r.number(doc["epsilon"], "epsilon");
    if (e && s.kind == ProblemKind::ConfidenceInterval && (*e < 0.0 || *e > 1.0))
      r.fail("epsilon", "value in [0, 1] required");
    else if (e)
      s.epsilon = *e;
  } else if (wants_eps) {
    r.fail("epsilon", "required for kind " + std::string(to_string(s.kind)));
  }

  if (doc.contains("loss")) {
    const json& l = doc["loss"];
    if (r.object(l, "loss", {"kind", "gamma"})) {
      const std::string kind = l.value("kind", "");
      if (kind == "squared") {
        s.loss = LossFunction::squared();
      } else if (kind == "threshold") {
        if (!l.contains("gamma")) {
          r.fail("loss.gamma", "required");
        } else if (auto gm = r.positive(l["gamma"], "loss.gamma")) {
          s.loss = LossFunction::threshold(*gm);
        }
      } else {
        r.fail("loss.kind", "one of squared, threshold required");
      }
    }
  }
  if (s.kind == ProblemKind::MixEstimators && s.loss.kind != LossFunction::Kind::Squared)
    r.fail("loss", "mixing requires the squared loss");

  if (doc.contains("data_map"))
    if (auto m = parse_data_map(r, doc["data_map"], "data_map", ctx, s.alphabet_cap)) s.data_maps.push_back(*m);
  if (doc.contains("data_maps")) {
    const json& ms = doc["data_maps"];
    if (!ms.is_array() || ms.size() != 2) {
      r.fail("data_maps", "exactly two data maps required");
    } else {
      for (std::size_t i = 0; i < 2; ++i)
        if (auto m = parse_data_map(r, ms[i], index("data_maps", i), ctx, s.alphabet_cap)) s.data_maps.push_back(*m);
    }
  }
  if (doc.contains("data_map") && doc.contains("data_maps")) r.fail("data_maps", "give data_map or data_maps, not both");

  if (doc.contains("candidates")) parse_candidates(r, doc["candidates"], s);
  if (doc.contains("lattice")) parse_lattice(r, doc["lattice"], s);
  if (doc.contains("candidates") && doc.contains("lattice")) r.fail("lattice", "give candidates or lattice, not both");

  if (doc.contains("estimators")) parse_estimators(r, doc["estimators"], s);

  if (doc.contains("priors")) {
    const json& p = doc["priors"];
    if (r.object(p, "priors", {"base", "alternative"})) {
      if (p.contains("base")) s.base_prior = parse_prior(r, p["base"], "priors.base");
      if (p.contains("alternative")) s.alternative_prior = parse_prior(r, p["alternative"], "priors.alternative");
    }
  }

  if (needs_candidates(s.kind)) {
    if (!doc.contains("candidates") && !doc.contains("lattice"))
      r.fail("candidates", "candidates or lattice required for kind " + std::string(to_string(s.kind)));
    if (s.kind == ProblemKind::CompareExperiments) {
      if (!doc.contains("data_maps")) r.fail("data_maps", "required for kind compare_experiments");
    } else if (!doc.contains("data_map")) {
      r.fail("data_map", "required for kind " + std::string(to_string(s.kind)));
    }
  }
  if (s.kind == ProblemKind::MixEstimators && !doc.contains("estimators"))
    r.fail("estimators", "required for kind mix_estimators");
  if (s.kind == ProblemKind::BrittlenessDemo) {
    if (!s.base_prior && !(doc.contains("priors") && doc["priors"].contains("base")))
      r.fail("priors.base", "required for kind brittleness_demo");
    if (!s.alternative_prior && !(doc.contains("priors") && doc["priors"].contains("alternative")))
      r.fail("priors.alternative", "required for kind brittleness_demo");
    const std::size_t n = s.candidates.size();
    if (n > 0) {
      if (s.base_prior && s.base_prior->size() != n) r.fail("priors.base", "one weight per candidate required");
      if (s.alternative_prior && s.alternative_prior->size() != n)
        r.fail("priors.alternative", "one weight per candidate required");
    }
  }
}

}  // namespace

Validation validate(const std::string& text) {
  Validation v;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    v.error = ErrorKind::ParseError;
    v.diagnostics.push_back({"", e.what()});
    return v;
  }

  Reader r;
  ProblemSpec s;
  try {
    parse_document(r, doc, s);
  } catch (const Error& e) {
    r.fail("", std::string(to_string(e.kind())) + ": " + e.what());
  }
  if (!r.diags.empty()) {
    v.error = ErrorKind::SchemaError;
    v.diagnostics = std::move(r.diags);
    return v;
  }

  const bool uses_set = !needs_candidates(s.kind) || s.lattice.has_value();
  if (uses_set && !s.constraints.empty() && !s.admissible_set().probe_feasible()) {
    v.error = ErrorKind::InfeasibleProbe;
    v.diagnostics.push_back({"constraints", "no measure on the grid satisfies every constraint"});
    return v;
  }
  s.source = std::move(doc);
  v.spec = std::move(s);
  return v;
}

}  // namespace ouq::cli
