#include "commands.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "fraclab/embeddings.hpp"
#include "fraclab/error.hpp"
#include "fraclab/modular.hpp"
#include "fraclab/solver.hpp"

namespace fraclab::cli {

json real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  return value;
}

namespace {

json to_json(const LuxemburgResult& r) {
  if (r.status == LuxemburgStatus::bracket_failure)
    throw NumericError("Luxemburg bracket failure after " + std::to_string(r.iterations) +
                       " expansions");
  return {{"lambda_star", real(r.lambda_star)},
          {"modular_at_lambda", real(r.modular_at_lambda)},
          {"bracket", {real(r.bracket_lo), real(r.bracket_hi)}},
          {"iterations", r.iterations},
          {"status", to_string(r.status)}};
}

json to_json(const Ratio& r) {
  return {{"value", real(r.value)}, {"status", to_string(r.status)}};
}

json to_json(const TraceReport& t) {
  json j = {{"boundary_norm", real(t.boundary_norm)},
            {"full_norm", real(t.full_norm)},
            {"ratio", to_json(t.ratio)},
            {"subcritical", t.subcritical}};
  j["gap_k"] = t.gap_k ? real(t.gap_k->to_double()) : json(nullptr);
  return j;
}

json point_json(const Point& x, int n) {
  return n == 1 ? json::array({real(x[0])}) : json::array({real(x[0]), real(x[1])});
}

std::string status_of(const Ratio& r) {
  return r.defined() ? "ok" : to_string(r.status);
}

// Shared parsing of domain + definitions.
struct Setup {
  Reader root;
  Domain domain;
  FieldTable defs;
};

Setup setup(const json& config) {
  Reader root(config, "config");
  Domain domain = read_domain(root.object("domain"));
  FieldTable defs = read_definitions(root);
  return {std::move(root), std::move(domain), std::move(defs)};
}

CommandOutput cmd_norm(const json& config) {
  auto [r, domain, defs] = setup(config);
  const Scope scope = read_scope(r);
  const GridFunction f = read_function(r, "f", domain, defs);
  const Arity arity = scope == Scope::interior ? Arity::domain : Arity::boundary;
  const ExponentField p = read_field(r, "p", arity, defs, domain, Role::exponent);
  r.finish();
  const LuxemburgResult res = luxemburg_norm(f, p, scope);
  CommandOutput out;
  out.result = to_json(res);
  out.headline_name = "lambda_star";
  out.headline = res.lambda_star;
  return out;
}

CommandOutput cmd_seminorm(const json& config) {
  auto [r, domain, defs] = setup(config);
  const Scope scope = read_scope(r);
  const GridFunction f = read_function(r, "f", domain, defs);
  const ExponentField p = read_field(r, "p", Arity::pair, defs, domain, Role::exponent);
  const ExponentField s = read_field(r, "s", Arity::pair, defs, domain, Role::smoothness);
  r.finish();
  const PairQuadrature pq = pair_quadrature(domain, scope);
  const LuxemburgResult res = scope == Scope::interior
                                  ? gagliardo_seminorm(f, p, s, pq)
                                  : boundary_gagliardo_seminorm(f, p, s, pq);
  CommandOutput out;
  out.result = to_json(res);
  out.headline_name = "lambda_star";
  out.headline = res.lambda_star;
  return out;
}

CommandOutput cmd_trace_check(const json& config) {
  auto [r, domain, defs] = setup(config);
  const GridFunction f = read_function(r, "f", domain, defs);
  const ExponentField p = read_field(r, "p", Arity::pair, defs, domain, Role::exponent);
  const ExponentField q = read_field(r, "q", Arity::boundary, defs, domain, Role::exponent);
  const ExponentField s = read_field(r, "s", Arity::pair, defs, domain, Role::smoothness);
  const int refinement = static_cast<int>(r.integer("refinement", 1, 2));
  r.finish();
  const TraceReport t =
      trace_check(f, p, q, s, PairQuadrature(domain, Scope::interior), refinement);
  CommandOutput out;
  out.result = to_json(t);
  out.headline_name = "ratio";
  out.headline = t.ratio.value;
  std::ostringstream csv;
  write_csv(csv, {{"trace", "-", t.boundary_norm, t.full_norm, t.ratio, t.subcritical,
                   status_of(t.ratio)}});
  out.csv = csv.str();
  return out;
}

CommandOutput cmd_sharpness(const json& config) {
  auto [r, domain, defs] = setup(config);
  const ExponentField p = read_field(r, "p", Arity::pair, defs, domain, Role::exponent);
  const ExponentField q = read_field(r, "q", Arity::boundary, defs, domain, Role::exponent);
  const ExponentField s = read_field(r, "s", Arity::pair, defs, domain, Role::smoothness);
  Reader fr = r.object("family");
  ConcentrationFamily family;
  const std::vector<double> x0 = fr.numbers("x0");
  if (static_cast<int>(x0.size()) != domain.dimension())
    throw ValidationError(fr.path("x0") + ": expected one coordinate per dimension");
  family.x0 = {x0[0], x0.size() > 1 ? x0[1] : 0.0};
  family.a = fr.number("a");
  family.radius = fr.number("radius", 1.0);
  family.scales = fr.numbers("scales");
  if (fr.has("profile")) {
    const ExponentField g = read_field(fr, "profile", Arity::domain, defs);
    if (!g.expression().usage().compatible_with(domain.dimension()))
      throw ValidationError(fr.path("profile") + ": variables do not match the domain dimension");
    family.profile = g.expression();
  }
  fr.finish();
  r.finish();

  const SharpnessReport rep = sharpness_sweep(family, p, q, s, domain);
  CommandOutput out;
  json rows = json::array();
  std::vector<CsvRow> csv_rows;
  for (const SharpnessRow& row : rep.rows) {
    json j = {{"k", real(row.k)}, {"support_cells", row.support_cells}, {"rejected", row.rejected}};
    if (!row.rejected) j["trace"] = to_json(row.report);
    rows.push_back(j);
    csv_rows.push_back({"sharpness", format_real(row.k), row.report.boundary_norm,
                        row.report.full_norm, row.report.ratio, row.report.subcritical,
                        row.rejected ? "rejected-support" : status_of(row.report.ratio)});
  }
  out.result = {{"family_admissible", rep.family.admissible},
                {"worst_interior_inequality", real(rep.family.worst_interior)},
                {"worst_boundary_inequality", real(rep.family.worst_boundary)},
                {"rows", rows},
                {"increasing", rep.increasing},
                {"growth", real(rep.growth)},
                {"spread", real(rep.spread)}};
  out.headline_name = "growth";
  out.headline = rep.growth;
  std::ostringstream csv;
  write_csv(csv, csv_rows);
  out.csv = csv.str();
  return out;
}

CommandOutput cmd_holder(const json& config) {
  auto [r, domain, defs] = setup(config);
  const Scope scope = read_scope(r);
  const Arity arity = scope == Scope::interior ? Arity::domain : Arity::boundary;
  const GridFunction f = read_function(r, "f", domain, defs);
  const GridFunction g = read_function(r, "g", domain, defs);
  const ExponentField p = read_field(r, "p", arity, defs, domain, Role::exponent);
  const ExponentField q = read_field(r, "q", arity, defs, domain, Role::exponent);
  const ExponentField rr = read_field(r, "r", arity, defs, domain, Role::holder_target);
  r.finish();
  const HolderReport h = holder_check(f, g, p, q, rr, scope);
  CommandOutput out;
  out.result = {{"lhs", real(h.lhs)},
                {"rhs_product", real(h.rhs_product)},
                {"ratio", to_json(h.ratio)},
                {"worst_conjugacy", real(h.worst_conjugacy)}};
  out.headline_name = "ratio";
  out.headline = h.ratio.value;
  return out;
}

CommandOutput cmd_partition(const json& config) {
  auto [r, domain, defs] = setup(config);
  const int n = domain.dimension();
  const ExponentField p = read_field(r, "p", Arity::pair, defs, domain, Role::exponent);
  const ExponentField q = read_field(r, "q", Arity::boundary, defs, domain, Role::exponent);
  const ExponentField s = read_field(r, "s", Arity::pair, defs, domain, Role::smoothness);
  CoveringOptions opts;
  if (r.has("covering")) {
    Reader c = r.object("covering");
    opts.refinement = static_cast<int>(c.integer("refinement", 1, opts.refinement));
    opts.initial_epsilon = c.number("initial_epsilon", opts.initial_epsilon);
    opts.epsilon_retries = static_cast<int>(c.integer("epsilon_retries", 0, opts.epsilon_retries));
    opts.delta_retries = static_cast<int>(c.integer("delta_retries", 0, opts.delta_retries));
    c.finish();
  }
  const GapResult gap = subcritical_gap(p, q, s, domain, opts.refinement);
  if (!gap.subcritical) {
    std::ostringstream os;
    os.precision(17);
    os << "configuration is not subcritical: p* = " << gap.critical_at_witness.to_double()
       << " <= q = " << gap.q_at_witness << " at (" << gap.witness[0] << ", " << gap.witness[1]
       << ")";
    throw ValidationError(os.str());
  }
  double k;
  if (r.has("k")) {
    k = r.number("k");
  } else if (gap.gap.is_infinite()) {
    throw ValidationError(r.path("k") + ": required when the critical exponent is infinite");
  } else {
    k = gap.gap.value();
  }
  std::optional<GridFunction> f;
  if (r.has("f")) f = read_function(r, "f", domain, defs);
  r.finish();

  const GapCertificate cert = covering_partition(p, q, s, domain, k, opts);
  json patches = json::array();
  for (const Patch& pt : cert.patches) {
    patches.push_back({{"box", {{"lo", point_json(pt.box.lo, n)}, {"hi", point_json(pt.box.hi, n)}}},
                       {"cells", pt.cells.size()},
                       {"facets", pt.facets.size()},
                       {"diameter", real(pt.diameter)},
                       {"p_inf", real(pt.p_inf)},
                       {"p_frozen", real(pt.p_frozen)},
                       {"s_frozen", real(pt.s_frozen)},
                       {"t_aux", real(pt.t_aux)},
                       {"condition_12", pt.condition_12},
                       {"condition_13", pt.condition_13},
                       {"trace_regime", pt.trace_regime}});
  }
  CommandOutput out;
  out.result = {{"gap", real(gap.gap.to_double())},
                {"gap_witness", point_json(gap.witness, n)},
                {"k", real(cert.gap_k)},
                {"epsilon", real(cert.epsilon)},
                {"delta", real(cert.delta)},
                {"refinement", cert.refinement},
                {"delta_retries_used", cert.delta_retries_used},
                {"patches", patches}};
  if (f) {
    const ProofChainReport chain = proof_chain_check(*f, cert, p, q, s);
    json rows = json::array();
    for (const PatchChain& c : chain.patches) {
      rows.push_back({{"patch", c.patch},
                      {"zero_function", c.zero_function},
                      {"frozen_seminorm", real(c.frozen_seminorm)},
                      {"weighted_norm", real(c.weighted_norm)},
                      {"holder_constant", real(c.holder_constant)},
                      {"patch_seminorm", real(c.patch_seminorm)},
                      {"patch_lebesgue", real(c.patch_lebesgue)},
                      {"first_ratio", to_json(c.first_ratio)},
                      {"lebesgue_ratio", to_json(c.lebesgue_ratio)},
                      {"first_holds", c.first_holds},
                      {"second_holds", c.second_holds},
                      {"monotone_holds", c.monotone_holds}});
    }
    out.result["proof_chain"] = {{"domain_seminorm", real(chain.domain_seminorm)},
                                 {"domain_lebesgue", real(chain.domain_lebesgue)},
                                 {"union_lhs", real(chain.union_lhs)},
                                 {"union_rhs", real(chain.union_rhs)},
                                 {"union_holds", chain.union_holds},
                                 {"violations", chain.violations},
                                 {"patches", rows}};
    if (chain.violations > 0)
      throw NumericError(std::to_string(chain.violations) +
                         " violated exact inequalities in the seminorm chain");
  }
  out.headline_name = "delta";
  out.headline = cert.delta;
  return out;
}

CommandOutput cmd_embed(const json& config) {
  auto [r, domain, defs] = setup(config);
  const GridFunction f = read_function(r, "f", domain, defs);
  const ExponentField p = read_field(r, "p", Arity::pair, defs, domain, Role::exponent);
  const ExponentField s = read_field(r, "s", Arity::pair, defs, domain, Role::smoothness);
  const double t = r.number("t");
  const double rr = r.number("r");
  r.finish();
  const EmbeddingReport e = embedding_check(f, p, s, t, rr, PairQuadrature(domain, Scope::interior));
  CommandOutput out;
  out.result = {{"lebesgue_r", real(e.lebesgue_r)},
                {"lebesgue_bar", real(e.lebesgue_bar)},
                {"seminorm_tr", real(e.seminorm_tr)},
                {"seminorm_sp", real(e.seminorm_sp)},
                {"lebesgue_ratio", to_json(e.lebesgue_ratio)},
                {"seminorm_ratio", to_json(e.seminorm_ratio)},
                {"kernel_bound", real(e.kernel_bound)}};
  out.headline_name = "kernel_bound";
  out.headline = e.kernel_bound;
  return out;
}

CommandOutput cmd_solve(const json& config) {
  auto [r, domain, defs] = setup(config);
  EnergyProblem prob{domain, read_field(r, "p", Arity::pair, defs),
                     read_field(r, "s", Arity::pair, defs), read_function(r, "g", domain, defs),
                     read_field(r, "r", Arity::boundary, defs)};
  SolverOptions opts;
  if (r.has("solver")) {
    Reader sr = r.object("solver");
    opts.tol = sr.number("tol", opts.tol);
    opts.max_iter = static_cast<int>(sr.integer("max_iter", 0, opts.max_iter));
    opts.seed = static_cast<std::uint64_t>(sr.integer("seed", 0, static_cast<long>(opts.seed)));
    opts.accelerate = sr.boolean("accelerate", opts.accelerate);
    sr.finish();
  }
  const bool uniqueness = r.boolean("uniqueness_check", false);
  std::vector<double> scales;
  if (r.has("coercivity_scales")) scales = r.numbers("coercivity_scales");
  r.finish();

  prob = validate_problem(std::move(prob));
  const EnergyModel model(prob);
  const SolverReport rep = minimize(model, domain, opts, std::vector<double>(model.size(), 0.0));

  json history = json::array();
  for (const IterationRecord& h : rep.history)
    history.push_back({h.iteration, real(h.energy), real(h.gradient_norm)});
  json u = json::array();
  for (double v : rep.minimizer.interior()) u.push_back(real(v));

  CommandOutput out;
  out.result = {{"status", to_string(rep.status)},
                {"energy", real(rep.energy)},
                {"el_residual", real(rep.el_residual)},
                {"tol", real(opts.tol)},
                {"iterations", rep.iterations},
                {"history_columns", {"iteration", "energy", "residual"}},
                {"history", history},
                {"minimizer", u}};
  bool converged = rep.status == SolverStatus::converged;

  if (uniqueness) {
    const GridFunction start = random_start(domain, opts.seed);
    const SolverReport other = minimize(
        model, domain, opts, std::vector<double>(start.interior().begin(), start.interior().end()));
    double gap = 0.0;
    for (std::size_t k = 0; k < model.size(); ++k)
      gap = std::max(gap, std::abs(other.minimizer.interior()[k] - rep.minimizer.interior()[k]));
    out.result["uniqueness"] = {{"status", to_string(other.status)},
                                {"iterations", other.iterations},
                                {"sup_distance", real(gap)},
                                {"within_10_tol", gap <= 10.0 * opts.tol}};
    converged = converged && other.status == SolverStatus::converged;
  }
  if (!scales.empty()) {
    const bool nonzero = std::any_of(rep.minimizer.interior().begin(),
                                     rep.minimizer.interior().end(),
                                     [](double v) { return v != 0.0; });
    const GridFunction dir = nonzero ? rep.minimizer : random_start(domain, opts.seed);
    const CoercivityReport c = coercivity_probe(dir, prob, scales);
    json rows = json::array();
    for (const CoercivityRow& row : c.rows)
      rows.push_back({{"tau", real(row.tau)}, {"energy", real(row.energy)}, {"ratio", real(row.ratio)}});
    out.result["coercivity"] = {{"direction", nonzero ? "minimizer" : "seeded-random"},
                                {"rows", rows},
                                {"increasing", c.increasing ? json(*c.increasing) : json(nullptr)}};
  }
  out.headline_name = "energy";
  out.headline = rep.energy;
  out.exit_code = converged ? kSuccess : kNonconvergence;
  return out;
}

using Handler = CommandOutput (*)(const json&);

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> table = {
      {"norm", cmd_norm},         {"seminorm", cmd_seminorm},   {"trace-check", cmd_trace_check},
      {"sharpness", cmd_sharpness}, {"holder", cmd_holder},     {"partition", cmd_partition},
      {"embed", cmd_embed},       {"solve", cmd_solve}};
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"norm",    "seminorm",  "trace-check",
                                                 "sharpness", "holder",  "partition",
                                                 "embed",   "solve"};
  return names;
}

CommandOutput run_command(std::string_view name, const json& config) {
  const auto it = handlers().find(name);
  if (it == handlers().end()) throw ValidationError("unknown command '" + std::string(name) + "'");
  return it->second(config);
}

json make_report(std::string_view name, const json& config, const CommandOutput& out) {
  return {{"command", std::string(name)},
          {"config", config},
          {"headline", {{"name", out.headline_name}, {"value", real(out.headline)}}},
          {"exit_code", out.exit_code},
          {"result", out.result}};
}

}  // namespace fraclab::cli
