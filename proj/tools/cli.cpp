#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qcomp/qcomp.hpp"

namespace qcomp::cli {
namespace {

using nlohmann::json;

struct Options {
  std::string input;
  double eta = 0.0;
  std::string prior_csv;
  std::optional<std::vector<double>> prior;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::size_t max_perms = 1'000'000;
  bool json = false;
  bool csv = false;
  bool minimize_norm = false;
  unsigned threads = 0;
  std::string target;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("QCOMP_SEED");
  if (!env || !*env) return 1;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_input, std::string("QCOMP_SEED is not an unsigned integer: '") + env + "'");
  }
}

std::vector<double> parse_prior(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      require(field.find_first_not_of(" \t", used) == std::string::npos, ErrorKind::invalid_input, "");
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_input, "--prior: cannot parse '" + field + "' as a number");
    }
  }
  require(!out.empty(), ErrorKind::invalid_input, "--prior is empty");
  return out;
}

Settings settings_for(const Options& o) {
  Settings s;
  s.solver.tol_gap = o.tol;
  s.solver.tol_feas = o.tol;
  s.max_perm_budget = o.max_perms;
  s.sample_over_budget = false;
  s.sampling_seed = o.seed;
  s.threads = o.threads;
  return s;
}

/// Reads --input. A previous report is accepted too: its embedded data is used and
/// its recorded parameters fill in whatever the command line leaves unset.
json load_input(Options& o, const std::function<bool(const char*)>& given) {
  require(!o.input.empty(), ErrorKind::invalid_input, "this command needs --input FILE");
  json j = io::read_json_file(o.input);
  if (!(j.is_object() && j.contains("task") && j.contains("inputs"))) return j;
  const json& in = j["inputs"];
  require(in.contains("data"), ErrorKind::invalid_input, "report '" + o.input + "' does not embed its input data");
  if (!given("--eta") && in.contains("eta")) o.eta = in["eta"].get<double>();
  if (!given("--prior") && in.contains("prior")) o.prior = in["prior"].get<std::vector<double>>();
  if (!given("--seed") && in.contains("seed")) o.seed = in["seed"].get<std::uint64_t>();
  if (!given("--tol") && in.contains("tolerances")) o.tol = in["tolerances"].at("solver_gap").get<double>();
  if (!given("--max-perms") && in.contains("max_perms")) o.max_perms = in["max_perms"].get<std::size_t>();
  if (!given("--minimize-norm") && in.contains("minimize_norm")) o.minimize_norm = in["minimize_norm"].get<bool>();
  return in["data"];
}

json base_inputs(const Options& o, const Settings& s) {
  json in;
  in["seed"] = o.seed;
  in["max_perms"] = o.max_perms;
  in["minimize_norm"] = o.minimize_norm;
  in["tolerances"] = {{"psd", s.tol.psd},         {"eq", s.tol.eq},
                      {"zero", s.tol.zero},       {"comp", s.tol.comp},
                      {"solver_gap", s.solver.tol_gap}, {"solver_feas", s.solver.tol_feas}};
  if (!o.input.empty()) in["file"] = o.input;
  return in;
}

PriorDistribution prior_for(const Options& o, std::size_t n, const Settings& s) {
  if (!o.prior) return PriorDistribution::uniform(n);
  require(o.prior->size() == n, ErrorKind::dimension_mismatch,
          "--prior has " + std::to_string(o.prior->size()) + " entries for " + std::to_string(n) + " inputs");
  return PriorDistribution(*o.prior, s.tol);
}

std::vector<DensityOperator> states_from(const json& data, const Tolerances& tol) {
  std::vector<DensityOperator> out;
  for (auto& op : io::decode_operator_set(data)) out.emplace_back(std::move(op), tol);
  return out;
}

void check(TaskReport& rep, std::string name, double lhs, Relation rel, double rhs, double tol) {
  rep.assertions.push_back(make_assertion(std::move(name), lhs, rel, rhs, tol));
}

json encode_pi(const PermutationSet& pi) { return pi.to_string(); }

struct Context {
  Options& o;
  Settings settings;
  TaskReport& rep;
  std::function<bool(const char*)> given;
};

void run_qexc(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const auto ops = io::decode_operator_set(data);
  const QexcSolution q = q_exc(std::span<const HermitianOperator>(ops), c.settings);
  c.rep.values = {{"value", q.value},
                  {"gap", q.gap},
                  {"witness_P", io::encode(q.witness_P)},
                  {"dual_Q", encode_operators(q.dual_Q)},
                  {"dual_on_face", q.dual_on_face}};
  const double tol = c.settings.tol.eq;
  check(c.rep, "witness P >= 0", q.witness_P.min_eigenvalue(), Relation::greater_equal, 0.0, tol);
  for (std::size_t x = 0; x < ops.size(); ++x)
    check(c.rep, "witness P <= N_" + std::to_string(x), (ops[x] - q.witness_P).min_eigenvalue(), Relation::greater_equal,
          0.0, tol);
  check(c.rep, "tr P = value", q.witness_P.trace(), Relation::equal, q.value, tol);
  c.rep.inputs["data"] = data;
}

void run_iexc(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const auto states = states_from(data, c.settings.tol);
  const QexcSolution q = q_exc(std::span<const DensityOperator>(states), c.settings);
  const double iexc = q.value <= c.settings.tol.zero ? std::numeric_limits<double>::infinity() : -std::log2(q.value);
  c.rep.values = {{"value", number(iexc)}, {"q_exc", q.value}, {"gap", q.gap}};
  c.rep.inputs["data"] = data;
}

void run_deta(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const auto ops = io::decode_operator_set(data);
  const DetaSolution ds = d_eta(std::span<const HermitianOperator>(ops), c.o.eta, c.settings);
  const HermitianOperator total = sum(std::span<const HermitianOperator>(ds.Q));
  c.rep.values = {{"value", ds.value}, {"gap", ds.gap}, {"Q", encode_operators(ds.Q)}};
  const double tol = c.settings.tol.eq;
  check(c.rep, "sum Q <= I", total.max_eigenvalue(), Relation::less_equal, 1.0, tol);
  check(c.rep, "sum Q >= (1 - eta) I", total.min_eigenvalue(), Relation::greater_equal, 1.0 - c.o.eta, tol);
  c.rep.inputs["data"] = data;
  c.rep.inputs["eta"] = c.o.eta;
}

void run_etastar(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const auto ops = io::decode_operator_set(data);
  const EtaStarResult r = eta_star(std::span<const HermitianOperator>(ops), c.o.minimize_norm, c.settings);
  c.rep.values = {{"value", r.value},
                  {"norm", r.norm},
                  {"minimized", r.minimized},
                  {"fell_back", r.fell_back},
                  {"dual_Q", encode_operators(r.dual_Q)}};
  if (r.fell_back) c.rep.notes.push_back("norm minimisation failed validation; the solver's dual was used");
  c.rep.inputs["data"] = data;
}

void run_exclude_states(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const auto states = states_from(data, c.settings.tol);
  const PriorDistribution prior = prior_for(c.o, states.size(), c.settings);
  const StateExclusionResult r =
      p_error_state_exclusion(std::span<const DensityOperator>(states), prior, c.o.eta, c.settings);
  const ClassicalExclusion cl = p_error_classical(prior, c.o.eta);
  c.rep.values = {{"error", r.value},
                  {"classical_error", cl.value},
                  {"ratio", r.value / cl.value},
                  {"gap", r.gap},
                  {"Q", encode_operators(r.Q)},
                  {"inconclusive", io::encode(r.inconclusive)}};
  const double tol = c.settings.tol.eq;
  check(c.rep, "error <= classical error", r.value, Relation::less_equal, cl.value, tol);
  check(c.rep, "inconclusive >= 0", r.inconclusive.min_eigenvalue(), Relation::greater_equal, 0.0, tol);
  check(c.rep, "inconclusive <= eta I", r.inconclusive.max_eigenvalue(), Relation::less_equal, c.o.eta, tol);
  c.rep.inputs["data"] = data;
  c.rep.inputs["eta"] = c.o.eta;
  c.rep.inputs["prior"] = prior.probs();
}

void run_exclude_classical(Context& c) {
  c.settings = settings_for(c.o);
  require(c.o.prior.has_value(), ErrorKind::invalid_input, "exclude-classical needs --prior");
  const PriorDistribution prior(*c.o.prior, c.settings.tol);
  const ClassicalExclusion cl = p_error_classical(prior, c.o.eta);
  c.rep.values = {{"error", cl.value}, {"argmin", cl.argmin}};
  c.rep.inputs["eta"] = c.o.eta;
  c.rep.inputs["prior"] = prior.probs();
}

void run_exclude_ensemble(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const StateAssemblage sigma = io::decode_state_assemblage(data, c.settings.tol);
  const EnsembleExclusionInstance inst{sigma, prior_for(c.o, sigma.inputs(), c.settings), c.o.eta};
  const EnsembleExclusionResult r = p_error_ensemble(inst, c.settings);
  const ClassicalExclusion cl = p_error_classical(inst.prior, c.o.eta);
  json messages = json::array();
  for (const auto& m : r.messages) {
    messages.push_back({{"message", m.message},
                        {"probability", m.probability},
                        {"conditional_prior", m.conditional_prior},
                        {"error", m.error},
                        {"skipped", m.skipped},
                        {"Q", encode_operators(m.Q)}});
  }
  c.rep.values = {{"error", r.value},
                  {"classical_error", cl.value},
                  {"ratio", r.value / cl.value},
                  {"pi", encode_pi(r.pi)},
                  {"lower_bound_only", r.lower_bound_only},
                  {"messages", messages}};
  check(c.rep, "error <= classical error", r.value, Relation::less_equal, cl.value, c.settings.tol.eq);
  c.rep.inputs["data"] = data;
  c.rep.inputs["eta"] = c.o.eta;
  c.rep.inputs["prior"] = inst.prior.probs();
}

json complementarity_values(const ComplementarityReport& r) {
  json v = {{"value", r.value},
            {"pi", encode_pi(r.maximizing_pi)},
            {"per_term", r.per_term},
            {"is_complementary", r.is_complementary},
            {"lower_bound_only", r.lower_bound_only},
            {"swept", r.swept}};
  if (r.eta_star_overall) v["eta_star"] = *r.eta_star_overall;
  return v;
}

void run_cpovm(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const MeasurementAssemblage e = io::decode_measurement_assemblage(data, c.settings.tol);
  c.rep.values = complementarity_values(c_povm(e, c.settings, c.o.minimize_norm));
  c.rep.inputs["data"] = data;
}

void run_cse(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const StateAssemblage sigma = io::decode_state_assemblage(data, c.settings.tol);
  c.rep.values = complementarity_values(c_se(sigma, c.settings, c.o.minimize_norm));
  c.rep.values["signalling_residual"] = sigma.signalling_residual();
  c.rep.inputs["data"] = data;
}

void run_encrypt(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const MeasurementAssemblage e = io::decode_measurement_assemblage(data, c.settings.tol);
  const EncryptionResult r = p_error_encrypt({e, c.o.eta}, c.settings);
  json decoders = json::array();
  for (std::size_t m = 0; m < r.decoders.messages.size(); ++m) {
    const auto& dec = r.decoders.messages[m];
    decoders.push_back({{"message", m},
                        {"guess0", io::encode(dec.guess0)},
                        {"guess1", io::encode(dec.guess1)},
                        {"abstain", io::encode(dec.abstain)}});
  }
  c.rep.values = {{"error", r.error},     {"success", r.success},
                  {"waive", r.waive},     {"pi", encode_pi(r.pi)},
                  {"decoders", decoders}, {"lower_bound_only", r.lower_bound_only}};
  const DecoderValidation v = r.decoders.validate(c.o.eta);
  const double tol = c.settings.tol.eq;
  check(c.rep, "decoder elements PSD", v.psd_residual, Relation::less_equal, 0.0, tol);
  check(c.rep, "decoder completeness", v.completeness_residual, Relation::less_equal, 0.0, tol);
  check(c.rep, "abstain <= eta I", v.inconclusive_residual, Relation::less_equal, 0.0, tol);
  c.rep.inputs["data"] = data;
  c.rep.inputs["eta"] = c.o.eta;
}

void run_iw(Context& c) {
  const json data = load_input(c.o, c.given);
  c.settings = settings_for(c.o);
  const MeasurementAssemblage e = io::decode_measurement_assemblage(data, c.settings.tol);
  const IncompatibilityResult r = incompatibility_weight(e, c.settings);
  json responses = json::array();
  for (const auto& d : r.responses) responses.push_back(d.outcome);
  c.rep.values = {{"weight", r.weight}, {"q", r.q},
                  {"gap", r.gap},       {"K", encode_operators(r.K)},
                  {"parents", encode_operators(r.parents)}, {"responses", responses}};
  const double tol = c.settings.tol.eq;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < e.inputs(); ++x)
    for (std::size_t a = 0; a < e.outcomes(); ++a) {
      HermitianOperator rest = e.element(a, x);
      for (std::size_t i = 0; i < r.responses.size(); ++i)
        if (r.responses[i](a, x) != 0.0) rest = rest - r.K[i];
      worst = std::min(worst, rest.min_eigenvalue());
    }
  check(c.rep, "E - jointly measurable part >= 0", worst, Relation::greater_equal, 0.0, tol);
  const HermitianOperator total = sum(std::span<const HermitianOperator>(r.K));
  check(c.rep, "sum K = q I", frobenius_distance(total, HermitianOperator::identity(e.dim()) * r.q), Relation::equal, 0.0,
        tol);
  c.rep.inputs["data"] = data;
}

void run_example(Context& c) {
  require(c.o.target == "pauli-zx", ErrorKind::invalid_input, "unknown example '" + c.o.target + "' (available: pauli-zx)");
  c.settings = settings_for(c.o);
  const PauliExampleReport ex = pauli_example(c.settings);
  json cases = json::array();
  double error = 0.0;
  for (const auto& k : ex.cases) {
    error = std::max(error, k.optimal_error);
    cases.push_back({{"pi", encode_pi(k.pi)},
                     {"optimal_error", k.optimal_error},
                     {"closed_form_error", k.closed_form.error},
                     {"closed_form_success", k.closed_form.success},
                     {"closed_form_waive", k.closed_form.waive},
                     {"validation_residual", k.validation.worst()}});
  }
  c.rep.values = {{"alpha_max", ex.alpha_max}, {"eta_min", ex.eta_min},
                  {"eta_star", ex.eta_star},   {"success", ex.success},
                  {"error", error},            {"cases", cases},
                  {"fixed_pi_error_eta0", ex.fixed_pi_error_eta0}};
  const CheckReport checks = verify::pauli(c.o.seed, c.settings);
  for (const auto& a : checks.assertions) c.rep.assertions.push_back(a);
}

void run_verify(Context& c) {
  c.settings = settings_for(c.o);
  c.settings.audit = std::make_shared<sdp::SolveAudit>();
  std::vector<const verify::Suite*> chosen;
  if (c.o.target == "all") {
    for (const auto& s : verify::suites()) chosen.push_back(&s);
  } else {
    const verify::Suite* s = verify::find_suite(c.o.target);
    if (!s) {
      std::string names;
      for (const auto& k : verify::suites()) names += k.name + ", ";
      throw Error(ErrorKind::invalid_input, "unknown suite '" + c.o.target + "' (available: " + names + "all)");
    }
    chosen.push_back(s);
  }
  json suites = json::object();
  for (const auto* s : chosen) {
    const CheckReport r = s->run(c.o.seed, c.settings);
    suites[s->name] = {{"criterion", s->criterion},
                       {"title", s->title},
                       {"assertions", r.assertions.size()},
                       {"failures", r.failures()},
                       {"worst_residual", number(r.worst_residual())},
                       {"pass", r.pass()}};
    c.rep.absorb(r, s->name + ": ");
  }
  const CheckReport health = verify::solver_health(*c.settings.audit);
  c.rep.absorb(health, "solver health: ");
  c.rep.values = {{"suites", suites},
                  {"solver", {{"solves", c.settings.audit->count()}, {"max_gap", c.settings.audit->max_gap()}}}};
}

std::string render(const TaskReport& rep, const Options& o) {
  if (o.json) return rep.to_json().dump(2) + "\n";
  if (o.csv) return to_csv(rep);
  return to_text(rep);
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quantum exclusion tasks, complementarity and incompatibility", "qcomp"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    void (*run)(Context&);
  };
  static const Command commands[] = {
      {"qexc", "exclusion quantity q_exc of an operator set", run_qexc},
      {"iexc", "exclusion mutual information of a set of states", run_iexc},
      {"deta", "eta-constrained exclusion value D_eta", run_deta},
      {"etastar", "critical inconclusiveness of an operator set", run_etastar},
      {"exclude-states", "eta-unambiguous state exclusion error", run_exclude_states},
      {"exclude-classical", "exclusion error without side information", run_exclude_classical},
      {"exclude-ensemble", "eta-unambiguous ensemble exclusion error", run_exclude_ensemble},
      {"cpovm", "complementarity of a measurement assemblage", run_cpovm},
      {"cse", "complementarity of a state assemblage", run_cse},
      {"encrypt", "eta-encryption error of a pair of measurements", run_encrypt},
      {"iw", "incompatibility weight of a measurement assemblage", run_iw},
      {"example", "worked examples (pauli-zx)", run_example},
      {"verify", "property suites (lemma1, lemma2, thm1..thm5, nogo-theta, nogo-encrypt, pauli, all)", run_verify},
  };

  std::map<CLI::App*, const Command*> by_app;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    by_app[sub] = &cmd;
    if (std::string(cmd.name) == "example") sub->add_option("name", o.target, "example name")->required();
    if (std::string(cmd.name) == "verify") sub->add_option("suite", o.target, "suite name or 'all'")->required();
    sub->add_option("--input", o.input, "input JSON file (or a previous report)");
    sub->add_option("--eta", o.eta, "inconclusiveness bound in [0, 1)");
    sub->add_option("--prior", o.prior_csv, "comma-separated prior probabilities");
    sub->add_option("--tol", o.tol, "solver gap and feasibility tolerance");
    sub->add_option("--seed", o.seed, "seed (default: QCOMP_SEED or 1)");
    sub->add_option("--max-perms", o.max_perms, "permutation sets swept before giving up");
    sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
    auto* j = sub->add_flag("--json", o.json, "JSON report");
    sub->add_flag("--csv", o.csv, "CSV report")->excludes(j);
    sub->add_flag("--minimize-norm", o.minimize_norm, "minimal-norm duals for eta*");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Command* cmd = by_app.at(sub);
  TaskReport rep;
  rep.task = cmd->name;
  if (!o.target.empty()) rep.task += " " + o.target;
  try {
    if (sub->count("--seed") == 0) o.seed = default_seed();
    if (!o.prior_csv.empty()) o.prior = parse_prior(o.prior_csv);
    const auto t0 = std::chrono::steady_clock::now();
    Context ctx{o, settings_for(o), rep, [sub](const char* flag) { return sub->count(flag) > 0; }};
    cmd->run(ctx);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json in = base_inputs(o, ctx.settings);
    in.update(rep.inputs);
    rep.inputs = std::move(in);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::solver_failure ? 2 : 1;
  } catch (const json::exception& e) {
    err << "error (invalid-input): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  out << render(rep, o);
  return rep.pass() ? 0 : 2;
}

}  // namespace qcomp::cli
