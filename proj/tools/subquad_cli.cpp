// Command-line front end. Every subcommand prints a RunReport JSON document
// on standard output and a one-line human summary on standard error. Exit
// codes: 0 success, 2 argument problems, 3 regime/feasibility/growth limits,
// 4 exact-oracle cap exceeded.
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "subquad/bench.hpp"
#include "subquad/errors.hpp"
#include "subquad/estimator.hpp"
#include "subquad/graph.hpp"
#include "subquad/graph_io.hpp"
#include "subquad/lattice.hpp"
#include "subquad/oracle.hpp"
#include "subquad/rng.hpp"
#include "subquad/sampler.hpp"
#include "subquad/verify.hpp"

#ifndef SUBQUAD_VERSION
#define SUBQUAD_VERSION "0.0.0"
#endif

namespace {

using json = nlohmann::ordered_json;
using namespace subquad;

constexpr int kSchemaVersion = 1;

struct RunReport {
  json body;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit RunReport(const std::string& command) {
    body["schema_version"] = kSchemaVersion;
    body["version"] = SUBQUAD_VERSION;
    body["command"] = command;
    body["inputs"] = json::object();
    body["seed"] = nullptr;
    body["outputs"] = json::object();
    body["warnings"] = json::array();
  }

  void add_graph_input(const std::string& path, const Graph& g) {
    body["inputs"]["graph"] = {{"path", path},
                               {"n", g.vertex_count()},
                               {"edges", g.edge_count()},
                               {"max_degree", g.max_degree()},
                               {"digest", g.digest()}};
  }
  void add_warnings(const std::vector<std::string>& ws) {
    for (const auto& w : ws) body["warnings"].push_back(w);
  }

  // stdout gets the machine report; the summary goes to stderr.
  void emit(const std::string& summary) {
    const double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    body["timing"] = {{"wall_ms", wall}};
    std::cout << body.dump(2) << "\n";
    std::cerr << summary << "\n";
    for (const auto& w : body["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
  }
};

std::string echo_command(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

// --model accepts an inline JSON object or a path to one.
SpinModel load_model(const std::string& spec) {
  const auto first = spec.find_first_not_of(" \t");
  if (first != std::string::npos && spec[first] == '{') return SpinModel::from_json_text(spec);
  std::ifstream in(spec);
  if (!in) throw ArgumentError("cannot open model file: " + spec);
  std::stringstream buf;
  buf << in.rdbuf();
  return SpinModel::from_json_text(buf.str());
}

// --pin takes "v=s,v=s" pairs.
PartialConfiguration parse_pins(int n, const std::string& spec) {
  PartialConfiguration pin(n);
  if (spec.empty()) return pin;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ArgumentError("pin items look like v=s, got: " + item);
    pin.pin(std::stoi(item.substr(0, eq)), std::stoi(item.substr(eq + 1)));
  }
  return pin;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// ------------------------------------------------------------------ count --

void run_count_hardcore(RunReport& rep, const std::string& graph_path, double lambda, int k,
                        double eps, std::uint64_t seed, int depth, int threads,
                        std::int64_t sample_cap, std::int64_t wall_cap_ms) {
  const Graph g = read_graph_file(graph_path);
  rep.add_graph_input(graph_path, g);
  rep.body["seed"] = seed;

  rep.add_warnings(check_regime(g.max_degree(), lambda, k).warnings);
  HardcoreEstimatorConfig cfg;
  cfg.k = k;
  cfg.seed = seed;
  cfg.ell_override = depth;
  cfg.threads = threads;
  cfg.sample_cap = sample_cap;
  cfg.wall_cap_ms = wall_cap_ms;
  const CountEstimate ce = fpras_hardcore(g, lambda, eps, cfg);

  rep.body["inputs"]["lambda"] = lambda;
  rep.body["inputs"]["k"] = k;
  rep.body["inputs"]["eps"] = eps;
  rep.body["outputs"] = {{"log_z", ce.log_z},       {"eps", ce.eps},
                         {"samples", ce.samples},   {"copies", ce.copies},
                         {"ell", ce.ell},           {"delta", ce.delta},
                         {"per_call_failure", ce.per_call_failure},
                         {"truncated", ce.truncated}};
  if (ce.truncated) rep.body["warnings"].push_back("sample caps cut the averaging below the guarantee size");
  rep.emit("log Z = " + fmt_double(ce.log_z) + " (eps " + fmt_double(eps) + ", " +
           std::to_string(ce.samples) + " products x " + std::to_string(ce.copies) + " copies)");
}

void run_count_lattice(RunReport& rep, const std::string& graph_path, const std::string& model_spec,
                       double eps, double c0, double ssm_c, double ssm_r, int dim,
                       std::uint64_t seed, int depth, int threads, std::int64_t sample_cap,
                       std::int64_t wall_cap_ms) {
  const Graph g = read_graph_file(graph_path);
  rep.add_graph_input(graph_path, g);
  rep.body["seed"] = seed;
  const SpinModel model = load_model(model_spec);
  rep.body["inputs"]["model"] = json::parse(model.to_json_text());
  rep.body["inputs"]["eps"] = eps;

  GrowthParams gp;
  gp.c0 = c0;
  gp.d = dim;
  gp.C = ssm_c;
  gp.r = ssm_r;
  LatticeRunConfig run;
  run.seed = seed;
  run.ell_override = depth;
  run.threads = threads;
  run.sample_cap = sample_cap;
  run.wall_cap_ms = wall_cap_ms;
  const LatticeCountResult res = fpras_lattice(g, model.q_spin, eps, gp, run);

  std::int64_t max_rows = 0;
  for (std::int64_t r : res.table_rows) max_rows = std::max(max_rows, r);
  rep.body["outputs"] = {{"log_z", res.count.log_z},
                         {"eps", res.count.eps},
                         {"samples", res.count.samples},
                         {"copies", res.count.copies},
                         {"truncated", res.count.truncated},
                         {"pin_t", res.pin_t},
                         {"radius", res.radius},
                         {"ell_prime", res.ell_prime},
                         {"table_rows", res.table_rows},
                         {"max_table_rows", max_rows},
                         {"mass", res.mass}};
  rep.add_warnings(res.warnings);
  rep.emit("log Z = " + fmt_double(res.count.log_z) + " (eps " + fmt_double(eps) + ", pin_t " +
           std::to_string(res.pin_t) + ", radius " + std::to_string(res.radius) + ")");
}

// ------------------------------------------------------------------ exact --

void run_exact(RunReport& rep, const std::string& graph_path, const std::string& model_spec,
               const std::string& pin_spec, int vertex) {
  const Graph g = read_graph_file(graph_path);
  rep.add_graph_input(graph_path, g);
  const SpinModel model = load_model(model_spec);
  rep.body["inputs"]["model"] = json::parse(model.to_json_text());
  PartialConfiguration pin = parse_pins(g.vertex_count(), pin_spec);
  if (!pin_spec.empty()) rep.body["inputs"]["pin"] = pin_spec;

  const OracleCaps caps = OracleCaps::from_env();
  const double log_z = exact_log_partition(g, model.q_spin, pin, caps);
  rep.body["outputs"]["log_z"] = log_z;
  std::string summary = "log Z = " + fmt_double(log_z);
  if (vertex >= 0) {
    const std::vector<double> mu = exact_marginal(g, model.q_spin, pin, vertex, caps);
    rep.body["outputs"]["vertex"] = vertex;
    rep.body["outputs"]["marginal"] = mu;
    summary += ", mu_" + std::to_string(vertex) + "(0) = " + fmt_double(mu[0]);
  }
  rep.emit(summary);
}

// --------------------------------------------------------------- marginal --

void run_marginal(RunReport& rep, const std::string& graph_path, double lambda, int vertex,
                  int reps, int k, std::uint64_t seed, int depth) {
  const Graph g = read_graph_file(graph_path);
  rep.add_graph_input(graph_path, g);
  rep.body["seed"] = seed;
  rep.body["inputs"]["lambda"] = lambda;
  rep.add_warnings(check_regime(g.max_degree(), lambda, k).warnings);

  HardcoreEstimatorConfig cfg;
  cfg.k = k;
  cfg.ell_override = depth;
  double s1 = 0.0, s2 = 0.0;
  std::int64_t steps = 0;
  std::int64_t boundary = 0;
  int retries = 0, ell = 0;
  for (int r = 0; r < reps; ++r) {
    const MarginalEstimate e = estimate_marginal_zero(
        g, lambda, vertex, cfg, RngStream::derive(seed, "marginal", static_cast<std::uint64_t>(r)).next_u64());
    s1 += e.value;
    s2 += e.value * e.value;
    steps += e.steps_consumed;
    boundary += e.boundary_size;
    retries += e.retries;
    ell = e.ell;
  }
  const double mean = s1 / reps;
  const double var = std::max(0.0, s2 / reps - mean * mean);
  rep.body["outputs"] = {{"vertex", vertex},
                         {"reps", reps},
                         {"mean_zero", mean},
                         {"variance", var},
                         {"stderr", std::sqrt(var / reps)},
                         {"ell", ell},
                         {"mean_boundary", static_cast<double>(boundary) / reps},
                         {"mean_steps", static_cast<double>(steps) / reps},
                         {"retries", retries}};
  rep.emit("mu_" + std::to_string(vertex) + "(0) ~= " + fmt_double(mean) + " +- " +
           fmt_double(std::sqrt(var / reps)) + " over " + std::to_string(reps) + " runs");
}

// ----------------------------------------------------------------- sample --

void run_sample(RunReport& rep, const std::string& graph_path, double lambda, int vertex, int reps,
                double eps, std::int64_t budget, std::uint64_t seed) {
  const Graph g = read_graph_file(graph_path);
  rep.add_graph_input(graph_path, g);
  rep.body["seed"] = seed;
  rep.body["inputs"]["lambda"] = lambda;

  const std::int64_t cap = budget > 0 ? budget : budget_for(g.max_degree(), lambda, eps);
  RngStream rng = RngStream::derive(seed, "sample");
  int occupied = 0, exhausted = 0;
  // histogram over powers of two of the steps one draw consumed
  std::map<std::int64_t, std::int64_t> hist;
  for (int r = 0; r < reps; ++r) {
    PartialConfiguration pin(g.vertex_count());
    GraphSamplingView view(g, pin);
    Budget b(cap);
    bool done = true;
    try {
      occupied += hardcore_sample(view, lambda, vertex, b, rng) == 1;
    } catch (const BudgetExhausted&) {
      ++exhausted;
      done = false;
    }
    std::int64_t le = 1;
    while (le < b.consumed) le *= 2;
    if (done) ++hist[le];
  }
  json hist_json = json::array();
  for (const auto& [le, count] : hist) hist_json.push_back({{"steps_le", le}, {"count", count}});
  rep.body["outputs"] = {{"vertex", vertex},
                         {"draws", reps},
                         {"budget", cap},
                         {"occupied", occupied},
                         {"rate", static_cast<double>(occupied) / std::max(1, reps - exhausted)},
                         {"exhausted", exhausted},
                         {"steps_histogram", hist_json}};
  rep.emit("occupied " + std::to_string(occupied) + "/" + std::to_string(reps) + " draws (" +
           std::to_string(exhausted) + " exhausted at budget " + std::to_string(cap) + ")");
}

// ----------------------------------------------------------------- verify --

void run_verify_lower_bound(RunReport& rep, int delta, int k, int lmax, const std::string& csv) {
  const LowerBoundReport lb = weitz_lower_bound(delta, k, lmax);
  json rows = json::array();
  for (const auto& r : lb.rows)
    rows.push_back({{"ell", r.ell}, {"d_tv", r.d_tv}, {"bound", r.bound}, {"pass", r.pass}});
  rep.body["inputs"] = {{"delta", delta}, {"k", k}, {"lmax", lmax}};
  rep.body["outputs"] = {{"lambda", lb.lambda},
                         {"base_gap", lb.base_gap},
                         {"rows", rows},
                         {"all_pass", lb.all_pass()}};
  if (!csv.empty()) {
    std::ofstream out(csv);
    out << "ell,d_tv,bound\n";
    for (const auto& r : lb.rows) out << r.ell << ',' << r.d_tv << ',' << r.bound << '\n';
    rep.body["outputs"]["csv"] = csv;
  }
  rep.emit(std::string("boundary influence ") + (lb.all_pass() ? "holds" : "FAILS") +
           " against 0.5*Delta^-k*ell for ell 2.." + std::to_string(lmax));
}

void run_verify_ssm(RunReport& rep, const std::string& graph_path, const std::string& model_spec,
                    int vertex, int lmax, const std::string& csv) {
  const Graph g = read_graph_file(graph_path);
  rep.add_graph_input(graph_path, g);
  const SpinModel model = load_model(model_spec);
  rep.body["inputs"]["model"] = json::parse(model.to_json_text());
  rep.body["inputs"]["vertex"] = vertex;

  const DecayFit fit = ssm_decay_fit(g, model.q_spin, vertex, lmax, OracleCaps::from_env());
  rep.body["outputs"] = {{"curve", fit.curve},
                         {"used", std::vector<int>(fit.used.begin(), fit.used.end())},
                         {"C", fit.C},
                         {"r", fit.r},
                         {"fitted", fit.fitted}};
  if (!csv.empty()) {
    std::ofstream out(csv);
    out << "ell,d_tv\n";
    for (std::size_t i = 0; i < fit.curve.size(); ++i) out << i + 1 << ',' << fit.curve[i] << '\n';
    rep.body["outputs"]["csv"] = csv;
  }
  rep.emit(fit.fitted ? "decay fit: D(ell) ~= " + fmt_double(fit.C) + " * " + fmt_double(fit.r) +
                            "^-ell over " + std::to_string(fit.curve.size()) + " radii"
                      : "too few usable points for a decay fit");
}

void run_verify_growth(RunReport& rep, const std::string& graph_path, int dim) {
  const Graph g = read_graph_file(graph_path);
  rep.add_graph_input(graph_path, g);
  rep.body["inputs"]["dim"] = dim;
  const GrowthProfile p = growth_profile(g, dim);
  rep.body["outputs"] = {{"c0", p.c0},
                         {"argmax_vertex", p.argmax_vertex},
                         {"argmax_ell", p.argmax_ell},
                         {"sampled", p.sampled}};
  if (p.sampled) rep.body["warnings"].push_back("profile over a vertex sample, not every vertex");
  rep.emit("C0 = " + fmt_double(p.c0) + " at vertex " + std::to_string(p.argmax_vertex) +
           ", radius " + std::to_string(p.argmax_ell));
}

// ------------------------------------------------------------------ bench --

void run_bench(RunReport& rep, const std::string& suite, const std::string& out_path, double eps,
               std::uint64_t seed, std::vector<int> sizes) {
  struct Entry {
    std::string family, algorithm;
    std::vector<int> sizes;
  };
  std::vector<Entry> plan;
  const std::vector<int> random_sizes = {256, 512, 1024, 2048, 4096, 8192};
  const std::vector<int> grid_sizes = {256, 512, 1024, 2048, 4096};
  if (suite == "fast") plan.push_back({"random4", "fast-hardcore", random_sizes});
  else if (suite == "baseline") plan.push_back({"random4", "weitz-baseline", random_sizes});
  else if (suite == "lattice") plan.push_back({"grid", "lattice", grid_sizes});
  else if (suite == "all") {
    plan.push_back({"random4", "fast-hardcore", random_sizes});
    plan.push_back({"random4", "weitz-baseline", random_sizes});
    plan.push_back({"grid", "lattice", grid_sizes});
  } else if (suite == "quick") {
    plan.push_back({"random4", "fast-hardcore", {32, 64, 128}});
    plan.push_back({"random4", "weitz-baseline", {32, 64}});
    plan.push_back({"grid", "lattice", {64, 256}});
  } else {
    throw ArgumentError("unknown suite: " + suite + " (fast, baseline, lattice, all, quick)");
  }
  if (!sizes.empty()) {
    if (plan.size() > 1) throw ArgumentError("--sizes only applies to single-algorithm suites");
    plan[0].sizes = std::move(sizes);
  }

  rep.body["seed"] = seed;
  rep.body["inputs"] = {{"suite", suite}, {"eps", eps}};
  std::vector<BenchRow> all_rows;
  json fits = json::array();
  for (const Entry& e : plan) {
    const ScalingReport r = scaling_run(e.family, e.algorithm, e.sizes, eps, seed);
    all_rows.insert(all_rows.end(), r.rows.begin(), r.rows.end());
    fits.push_back({{"family", r.family},
                    {"algorithm", r.algorithm},
                    {"slope", r.fit.slope},
                    {"intercept", r.fit.intercept},
                    {"r2", r.fit.r2},
                    {"stderr", r.fit.stderr_},
                    {"points", r.fit.points}});
  }
  std::ofstream out(out_path);
  if (!out) throw ArgumentError("cannot open output file: " + out_path);
  out << rows_to_csv(all_rows);
  rep.body["outputs"] = {{"rows", static_cast<int>(all_rows.size())}, {"csv", out_path}, {"fits", fits}};
  std::string summary = "wrote " + std::to_string(all_rows.size()) + " rows to " + out_path + ";";
  for (const auto& f : fits)
    summary += " " + f["algorithm"].get<std::string>() + " slope " +
               fmt_double(f["slope"].get<double>());
  rep.emit(summary);
}

// -------------------------------------------------------------------- gen --

void emit_gen(RunReport& rep, const Graph& g, const std::string& out_path, json extra) {
  write_graph_file(g, out_path);
  const Graph back = read_graph_file(out_path);
  if (back.digest() != g.digest())
    throw ArgumentError("the chosen format does not round-trip this graph (an embedding needs .json)");
  rep.body["outputs"] = {{"path", out_path},
                         {"n", g.vertex_count()},
                         {"edges", g.edge_count()},
                         {"max_degree", g.max_degree()},
                         {"digest", g.digest()}};
  for (auto& [k, v] : extra.items()) rep.body["outputs"][k] = v;
  rep.emit("wrote " + std::to_string(g.vertex_count()) + " vertices, " +
           std::to_string(g.edge_count()) + " edges to " + out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate counting and sampling for spin systems on bounded-degree graphs"};
  app.require_subcommand(1);
  const std::string command = echo_command(argc, argv);

  // count
  auto* count = app.add_subcommand("count", "partition-function estimates");
  count->require_subcommand(1);
  struct {
    std::string graph;
    double lambda = 0.5;
    int k = 1;
    double eps = 0.2;
    std::uint64_t seed = 0;
    int depth = 0;
    int threads = 1;
    std::int64_t sample_cap = 0;
    std::int64_t wall_cap_ms = 0;
  } ch;
  auto* count_hc = count->add_subcommand("hardcore", "telescoped hard-core counting");
  count_hc->add_option("--graph", ch.graph, "graph file")->required();
  count_hc->add_option("--lambda", ch.lambda, "fugacity")->required();
  count_hc->add_option("--k", ch.k, "decay exponent the truncation depth assumes");
  count_hc->add_option("--eps", ch.eps, "relative accuracy target");
  count_hc->add_option("--seed", ch.seed, "root seed");
  count_hc->add_option("--depth", ch.depth, "truncation depth override");
  count_hc->add_option("--threads", ch.threads, "worker cap");
  count_hc->add_option("--sample-cap", ch.sample_cap, "cap on averaged products per copy");
  count_hc->add_option("--wall-cap-ms", ch.wall_cap_ms, "wall-clock cap per copy");

  struct {
    std::string graph, model;
    double eps = 0.2;
    double c0 = 5.0;
    double ssm_c = 1.0;
    double ssm_r = 1.5;
    int dim = 2;
    std::uint64_t seed = 0;
    int depth = 0;
    int threads = 1;
    std::int64_t sample_cap = 0;
    std::int64_t wall_cap_ms = 0;
  } cl;
  auto* count_lat = count->add_subcommand("lattice", "boundary-table counting under polynomial growth");
  count_lat->add_option("--graph", cl.graph, "graph file")->required();
  count_lat->add_option("--model", cl.model, "model JSON (inline or a path)")->required();
  count_lat->add_option("--eps", cl.eps, "relative accuracy target")->required();
  count_lat->add_option("--c0", cl.c0, "growth constant: |B(ell)| <= c0 * ell^dim");
  count_lat->add_option("--ssm-c", cl.ssm_c, "decay prefactor C");
  count_lat->add_option("--ssm-r", cl.ssm_r, "decay rate r > 1");
  count_lat->add_option("--dim", cl.dim, "growth dimension");
  count_lat->add_option("--seed", cl.seed, "root seed");
  count_lat->add_option("--depth", cl.depth, "table depth override");
  count_lat->add_option("--threads", cl.threads, "worker cap");
  count_lat->add_option("--sample-cap", cl.sample_cap, "cap on averaged products per copy");
  count_lat->add_option("--wall-cap-ms", cl.wall_cap_ms, "wall-clock cap per copy");

  // exact
  struct {
    std::string graph, model, pin;
    int vertex = -1;
  } ex;
  auto* exact = app.add_subcommand("exact", "enumeration/sweep oracle");
  exact->add_option("--graph", ex.graph, "graph file")->required();
  exact->add_option("--model", ex.model, "model JSON (inline or a path)")->required();
  exact->add_option("--pin", ex.pin, "pinned spins, v=s[,v=s...]");
  exact->add_option("--vertex", ex.vertex, "also report this vertex's conditional marginal");

  // marginal
  struct {
    std::string graph;
    double lambda = 0.5;
    int vertex = 0;
    int reps = 1000;
    int k = 1;
    std::uint64_t seed = 0;
    int depth = 0;
  } mg;
  auto* marginal = app.add_subcommand("marginal", "randomized unoccupied-probability estimates");
  marginal->add_option("--graph", mg.graph, "graph file")->required();
  marginal->add_option("--lambda", mg.lambda, "fugacity")->required();
  marginal->add_option("--vertex", mg.vertex, "target vertex")->required();
  marginal->add_option("--reps", mg.reps, "independent estimates");
  marginal->add_option("--k", mg.k, "decay exponent the truncation depth assumes");
  marginal->add_option("--seed", mg.seed, "root seed");
  marginal->add_option("--depth", mg.depth, "truncation depth override");

  // sample
  struct {
    std::string graph;
    double lambda = 0.5;
    int vertex = 0;
    int reps = 1000;
    double eps = 0.1;
    std::int64_t budget = 0;
    std::uint64_t seed = 0;
  } sp;
  auto* sample = app.add_subcommand("sample", "budgeted single-vertex draws");
  sample->add_option("--graph", sp.graph, "graph file")->required();
  sample->add_option("--lambda", sp.lambda, "fugacity")->required();
  sample->add_option("--vertex", sp.vertex, "target vertex")->required();
  sample->add_option("--reps", sp.reps, "number of draws");
  sample->add_option("--eps", sp.eps, "per-draw exhaustion target sizing the step budget");
  sample->add_option("--budget", sp.budget, "explicit step budget (overrides --eps)");
  sample->add_option("--seed", sp.seed, "root seed");

  // verify
  auto* verify = app.add_subcommand("verify", "deterministic checks and profiles");
  verify->require_subcommand(1);
  struct {
    int delta = 4;
    int k = 1;
    int lmax = 10;
    std::string csv;
  } vlb;
  auto* v_lb = verify->add_subcommand("lower-bound", "two-boundary influence floor on the regular tree");
  v_lb->add_option("--delta", vlb.delta, "tree degree")->required();
  v_lb->add_option("--k", vlb.k, "decay exponent")->required();
  v_lb->add_option("--lmax", vlb.lmax, "largest boundary radius");
  v_lb->add_option("--csv", vlb.csv, "also write the decay curve as CSV");

  struct {
    std::string graph, model, csv;
    int vertex = 0;
    int lmax = 3;
  } vssm;
  auto* v_ssm = verify->add_subcommand("ssm", "worst-case boundary-influence decay fit");
  v_ssm->add_option("--graph", vssm.graph, "graph file")->required();
  v_ssm->add_option("--model", vssm.model, "model JSON (inline or a path)")->required();
  v_ssm->add_option("--vertex", vssm.vertex, "center vertex");
  v_ssm->add_option("--lmax", vssm.lmax, "largest boundary radius");
  v_ssm->add_option("--csv", vssm.csv, "also write the decay curve as CSV");

  struct {
    std::string graph;
    int dim = 2;
  } vg;
  auto* v_growth = verify->add_subcommand("growth", "ball-growth constant profile");
  v_growth->add_option("--graph", vg.graph, "graph file")->required();
  v_growth->add_option("--dim", vg.dim, "growth dimension")->required();

  // bench
  struct {
    std::string suite, out;
    double eps = 0.2;
    std::uint64_t seed = 1;
    std::vector<int> sizes;
  } bn;
  auto* bench = app.add_subcommand("bench", "scaling suites with deterministic step counters");
  bench->add_option("--suite", bn.suite, "fast, baseline, lattice, all, quick")->required();
  bench->add_option("--out", bn.out, "CSV output path")->required();
  bench->add_option("--eps", bn.eps, "per-row accuracy target");
  bench->add_option("--seed", bn.seed, "root seed");
  bench->add_option("--sizes", bn.sizes, "size window override")->delimiter(',');

  // gen
  auto* gen = app.add_subcommand("gen", "graph generators");
  gen->require_subcommand(1);
  struct {
    int w = 4, h = 4;
    std::string out;
  } gg;
  auto* gen_grid_cmd = gen->add_subcommand("grid", "w x h grid");
  gen_grid_cmd->add_option("--width", gg.w, "width")->required();
  gen_grid_cmd->add_option("--height", gg.h, "height")->required();
  gen_grid_cmd->add_option("--out", gg.out, "output file")->required();

  struct {
    int n = 32;
    std::string out;
  } gq;
  auto* gen_quad = gen->add_subcommand("quad-boundary", "H-tree with a quadratically growing boundary");
  gen_quad->add_option("--n", gq.n, "target boundary distance (even, >= 16)")->required();
  gen_quad->add_option("--out", gq.out, "output file")->required();

  struct {
    int delta = 3, depth = 3;
    std::string out;
  } gt;
  auto* gen_tree = gen->add_subcommand("tree", "regular tree");
  gen_tree->add_option("--delta", gt.delta, "degree")->required();
  gen_tree->add_option("--depth", gt.depth, "depth")->required();
  gen_tree->add_option("--out", gt.out, "output file")->required();

  struct {
    int n = 64, delta = 4;
    std::uint64_t seed = 0;
    std::string out;
  } gr;
  auto* gen_random = gen->add_subcommand("random", "connected bounded-degree random graph");
  gen_random->add_option("--n", gr.n, "vertices")->required();
  gen_random->add_option("--delta", gr.delta, "maximum degree")->required();
  gen_random->add_option("--seed", gr.seed, "root seed");
  gen_random->add_option("--out", gr.out, "output file")->required();

  try {
    app.parse(argc, argv);

    RunReport rep(command);
    if (count_hc->parsed())
      run_count_hardcore(rep, ch.graph, ch.lambda, ch.k, ch.eps, ch.seed, ch.depth, ch.threads,
                         ch.sample_cap, ch.wall_cap_ms);
    else if (count_lat->parsed())
      run_count_lattice(rep, cl.graph, cl.model, cl.eps, cl.c0, cl.ssm_c, cl.ssm_r, cl.dim, cl.seed,
                        cl.depth, cl.threads, cl.sample_cap, cl.wall_cap_ms);
    else if (exact->parsed())
      run_exact(rep, ex.graph, ex.model, ex.pin, ex.vertex);
    else if (marginal->parsed())
      run_marginal(rep, mg.graph, mg.lambda, mg.vertex, mg.reps, mg.k, mg.seed, mg.depth);
    else if (sample->parsed())
      run_sample(rep, sp.graph, sp.lambda, sp.vertex, sp.reps, sp.eps, sp.budget, sp.seed);
    else if (v_lb->parsed())
      run_verify_lower_bound(rep, vlb.delta, vlb.k, vlb.lmax, vlb.csv);
    else if (v_ssm->parsed())
      run_verify_ssm(rep, vssm.graph, vssm.model, vssm.vertex, vssm.lmax, vssm.csv);
    else if (v_growth->parsed())
      run_verify_growth(rep, vg.graph, vg.dim);
    else if (bench->parsed())
      run_bench(rep, bn.suite, bn.out, bn.eps, bn.seed, bn.sizes);
    else if (gen_grid_cmd->parsed())
      emit_gen(rep, subquad::gen_grid(gg.w, gg.h), gg.out, {});
    else if (gen_quad->parsed()) {
      const QuadBoundaryGraph qb = gen_quad_boundary(gq.n);
      emit_gen(rep, qb.graph, gq.out,
               {{"start", qb.start},
                {"target_distance", qb.target_distance},
                {"leaf_count", qb.leaf_count}});
    } else if (gen_tree->parsed())
      emit_gen(rep, gen_regular_tree(gt.delta, gt.depth), gt.out, {});
    else if (gen_random->parsed())
      emit_gen(rep, gen_random_bounded(gr.n, gr.delta, gr.seed), gr.out, {{"seed", gr.seed}});
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const OutOfRegime& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InfeasibleConditioning& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const GrowthAssumptionViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SamplerStuck& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const OracleTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
