// poolkit: design, evaluate, optimize, simulate, and decode pooled screens.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "poolkit/decoder.hpp"
#include "poolkit/design.hpp"
#include "poolkit/manifest.hpp"
#include "poolkit/metrics.hpp"
#include "poolkit/optimizer.hpp"
#include "poolkit/scheduling.hpp"
#include "poolkit/screening.hpp"

namespace {

using namespace poolkit;

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitPrecision = 4;

std::uint64_t resolve_seed(CLI::Option* opt, std::uint64_t value) {
  if (opt->count() > 0) return value;
  if (const char* env = std::getenv("POOLKIT_SEED"))
    return std::strtoull(env, nullptr, 10);
  return value;
}

struct ManifestSink {
  RunManifest manifest;
  std::string path;  // empty = derive from first output

  void param(const std::string& key, const std::string& value) {
    manifest.parameters[key] = value;
  }
  template <class T>
  void param(const std::string& key, T value) {
    std::ostringstream os;
    os << value;
    manifest.parameters[key] = os.str();
  }
  void input(const std::string& file) {
    if (!file.empty()) manifest.input_digests[file] = file_digest(file);
  }
  void output(const std::string& file) {
    if (file.empty()) return;
    manifest.output_digests[file] = file_digest(file);
    if (path.empty()) path = file + ".manifest.json";
  }
  void flush() {
    if (!path.empty()) write_manifest(path, manifest);
  }
};

DesignShape shape_from_design(const PoolingDesign& d) {
  if (d.k < 1)
    throw std::invalid_argument("design is not k-uniform; pass --v/--k explicitly");
  return DesignShape(d.v, d.k);
}

void print_metrics(const MetricsResult& m, const LibraryModel& model,
                   DesignShape shape) {
  std::cout << "method=" << m.method << " digits=" << m.digits << "\n";
  std::cout << "n=" << model.n << " v=" << shape.v << " k=" << shape.k
            << " c=" << model.c << "\n";
  std::cout.precision(10);
  std::cout << "unresolved_negatives=" << static_cast<double>(m.n_bar) << "\n"
            << "unresolved_positives=" << static_cast<double>(m.p_bar) << "\n"
            << "resolved_negatives=" << static_cast<double>(m.resolved_negatives)
            << "\n"
            << "resolved_positives=" << static_cast<double>(m.resolved_positives)
            << "\n"
            << "confirmatory_load=" << static_cast<double>(m.confirmatory_load)
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"poolkit: nonadaptive pooled-screen design and decoding"};
  app.require_subcommand(1);

  unsigned precision_digits = kDefaultPrecisionDigits;
  int threads = 1;
  app.add_option("--precision-digits", precision_digits,
                 "working precision for high-precision evaluations")
      ->capture_default_str();
  app.add_option("--threads", threads, "internal parallelism cap")
      ->capture_default_str();

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "generate a pooling design");
  std::string gen_kind = "random";
  long gen_n = 0;
  int gen_v = 0, gen_k = 0, gen_t = -1;
  int gen_balance_min = -1, gen_balance_max = -1;
  long gen_retries = 200000;
  int gen_lots = 0, gen_dishes = 8, gen_rows = 8, gen_cols = 12;
  int gen_side = 0, gen_configs = 2;
  std::uint64_t gen_seed = 0;
  std::string gen_out, gen_manifest;
  gen->add_option("--kind", gen_kind, "random|packing|rowcol|cubic")
      ->capture_default_str();
  gen->add_option("--n", gen_n, "clone count");
  gen->add_option("--v", gen_v, "pool count");
  gen->add_option("--k", gen_k, "pools per clone");
  gen->add_option("--t", gen_t, "max pairwise intersection (packing)");
  gen->add_option("--balance-min", gen_balance_min, "min clones per pool");
  gen->add_option("--balance-max", gen_balance_max, "max clones per pool");
  gen->add_option("--retries", gen_retries, "generation retry budget");
  gen->add_option("--lots", gen_lots, "row-column: lots");
  gen->add_option("--dishes", gen_dishes, "row-column: dishes per lot");
  gen->add_option("--rows", gen_rows, "row-column: rows per dish");
  gen->add_option("--cols", gen_cols, "row-column: columns per dish");
  gen->add_option("--side", gen_side, "cubic: lattice side");
  gen->add_option("--configs", gen_configs, "cubic: configurations");
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output design file")->required();
  gen->add_option("--manifest", gen_manifest, "manifest path");

  // ---- validate ----
  auto* val = app.add_subcommand("validate", "inspect and check a design file");
  std::string val_design;
  int val_k = -1, val_t = -1, val_bmin = -1, val_bmax = -1;
  val->add_option("--design", val_design)->required();
  val->add_option("--expect-k", val_k, "expected uniform k");
  val->add_option("--expect-t", val_t, "expected intersection bound");
  val->add_option("--expect-balance-min", val_bmin);
  val->add_option("--expect-balance-max", val_bmax);

  // ---- evaluate ----
  auto* ev = app.add_subcommand("evaluate", "closed-form design metrics");
  std::string ev_design, ev_method = "exact", ev_manifest;
  long ev_n = 0;
  int ev_v = 0, ev_k = 0;
  double ev_c = 0;
  ev->add_option("--design", ev_design, "design file (shape source)");
  ev->add_option("--n", ev_n);
  ev->add_option("--v", ev_v);
  ev->add_option("--k", ev_k);
  ev->add_option("--c", ev_c, "coverage")->required();
  ev->add_option("--method", ev_method, "exact|asymptotic|independent")
      ->capture_default_str();
  ev->add_option("--manifest", ev_manifest);

  // ---- optimize ----
  auto* opt = app.add_subcommand("optimize", "minimum pools for a target");
  long opt_n = 0;
  double opt_c = 0, opt_fraction = 0.5;
  std::string opt_method = "approx7";
  int opt_kmin = 1, opt_kmax = 40, opt_vmin = 1, opt_vmax = 2048;
  int opt_k_fixed = 0;
  std::string opt_manifest;
  opt->add_option("--n", opt_n)->required();
  opt->add_option("--c", opt_c)->required();
  opt->add_option("--fraction", opt_fraction)->capture_default_str();
  opt->add_option("--method", opt_method, "approx7|exact5")->capture_default_str();
  opt->add_option("--k", opt_k_fixed, "force this k");
  opt->add_option("--k-min", opt_kmin);
  opt->add_option("--k-max", opt_kmax);
  opt->add_option("--v-min", opt_vmin);
  opt->add_option("--v-max", opt_vmax);
  opt->add_option("--manifest", opt_manifest);

  // ---- sweep ----
  auto* sw = app.add_subcommand("sweep", "grid of optimizer results (CSV)");
  long sw_nmin = 1000, sw_nmax = 100000;
  double sw_cmin = 0.25, sw_cmax = 16;
  int sw_nsteps = 5, sw_csteps = 5;
  double sw_fraction = 0.5;
  std::string sw_method = "approx7", sw_out, sw_manifest;
  sw->add_option("--n-min", sw_nmin)->capture_default_str();
  sw->add_option("--n-max", sw_nmax)->capture_default_str();
  sw->add_option("--n-steps", sw_nsteps)->capture_default_str();
  sw->add_option("--c-min", sw_cmin)->capture_default_str();
  sw->add_option("--c-max", sw_cmax)->capture_default_str();
  sw->add_option("--c-steps", sw_csteps)->capture_default_str();
  sw->add_option("--fraction", sw_fraction)->capture_default_str();
  sw->add_option("--method", sw_method)->capture_default_str();
  sw->add_option("--out", sw_out)->required();
  sw->add_option("--manifest", sw_manifest);

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Monte Carlo screen simulation");
  std::string sim_design, sim_out, sim_manifest;
  long sim_n = 0;
  int sim_v = 0, sim_k = 0;
  double sim_c = 0, sim_fp = 0, sim_fn = 0;
  long sim_reps = 10000;
  std::uint64_t sim_seed = 0;
  sim->add_option("--design", sim_design, "fixed design instance");
  sim->add_option("--n", sim_n, "random k-sets mode: clone count");
  sim->add_option("--v", sim_v, "random k-sets mode: pool count");
  sim->add_option("--k", sim_k, "random k-sets mode: pools per clone");
  sim->add_option("--c", sim_c)->required();
  sim->add_option("--fp", sim_fp, "false-positive pool rate");
  sim->add_option("--fn", sim_fn, "false-negative pool rate");
  sim->add_option("--replicates", sim_reps)->capture_default_str();
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed);
  sim->add_option("--out", sim_out, "CSV report path");
  sim->add_option("--manifest", sim_manifest);

  // ---- decode ----
  auto* dec = app.add_subcommand("decode", "posterior clone ranking from assays");
  std::string dec_design, dec_assay, dec_method = "gibbs", dec_out, dec_manifest;
  double dec_c = 0, dec_fp = 0.01, dec_fn = 0.1;
  long dec_sweeps = 600, dec_burnin = 100;
  int dec_chains = 4;
  std::uint64_t dec_seed = 0;
  dec->add_option("--design", dec_design)->required();
  dec->add_option("--assay", dec_assay, "0/1 pool outcome file")->required();
  dec->add_option("--c", dec_c)->required();
  dec->add_option("--fp", dec_fp)->capture_default_str();
  dec->add_option("--fn", dec_fn)->capture_default_str();
  dec->add_option("--method", dec_method, "gibbs|exact")->capture_default_str();
  dec->add_option("--sweeps", dec_sweeps)->capture_default_str();
  dec->add_option("--burn-in", dec_burnin)->capture_default_str();
  dec->add_option("--chains", dec_chains)->capture_default_str();
  auto* dec_seed_opt = dec->add_option("--seed", dec_seed);
  dec->add_option("--out", dec_out, "posterior CSV")->required();
  dec->add_option("--manifest", dec_manifest);

  // ---- rank ----
  auto* rk = app.add_subcommand("rank", "top candidates from a posterior CSV");
  std::string rk_post;
  int rk_budget = 0;
  rk->add_option("--posteriors", rk_post, "decode output CSV")->required();
  rk->add_option("--budget", rk_budget)->required();

  // ---- schedule ----
  auto* sch = app.add_subcommand("schedule", "well-to-pool transfer list");
  std::string sch_design, sch_out, sch_manifest;
  double sch_volume = 400.0;
  int sch_rows = 8, sch_cols = 12, sch_plates = 0;
  sch->add_option("--design", sch_design)->required();
  sch->add_option("--volume-ul", sch_volume)->capture_default_str();
  sch->add_option("--rows", sch_rows)->capture_default_str();
  sch->add_option("--cols", sch_cols)->capture_default_str();
  sch->add_option("--plates", sch_plates, "0 = unlimited");
  sch->add_option("--out", sch_out, "transfer CSV")->required();
  sch->add_option("--manifest", sch_manifest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    PrecisionGuard precision(precision_digits);
    MetricsOptions mopts;
    mopts.digits = precision_digits;

    if (gen->parsed()) {
      ManifestSink ms;
      ms.manifest.subcommand = "generate";
      ms.path = gen_manifest;
      const std::uint64_t seed = resolve_seed(gen_seed_opt, gen_seed);
      ms.manifest.seed = seed;
      PoolingDesign d;
      if (gen_kind == "random") {
        d = generate_random_ksets(static_cast<int>(gen_n),
                                  DesignShape(gen_v, gen_k), RngSeed{seed});
      } else if (gen_kind == "packing") {
        PackingConstraints pc;
        pc.t = gen_t < 0 ? gen_k : gen_t;
        pc.max_retries = gen_retries;
        if (gen_balance_min >= 0 || gen_balance_max >= 0) {
          if (gen_balance_min < 0 || gen_balance_max < 0)
            throw CLI::ValidationError("--balance-min/--balance-max come together");
          pc.balance = {gen_balance_min, gen_balance_max};
        }
        d = generate_ksets_packing(static_cast<int>(gen_n),
                                   DesignShape(gen_v, gen_k), pc, RngSeed{seed});
      } else if (gen_kind == "rowcol") {
        d = generate_row_column(gen_lots, gen_dishes, gen_rows, gen_cols);
      } else if (gen_kind == "cubic") {
        d = generate_cubic(static_cast<int>(gen_n), gen_side, gen_configs,
                           RngSeed{seed});
      } else {
        throw CLI::ValidationError("unknown --kind " + gen_kind);
      }
      write_design_file(gen_out, d);
      ms.param("kind", gen_kind);
      ms.param("n", d.n);
      ms.param("v", d.v);
      ms.param("k", d.k);
      ms.param("t", d.t);
      if (gen_kind == "packing" && gen_balance_min >= 0) {
        ms.param("balance_min", gen_balance_min);
        ms.param("balance_max", gen_balance_max);
        ms.param("retries", gen_retries);
      }
      if (gen_kind == "rowcol") {
        ms.param("lots", gen_lots);
        ms.param("dishes", gen_dishes);
        ms.param("rows", gen_rows);
        ms.param("cols", gen_cols);
      }
      if (gen_kind == "cubic") {
        ms.param("side", gen_side);
        ms.param("configs", gen_configs);
      }
      ms.output(gen_out);
      ms.flush();
      std::cout << "wrote " << gen_out << " (n=" << d.n << " v=" << d.v
                << " k=" << d.k << ")\n";
      return 0;
    }

    if (val->parsed()) {
      const PoolingDesign d = read_design_file(val_design);
      std::optional<ExpectedProperties> expected;
      if (val_k >= 0 || val_t >= 0 || val_bmin >= 0) {
        expected.emplace();
        if (val_k >= 0) expected->k = val_k;
        if (val_t >= 0) expected->t = val_t;
        if (val_bmin >= 0) expected->balance = {val_bmin, val_bmax};
      }
      const ValidationReport rep = validate(d, expected);
      std::cout << "n=" << rep.n << " v=" << rep.v << " kind=" << to_string(d.kind)
                << "\n";
      std::cout << "k_uniform=" << (rep.k_uniform ? "yes" : "no") << " k=" << rep.k
                << "\n";
      std::cout << "duplicate_kset_pairs=" << rep.duplicate_kset_pairs << "\n";
      if (rep.pairwise_checked)
        std::cout << "max_pairwise_intersection=" << rep.max_pairwise_intersection
                  << "\n";
      else
        std::cout << "max_pairwise_intersection=skipped\n";
      std::cout << "pool_size_min=" << rep.min_pool_size
                << " pool_size_max=" << rep.max_pool_size << "\n";
      for (const auto& viol : rep.violations)
        std::cout << "violation: " << viol << "\n";
      return rep.ok() ? 0 : kExitInfeasible;
    }

    if (ev->parsed()) {
      ManifestSink ms;
      ms.manifest.subcommand = "evaluate";
      ms.path = ev_manifest;
      DesignShape shape(1, 1);
      long n = ev_n;
      if (!ev_design.empty()) {
        const PoolingDesign d = read_design_file(ev_design);
        ms.input(ev_design);
        shape = shape_from_design(d);
        n = d.n;
      } else {
        if (ev_n <= 0 || ev_v <= 0 || ev_k <= 0)
          throw CLI::ValidationError("need --design or all of --n/--v/--k");
        shape = DesignShape(ev_v, ev_k);
      }
      LibraryModel model(n, ev_c);
      MetricsMethod method;
      if (ev_method == "exact")
        method = MetricsMethod::exact;
      else if (ev_method == "asymptotic")
        method = MetricsMethod::asymptotic;
      else if (ev_method == "independent")
        method = MetricsMethod::independent_pools;
      else
        throw CLI::ValidationError("unknown --method " + ev_method);
      if (method == MetricsMethod::exact)
        std::cout << "exact positives summands: " << exact_positives_summands(shape)
                  << "\n";
      const MetricsResult m = evaluate_random_ksets(model, shape, method, mopts);
      print_metrics(m, model, shape);
      ms.param("method", ev_method);
      ms.param("n", model.n);
      ms.param("v", shape.v);
      ms.param("k", shape.k);
      ms.param("c", model.c);
      ms.flush();
      return 0;
    }

    if (opt->parsed()) {
      LibraryModel model(opt_n, opt_c);
      OptimizationTarget target;
      target.fraction = opt_fraction;
      if (opt_method != "exact5" && opt_method != "approx7")
        throw CLI::ValidationError("unknown --method " + opt_method);
      target.method = opt_method == "exact5" ? OptMethod::exact_eq_positives
                                             : OptMethod::approx_correlated;
      if (opt_k_fixed > 0)
        target.k_range = {opt_k_fixed, opt_k_fixed};
      else
        target.k_range = {opt_kmin, opt_kmax};
      target.v_range = {opt_vmin, opt_vmax};
      target.metrics = mopts;
      const OptimizationResult r = min_pools(model, target);
      std::cout << "v=" << r.v_min << " k=" << r.k_opt << "\n";
      std::cout.precision(10);
      std::cout << "resolved_expectation=" << r.achieved << "\n"
                << "unresolved_negatives=" << r.unresolved_negatives << "\n"
                << "clones_per_pool=" << r.clones_per_pool << "\n";
      if (!opt_manifest.empty()) {
        ManifestSink ms;
        ms.manifest.subcommand = "optimize";
        ms.path = opt_manifest;
        ms.param("n", opt_n);
        ms.param("c", opt_c);
        ms.param("fraction", opt_fraction);
        ms.param("method", opt_method);
        ms.param("v_min", r.v_min);
        ms.param("k_opt", r.k_opt);
        ms.flush();
      }
      return 0;
    }

    if (sw->parsed()) {
      const auto ns = log_space_long(sw_nmin, sw_nmax, sw_nsteps);
      const auto cs = log_space(sw_cmin, sw_cmax, sw_csteps);
      const OptMethod method = sw_method == "exact5" ? OptMethod::exact_eq_positives
                                                     : OptMethod::approx_correlated;
      const auto rows = sweep_grid(ns, cs, sw_fraction, method, threads);
      std::ofstream out(sw_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + sw_out);
      write_sweep_csv(out, rows);
      out.close();
      ManifestSink ms;
      ms.manifest.subcommand = "sweep";
      ms.path = sw_manifest;
      ms.param("n_min", sw_nmin);
      ms.param("n_max", sw_nmax);
      ms.param("n_steps", sw_nsteps);
      ms.param("c_min", sw_cmin);
      ms.param("c_max", sw_cmax);
      ms.param("c_steps", sw_csteps);
      ms.param("fraction", sw_fraction);
      ms.param("method", sw_method);
      ms.output(sw_out);
      ms.flush();
      std::cout << "wrote " << sw_out << " (" << rows.size() << " cells)\n";
      return 0;
    }

    if (sim->parsed()) {
      const std::uint64_t seed = resolve_seed(sim_seed_opt, sim_seed);
      ErrorModel errors{sim_fp, sim_fn};
      SimulationResult r;
      ManifestSink ms;
      ms.manifest.subcommand = "simulate";
      ms.path = sim_manifest;
      ms.manifest.seed = seed;
      if (!sim_design.empty()) {
        const PoolingDesign d = read_design_file(sim_design);
        ms.input(sim_design);
        LibraryModel model(d.n, sim_c);
        r = simulate_metrics(d, model, errors, sim_reps, RngSeed{seed});
      } else {
        if (sim_n <= 0 || sim_v <= 0 || sim_k <= 0)
          throw CLI::ValidationError("need --design or all of --n/--v/--k");
        LibraryModel model(sim_n, sim_c);
        r = simulate_metrics_random_ksets(DesignShape(sim_v, sim_k), model, errors,
                                          sim_reps, RngSeed{seed});
      }
      write_simulation_csv(std::cout, r);
      if (!sim_out.empty()) {
        std::ofstream out(sim_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + sim_out);
        write_simulation_csv(out, r);
        out.close();
        ms.output(sim_out);
      }
      ms.param("c", sim_c);
      ms.param("fp", sim_fp);
      ms.param("fn", sim_fn);
      ms.param("replicates", sim_reps);
      ms.flush();
      return 0;
    }

    if (dec->parsed()) {
      const std::uint64_t seed = resolve_seed(dec_seed_opt, dec_seed);
      const PoolingDesign d = read_design_file(dec_design);
      const AssayOutcome outcome = read_assay_file(dec_assay);
      LibraryModel model(d.n, dec_c);
      ErrorModel errors{dec_fp, dec_fn};
      PosteriorRanking ranking;
      if (dec_method == "exact") {
        ranking = posterior_exact(d, outcome, errors, model);
      } else if (dec_method == "gibbs") {
        ranking = posterior_gibbs(d, outcome, errors, model, dec_sweeps, dec_burnin,
                                  dec_chains, RngSeed{seed});
        if (!ranking.mixed)
          std::clog << "warning: chains disagree (max marginal spread "
                    << ranking.max_chain_spread << ")\n";
      } else {
        throw CLI::ValidationError("unknown --method " + dec_method);
      }
      std::ofstream out(dec_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + dec_out);
      write_posterior_csv(out, ranking);
      out.close();
      ManifestSink ms;
      ms.manifest.subcommand = "decode";
      ms.path = dec_manifest;
      ms.manifest.seed = seed;
      ms.input(dec_design);
      ms.input(dec_assay);
      ms.param("method", dec_method);
      ms.param("c", dec_c);
      ms.param("fp", dec_fp);
      ms.param("fn", dec_fn);
      ms.param("sweeps", dec_sweeps);
      ms.param("burn_in", dec_burnin);
      ms.param("chains", dec_chains);
      ms.output(dec_out);
      ms.flush();
      return 0;
    }

    if (rk->parsed()) {
      std::ifstream in(rk_post);
      if (!in) throw std::runtime_error("cannot read " + rk_post);
      std::string line;
      std::getline(in, line);  // header
      struct Row {
        int clone;
        double posterior;
        int rank;
      };
      std::vector<Row> rows;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        Row row{};
        double se;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf,%d", &row.clone, &row.posterior,
                        &se, &row.rank) != 4)
          throw std::invalid_argument("bad posterior CSV line: " + line);
        rows.push_back(row);
      }
      if (rk_budget < 0 || rk_budget > static_cast<int>(rows.size()))
        throw CLI::ValidationError("--budget outside [0, n]");
      std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.posterior != b.posterior) return a.posterior > b.posterior;
        return a.clone < b.clone;
      });
      std::cout << "clone_id,posterior\n";
      for (int i = 0; i < rk_budget; ++i)
        std::cout << rows[static_cast<std::size_t>(i)].clone << ','
                  << rows[static_cast<std::size_t>(i)].posterior << "\n";
      return 0;
    }

    if (sch->parsed()) {
      const PoolingDesign d = read_design_file(sch_design);
      PlateLayout layout;
      layout.rows = sch_rows;
      layout.cols = sch_cols;
      layout.plates = sch_plates;
      const TransferList list = emit_schedule(d, layout, sch_volume);
      std::ofstream out(sch_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + sch_out);
      write_transfer_csv(out, list);
      out.close();
      const ScheduleSummary sum = schedule_summary(list);
      std::cout << "transfers=" << list.transfers.size()
                << " total_volume_ml=" << sum.total_volume_ul / 1000.0 << "\n";
      ManifestSink ms;
      ms.manifest.subcommand = "schedule";
      ms.path = sch_manifest;
      ms.input(sch_design);
      ms.param("volume_ul", sch_volume);
      ms.param("rows", sch_rows);
      ms.param("cols", sch_cols);
      ms.output(sch_out);
      ms.flush();
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PrecisionError& e) {
    std::cerr << "precision error: " << e.what() << "\n";
    return kExitPrecision;
  } catch (const GenerationExhausted& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
