// olagg: dataset generation, shuffling, query runs and experiments.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "olagg/core/error.h"
#include "olagg/engine/query.h"
#include "olagg/harness/bench.h"
#include "olagg/harness/experiment.h"
#include "olagg/harness/monte_carlo.h"
#include "olagg/harness/oracle.h"
#include "olagg/harness/trace.h"
#include "olagg/randomizer/shuffle.h"
#include "olagg/service/events.h"
#include "olagg/service/server.h"

using namespace olagg;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Common {
  uint32_t nodes = 8;
  std::string model;
  double confidence = -1;  // < 0: keep the plan's
  uint32_t snapshot_ms = 1000;
  std::vector<std::string> delays;
  std::vector<std::string> kills;
  uint64_t seed = 1;
  std::string out;
  uint32_t threads = 1;
  std::size_t chunk = kDefaultChunkCapacity;
  std::string plan_file;
  std::string plan_json;
};

void add_common(CLI::App* app, Common& c, bool plan) {
  app->add_option("--nodes", c.nodes, "Number of worker nodes")->check(CLI::PositiveNumber);
  app->add_option("--model", c.model, "single | multiple | sync");
  app->add_option("--confidence", c.confidence, "Confidence level in (0, 1)");
  app->add_option("--snapshot-ms", c.snapshot_ms, "Snapshot period in milliseconds");
  app->add_option("--delay-node", c.delays, "id:ms delay per chunk on one node");
  app->add_option("--kill-node", c.kills, "id:frac kill a node after this fraction of its partition");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--out", c.out, "Output path");
  app->add_option("--threads", c.threads, "Worker threads per node")->check(CLI::PositiveNumber);
  app->add_option("--chunk", c.chunk, "Tuples per chunk")->check(CLI::PositiveNumber);
  if (plan) {
    app->add_option("--plan", c.plan_file, "Plan JSON file");
    app->add_option("--plan-json", c.plan_json, "Plan JSON text");
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

QueryPlan load_plan(const Common& c, const char* fallback) {
  std::string text = fallback;
  if (!c.plan_file.empty()) text = slurp(c.plan_file);
  if (!c.plan_json.empty()) text = c.plan_json;
  QueryPlan plan = parse_plan(text);
  if (!c.model.empty()) plan.model = parse_model(c.model);
  if (c.confidence >= 0) plan.confidence = c.confidence;
  validate_confidence(plan.confidence);
  return plan;
}

engine::EngineConfig engine_config(const Common& c) {
  engine::EngineConfig cfg;
  cfg.threads_per_node = c.threads;
  cfg.chunk_capacity = c.chunk;
  for (const auto& d : c.delays) engine::parse_delay(d, cfg.faults);
  for (const auto& k : c.kills) engine::parse_kill(k, cfg.faults);
  return cfg;
}

// Output stream: the --out file or stdout.
struct Sink {
  std::ofstream file;
  std::ostream* out = &std::cout;
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) raise(ErrorCode::kIo, "cannot write " + path);
    out = &file;
  }
  std::ostream& operator*() { return *out; }
};

void add_generator(CLI::App* app, harness::GeneratorSpec& g, std::string& kind) {
  app->add_option("--kind", kind, "uniform | zipf | outlier | lineitem | supplier");
  app->add_option("--n", g.n, "Tuples");
  app->add_option("--lo", g.lo, "Uniform: lowest value");
  app->add_option("--hi", g.hi, "Uniform: highest value");
  app->add_option("--domain", g.domain, "Zipf: distinct values");
  app->add_option("--skew", g.skew, "Zipf: exponent");
  app->add_option("--outliers", g.outliers, "Outlier: count");
  app->add_option("--magnitude", g.magnitude, "Outlier: value");
}

void print_summary(const engine::Query& q, const engine::Snapshot& s) {
  std::cerr << "status=" << engine::query_status_name(s.status) << " sample_fraction=" << s.sample_fraction
            << " tuples=" << s.tuples_merged << " degraded=" << (s.degraded ? 1 : 0);
  for (auto id : q.lost_partitions()) std::cerr << " lost=" << id;
  std::cerr << '\n';
}

void write_estimates(std::ostream& out, const engine::Snapshot& s, const std::vector<uda::GroupValue>* exact) {
  out << "group,aggregate,available,estimator,lower,upper,exact\n";
  for (std::size_t g = 0; g < s.groups.size(); ++g) {
    const auto& grp = s.groups[g];
    for (std::size_t a = 0; a < grp.aggregates.size(); ++a) {
      const auto& o = grp.aggregates[a];
      out << uda::format_key(grp.key) << ',' << a << ',' << (o.available() ? 1 : 0) << ',';
      if (o.available()) {
        out << service::decimal(o->estimator) << ',' << service::decimal(o->lower) << ','
            << service::decimal(o->upper);
      } else {
        out << ",,";
      }
      out << ',';
      if (exact) {
        for (const auto& e : *exact) {
          if (e.key == grp.key) out << service::decimal(e.values.at(a));
        }
      }
      out << '\n';
    }
  }
}

volatile std::sig_atomic_t g_signal = 0;
void on_signal(int sig) { g_signal = sig; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online aggregation engine and experiments"};
  app.require_subcommand(1);

  Common c;
  harness::GeneratorSpec gen;
  std::string kind = "uniform";
  std::string in_path, data_dir;
  bool local_only = false;
  bool truth = false;
  uint32_t trials = 100;
  harness::BenchSpec bench;
  std::string address = "127.0.0.1";
  uint16_t port = 8080;

  auto* gen_cmd = app.add_subcommand("gen", "Generate a dataset CSV");
  add_generator(gen_cmd, gen, kind);
  gen_cmd->add_option("--seed", c.seed, "Random seed");
  gen_cmd->add_option("--out", c.out, "Output CSV")->required();

  auto* shuffle_cmd = app.add_subcommand("shuffle", "Randomize a CSV onto node partitions");
  shuffle_cmd->add_option("--in", in_path, "Input CSV")->required();
  shuffle_cmd->add_option("--nodes", c.nodes, "Partitions")->check(CLI::PositiveNumber);
  shuffle_cmd->add_option("--seed", c.seed, "Random seed");
  shuffle_cmd->add_flag("--local-only", local_only, "Shuffle within partitions only");
  shuffle_cmd->add_option("--out", c.out, "Output directory")->required();

  auto* run_cmd = app.add_subcommand("run", "Run a query to completion");
  add_common(run_cmd, c, true);
  run_cmd->add_option("--data", data_dir, "Partitioned dataset directory")->required();
  run_cmd->add_flag("--truth", truth, "Also compute the exact answer by brute force");

  auto* trace_cmd = app.add_subcommand("trace", "Snapshot a query periodically and write the bounds");
  add_common(trace_cmd, c, true);
  trace_cmd->add_option("--data", data_dir, "Partitioned dataset directory")->required();
  trace_cmd->add_flag("--truth", truth, "Mark whether each bound covers the exact answer");

  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo coverage at sample-fraction checkpoints");
  add_common(mc_cmd, c, true);
  add_generator(mc_cmd, gen, kind);
  mc_cmd->add_option("--in", in_path, "Input CSV instead of a generator");
  mc_cmd->add_option("--trials", trials, "Trials")->check(CLI::PositiveNumber);
  mc_cmd->add_flag("--local-only", local_only, "Shuffle within partitions only");

  auto* bench_cmd = app.add_subcommand("bench", "Snapshot overhead benchmark");
  add_common(bench_cmd, c, false);
  bench_cmd->add_option("--tuples", bench.tuples, "Tuples");
  bench_cmd->add_option("--reps", bench.reps, "Repetitions")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--sync-reps", bench.sync_reps, "Synchronized-mode repetitions");

  auto* serve_cmd = app.add_subcommand("serve", "HTTP and WebSocket service");
  add_common(serve_cmd, c, false);
  serve_cmd->add_option("--data", data_dir, "Default partitioned dataset directory");
  serve_cmd->add_option("--address", address, "Listen address");
  serve_cmd->add_option("--port", port, "Listen port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (c.snapshot_ms < 1) raise(ErrorCode::kInvalidArgument, "snapshot period must be > 0");
    const auto period = std::chrono::milliseconds(c.snapshot_ms);

    if (gen_cmd->parsed()) {
      gen.kind = harness::parse_generator(kind);
      write_csv(c.out, harness::generate(gen, c.seed));
      return 0;
    }
    if (shuffle_cmd->parsed()) {
      Table t = read_csv(in_path);
      write_partitioned(c.out, harness::prepare(t, c.nodes, c.seed, local_only));
      return 0;
    }
    if (run_cmd->parsed() || trace_cmd->parsed()) {
      QueryPlan plan = load_plan(c, R"({"f": {"col": "value"}})");
      PartitionedDataset data = load_partitioned(data_dir);
      engine::EngineConfig cfg = engine_config(c);
      cfg.validate(data.partitions.size());
      std::optional<std::vector<uda::GroupValue>> exact;
      if (truth) {
        std::shared_ptr<const Table> dim;
        if (plan.dimension) dim = std::make_shared<const Table>(read_csv(plan.dimension->path));
        exact = harness::brute_force(plan, data, dim.get());
      }
      auto q = engine::Query::submit("cli", plan, data, cfg);
      Sink sink(c.out);
      if (run_cmd->parsed()) {
        engine::Snapshot s = q->wait();
        print_summary(*q, s);
        write_estimates(*sink, s, exact ? &*exact : nullptr);
      } else {
        auto points = harness::run_trace(*q, period, exact ? &*exact : nullptr);
        harness::write_trace_csv(*sink, points);
        print_summary(*q, q->wait());
      }
      if (!q->node_failures().empty()) {
        for (const auto& f : q->node_failures()) std::cerr << "node failure: " << f << '\n';
        return kExitRuntime;
      }
      return 0;
    }
    if (mc_cmd->parsed()) {
      QueryPlan plan = load_plan(c, R"({"f": {"col": "value"}})");
      Table data;
      if (!in_path.empty()) {
        data = read_csv(in_path);
      } else {
        gen.kind = harness::parse_generator(kind);
        data = harness::generate(gen, c.seed);
      }
      harness::CoverageSpec spec;
      spec.nodes = c.nodes;
      spec.trials = trials;
      spec.seed = c.seed;
      spec.local_only = local_only;
      spec.engine = engine_config(c);
      spec.engine.validate(c.nodes);
      auto cov = harness::monte_carlo_coverage(plan, data, spec);
      Sink sink(c.out);
      *sink << "checkpoint,trials,covered,unavailable,coverage,median_sample_fraction,median_relative_width\n";
      for (const auto& p : cov) {
        *sink << p.checkpoint << ',' << p.trials << ',' << p.covered << ',' << p.unavailable << ','
              << service::decimal(p.coverage()) << ',' << service::decimal(harness::median(p.sample_fractions))
              << ',' << service::decimal(harness::median(p.relative_widths)) << '\n';
      }
      return 0;
    }
    if (bench_cmd->parsed()) {
      bench.nodes = c.nodes;
      bench.seed = c.seed;
      bench.period = period;
      bench.engine = engine_config(c);
      auto r = harness::overhead_benchmark(bench);
      Sink sink(c.out);
      *sink << "mode,rep,runtime_ms\n";
      auto rows = [&](const char* mode, const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) *sink << mode << ',' << i << ',' << service::decimal(v[i]) << '\n';
      };
      rows("without_snapshots", r.without_ms);
      rows("with_snapshots", r.with_snapshots_ms);
      rows("sync", r.sync_ms);
      std::cerr << "median_without_ms=" << r.median_without() << " median_with_ms=" << r.median_with()
                << " overhead=" << r.overhead() << " snapshots=" << r.snapshots;
      if (!r.sync_ms.empty()) std::cerr << " median_sync_ms=" << r.median_sync();
      std::cerr << '\n';
      return 0;
    }
    if (serve_cmd->parsed()) {
      service::ServerOptions opts;
      opts.address = address;
      opts.port = port;
      opts.engine = engine_config(c);
      if (!data_dir.empty()) opts.dataset = std::make_shared<const PartitionedDataset>(load_partitioned(data_dir));
      service::Server server(opts);
      server.start();
      std::cerr << "listening on " << address << ':' << server.port() << '\n';
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      while (!g_signal) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << '\n';
    return is_validation_error(e.code()) ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
