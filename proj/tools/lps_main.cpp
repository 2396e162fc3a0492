#include "CLI11.hpp"

#include "lps/checkpoint.hpp"
#include "lps/data_io.hpp"
#include "lps/digest.hpp"
#include "lps/experiment.hpp"
#include "lps/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool out_set = false;
  std::vector<double> sweep_beta;
  std::vector<double> sweep_capacity;
};

lps::ExperimentConfig make_config(const Overrides& o) {
  lps::ExperimentConfig config = lps::load_config(o.config_path);
  if (o.seed_set) config.seed = o.seed;
  if (o.out_set) config.out_dir = o.out_dir;
  if (!o.sweep_beta.empty()) config.sweep_beta = o.sweep_beta;
  if (!o.sweep_capacity.empty()) config.sweep_capacity = o.sweep_capacity;
  return config;
}

int cmd_run(const Overrides& o) {
  const lps::ExperimentConfig config = make_config(o);
  if (config.sweep_beta.empty() && config.sweep_capacity.empty())
    lps::run_experiment(config);
  else
    lps::run_sweeps(config);
  return 0;
}

int cmd_report(const std::string& out_dir) {
  std::cout << lps::report(out_dir);
  return 0;
}

// Integrity first (load_checkpoint refuses corrupt files), then the full
// ledger invariant suite; with a config, additionally re-evaluates every
// committed task and compares logits digests against the stored records.
int cmd_verify(const Overrides& o) {
  const fs::path file = fs::path(o.out_dir) / "checkpoint.lps";
  const lps::Checkpoint state = lps::load_checkpoint(file);
  const lps::PartitionLedger& ledger = state.engine.ledger;
  std::cout << "checkpoint: format v" << state.format_version << ", "
            << ledger.committed_count() << " committed tasks, root seed "
            << state.engine.root_seed << "\n";

  bool ok = true;
  const lps::InvariantReport report = lps::verify_invariants(ledger);
  if (report.pass) {
    std::cout << "ledger invariants: pass\n";
  } else {
    ok = false;
    for (const std::string& f : report.failures) std::cout << "ledger invariants: FAIL " << f << "\n";
  }

  if (!o.config_path.empty()) {
    const lps::ExperimentConfig config = make_config(o);
    if (lps::config_hash(config) != state.config_hash) {
      std::cout << "config hash: FAIL (checkpoint was written by a different configuration)\n";
      return 1;
    }
    std::cout << "config hash: match\n";

    lps::TaskSuiteConfig suite = config.suite;
    suite.seed = lps::derive_seed(config.seed, "suite");
    const std::vector<lps::TaskDataset> tasks = lps::make_suite(suite);
    const std::vector<lps::EvalRecord> stored =
        state.eval_rows.empty() ? std::vector<lps::EvalRecord>{} : state.eval_rows.back();
    for (const lps::TaskSlice& s : ledger.slices) {
      const lps::TaskDataset& d = tasks.at(static_cast<std::size_t>(s.task_id - 1));
      const lps::EvalRecord now = lps::evaluate(state.engine, s.task_id, d.test_x, d.test_y);
      const lps::EvalRecord* was = nullptr;
      for (const lps::EvalRecord& r : stored)
        if (r.task_id == s.task_id) was = &r;
      const bool match = was != nullptr && was->logits_digest == now.logits_digest;
      ok = ok && match;
      std::cout << "task " << s.task_id << ": accuracy " << now.top1_accuracy << ", digest "
                << lps::to_hex(now.logits_digest) << (match ? " (matches stored record)" : " (MISMATCH)")
                << "\n";
    }
  }
  std::cout << (ok ? "verify: pass\n" : "verify: FAIL\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential-task training with disjoint parameter supports"};
  app.require_subcommand(1);

  Overrides o;

  CLI::App* run = app.add_subcommand("run", "train a task sequence from a config file");
  run->add_option("--config", o.config_path, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* run_seed = run->add_option("--seed", o.seed, "override the config's root seed");
  CLI::Option* run_out = run->add_option("--out", o.out_dir, "override the artifact directory");
  run->add_option("--sweep-beta", o.sweep_beta, "share percentages, one run per value")
      ->delimiter(',');
  run->add_option("--sweep-capacity", o.sweep_capacity, "capacity fractions, one run per value")
      ->delimiter(',');

  CLI::App* report = app.add_subcommand("report", "summarize a run or sweep directory");
  report->add_option("--out", o.out_dir, "artifact directory")->required();

  CLI::App* verify = app.add_subcommand("verify", "check a checkpoint's integrity and invariants");
  verify->add_option("--out", o.out_dir, "directory holding checkpoint.lps")->required();
  verify->add_option("--config", o.config_path,
                     "also re-evaluate every task and compare stored digests")
      ->check(CLI::ExistingFile);
  CLI::Option* verify_seed = verify->add_option("--seed", o.seed, "seed override used with --config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      o.seed_set = run_seed->count() > 0;
      o.out_set = run_out->count() > 0;
      return cmd_run(o);
    }
    if (report->parsed()) return cmd_report(o.out_dir);
    o.seed_set = verify_seed->count() > 0;
    return cmd_verify(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
