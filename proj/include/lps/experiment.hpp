#ifndef LPS_EXPERIMENT_HPP_
#define LPS_EXPERIMENT_HPP_

#include "lps/checkpoint.hpp"
#include "lps/trainer.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lps {

// One experiment, read from a flat JSON file with one key per setting.
// Unknown keys are rejected so typos fail loudly instead of silently running
// the defaults. The single `seed` feeds every random stream: suite
// generation, weight init, batch order, and capacity reservation all derive
// from it, which is what makes runs reproducible and resumable.
struct ExperimentConfig {
  TaskSuiteConfig suite;
  std::vector<Index> hidden_dims = {256, 256};
  PhasePlan plan;
  double capacity_fraction = 1.0;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "run";
  std::vector<double> sweep_beta;      // share percentages, one run per value
  std::vector<double> sweep_capacity;  // capacity fractions, one run per value

  NetworkSpec network() const;
  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& file);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

// Canonical serialization (sorted keys, round-trip exact doubles).
std::string config_to_json(const ExperimentConfig& config);

// Hash of the canonical form minus out_dir and the sweep lists: it names the
// training identity, not where artifacts land, so a checkpoint can only be
// resumed by the configuration that produced it.
std::uint64_t config_hash(const ExperimentConfig& config);

// Trains the task sequence, writing metrics.jsonl, residuals.csv,
// accuracy.csv, and checkpoint.lps into out_dir, all flushed after every
// task commit (a failure keeps every completed task's artifacts). When
// out_dir already holds a checkpoint with a matching config hash the run
// resumes at the next uncommitted task; a foreign checkpoint is an error.
// stop_after_task > 0 stops early after that many tasks. Prints one summary
// line with the final average accuracy.
SequenceResult run_experiment(const ExperimentConfig& config, int stop_after_task = 0);

// One independent run per sweep value (exactly one sweep list may be
// non-empty), each in its own subdirectory, plus sweep_summary.csv with one
// row per value: value, per-task accuracies, average.
void run_sweeps(const ExperimentConfig& config);

// Human-readable accuracy table for a run or sweep directory, columns
// task1..taskN with the average last; also writes report.csv alongside the
// sources. Missing artifacts are an error naming what was looked for.
std::string report(const std::filesystem::path& artifacts_dir);

}  // namespace lps

#endif  // LPS_EXPERIMENT_HPP_
