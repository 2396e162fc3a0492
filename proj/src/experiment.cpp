#include "lps/experiment.hpp"

#include "lps/data_io.hpp"
#include "lps/digest.hpp"
#include "lps/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lps {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fixed6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string shortest(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

const char* to_string(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::blobs: return "blobs";
    case SuiteKind::permuted: return "permuted";
    case SuiteKind::split: return "split";
  }
  return "?";
}

SuiteKind suite_kind_from_string(const std::string& s, const std::string& origin) {
  if (s == "blobs") return SuiteKind::blobs;
  if (s == "permuted") return SuiteKind::permuted;
  if (s == "split") return SuiteKind::split;
  throw std::runtime_error("config: unknown suite '" + s + "' in " + origin +
                           " (expected blobs, permuted, or split)");
}

template <class T>
T get_key(const json& j, const char* key, const T& fallback, const std::string& origin) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::runtime_error("config: bad value for '" + std::string(key) + "' in " + origin +
                             ": " + e.what());
  }
}

}  // namespace

NetworkSpec ExperimentConfig::network() const {
  NetworkSpec spec;
  spec.layer_dims.push_back(suite.input_dim);
  spec.layer_dims.insert(spec.layer_dims.end(), hidden_dims.begin(), hidden_dims.end());
  spec.layer_dims.push_back(suite.class_count);
  return spec;
}

void ExperimentConfig::validate() const {
  suite.validate();
  plan.validate();
  require(!hidden_dims.empty(), "config: hidden_dims must name at least one layer");
  for (Index h : hidden_dims) require(h >= 1, "config: hidden layer sizes must be positive");
  require(capacity_fraction > 0.0 && capacity_fraction <= 1.0,
          "config: capacity_fraction must be in (0, 1]");
  require(!out_dir.empty(), "config: out_dir must not be empty");
  for (double b : sweep_beta)
    require(b >= 0.0 && b <= 100.0, "config: sweep_beta values must be percentages in [0, 100]");
  for (double c : sweep_capacity)
    require(c > 0.0 && c <= 1.0, "config: sweep_capacity values must be fractions in (0, 1]");
  network().validate();
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error("config: parse error in " + origin + ": " + e.what());
  }
  if (!j.is_object())
    throw std::runtime_error("config: top level must be a JSON object in " + origin);

  static const std::set<std::string> allowed = {
      "suite",          "task_count",    "train_cap",        "test_cap",
      "input_dim",      "class_count",   "blob_similarity",  "hidden_dims",
      "warmup_epochs",  "admm_epochs",   "final_epochs",     "schedule_intervals",
      "pruning",        "alpha_pct",     "beta_pct",         "learning_rate",
      "batch_size",     "prune_last_task", "capacity_fraction", "seed",
      "out_dir",        "sweep_beta",    "sweep_capacity"};
  for (const auto& item : j.items())
    if (allowed.find(item.key()) == allowed.end())
      throw std::runtime_error("config: unknown key '" + item.key() + "' in " + origin);

  ExperimentConfig c;
  c.suite.kind = suite_kind_from_string(get_key<std::string>(j, "suite", "blobs", origin), origin);
  c.suite.task_count = get_key<int>(j, "task_count", 3, origin);
  c.suite.train_cap = get_key<Index>(j, "train_cap", 0, origin);
  c.suite.test_cap = get_key<Index>(j, "test_cap", 0, origin);
  c.suite.input_dim = get_key<Index>(j, "input_dim", 784, origin);
  c.suite.class_count = get_key<int>(j, "class_count", 10, origin);
  c.suite.blob_similarity = get_key<double>(j, "blob_similarity", 0.5, origin);
  c.hidden_dims = get_key<std::vector<Index>>(j, "hidden_dims", {256, 256}, origin);
  c.plan.warmup_epochs = get_key<long>(j, "warmup_epochs", 5, origin);
  c.plan.admm_epochs = get_key<long>(j, "admm_epochs", 15, origin);
  c.plan.final_epochs = get_key<long>(j, "final_epochs", 5, origin);
  c.plan.schedule_intervals = get_key<long>(j, "schedule_intervals", 3, origin);
  try {
    c.plan.pruning_kind = pruning_kind_from_string(get_key<std::string>(j, "pruning", "irregular", origin));
  } catch (const std::exception& e) {
    throw std::runtime_error("config: bad value for 'pruning' in " + origin + ": " + e.what());
  }
  c.plan.alpha_pct = get_key<double>(j, "alpha_pct", 10.0, origin);
  c.plan.beta_pct = get_key<double>(j, "beta_pct", 90.0, origin);
  c.plan.learning_rate = get_key<double>(j, "learning_rate", 1e-3, origin);
  c.plan.batch_size = get_key<Index>(j, "batch_size", 128, origin);
  c.plan.prune_last_task = get_key<bool>(j, "prune_last_task", true, origin);
  c.capacity_fraction = get_key<double>(j, "capacity_fraction", 1.0, origin);
  c.seed = get_key<std::uint64_t>(j, "seed", 1, origin);
  c.out_dir = get_key<std::string>(j, "out_dir", "run", origin);
  c.sweep_beta = get_key<std::vector<double>>(j, "sweep_beta", {}, origin);
  c.sweep_capacity = get_key<std::vector<double>>(j, "sweep_capacity", {}, origin);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("config: cannot open " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), file.string());
}

std::string config_to_json(const ExperimentConfig& config) {
  json j;
  j["suite"] = to_string(config.suite.kind);
  j["task_count"] = config.suite.task_count;
  j["train_cap"] = config.suite.train_cap;
  j["test_cap"] = config.suite.test_cap;
  j["input_dim"] = config.suite.input_dim;
  j["class_count"] = config.suite.class_count;
  j["blob_similarity"] = config.suite.blob_similarity;
  j["hidden_dims"] = config.hidden_dims;
  j["warmup_epochs"] = config.plan.warmup_epochs;
  j["admm_epochs"] = config.plan.admm_epochs;
  j["final_epochs"] = config.plan.final_epochs;
  j["schedule_intervals"] = config.plan.schedule_intervals;
  j["pruning"] = to_string(config.plan.pruning_kind);
  j["alpha_pct"] = config.plan.alpha_pct;
  j["beta_pct"] = config.plan.beta_pct;
  j["learning_rate"] = config.plan.learning_rate;
  j["batch_size"] = config.plan.batch_size;
  j["prune_last_task"] = config.plan.prune_last_task;
  j["capacity_fraction"] = config.capacity_fraction;
  j["seed"] = config.seed;
  j["out_dir"] = config.out_dir.string();
  j["sweep_beta"] = config.sweep_beta;
  j["sweep_capacity"] = config.sweep_capacity;
  return j.dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  json j = json::parse(config_to_json(config));
  j.erase("out_dir");
  j.erase("sweep_beta");
  j.erase("sweep_capacity");
  const std::string canon = j.dump();
  Fnv1a64 f;
  f.update(canon.data(), canon.size());
  return f.value();
}

namespace {

void write_accuracy_csv(const fs::path& file, const std::vector<std::vector<EvalRecord>>& rows,
                        int task_count) {
  std::ofstream out(file, std::ios::trunc);
  out << "after_task";
  for (int t = 1; t <= task_count; ++t) out << ",task" << t;
  out << ",avg\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << (i + 1);
    double sum = 0.0;
    for (int t = 1; t <= task_count; ++t) {
      out << ",";
      if (t <= static_cast<int>(rows[i].size())) {
        out << fixed6(rows[i][static_cast<std::size_t>(t - 1)].top1_accuracy);
        sum += rows[i][static_cast<std::size_t>(t - 1)].top1_accuracy;
      }
    }
    out << "," << fixed6(sum / static_cast<double>(rows[i].size())) << "\n";
  }
}

void append_metrics(const fs::path& file, const TaskRunRecord& rec) {
  std::ofstream out(file, std::ios::app);
  for (const EpochRecord& e : rec.epochs) {
    json j;
    j["task"] = e.task_id;
    j["phase"] = e.phase;
    j["epoch"] = e.epoch;
    j["mean_loss"] = e.mean_loss;
    out << j.dump() << "\n";
  }
  json j;
  j["task"] = rec.eval.task_id;
  j["kind"] = "eval";
  j["accuracy"] = rec.eval.top1_accuracy;
  j["samples"] = rec.eval.sample_count;
  j["digest"] = to_hex(rec.eval.logits_digest);
  out << j.dump() << "\n";
}

constexpr const char* kResidualHeader =
    "task,outer_iteration,layer,rho,augmented_loss,weight_residual,mask_residual,feasible\n";

// one row per layer; the mask column stays blank for tasks without masks
void append_residuals(const fs::path& file, const TaskRunRecord& rec) {
  std::ofstream out(file, std::ios::app);
  for (const AdmmResidualRecord& r : rec.residuals)
    for (std::size_t l = 0; l < r.weight_residual.size(); ++l) {
      out << rec.eval.task_id << "," << r.outer_iteration << "," << l << "," << shortest(r.rho)
          << "," << shortest(r.augmented_loss) << "," << shortest(r.weight_residual[l]) << ",";
      if (l < r.mask_residual.size()) out << shortest(r.mask_residual[l]);
      out << "," << (r.feasible ? 1 : 0) << "\n";
    }
}

}  // namespace

SequenceResult run_experiment(const ExperimentConfig& config, int stop_after_task) {
  config.validate();
  fs::create_directories(config.out_dir);
  const fs::path ckpt_file = config.out_dir / "checkpoint.lps";
  const fs::path metrics_file = config.out_dir / "metrics.jsonl";
  const fs::path residuals_file = config.out_dir / "residuals.csv";
  const fs::path accuracy_file = config.out_dir / "accuracy.csv";
  const std::uint64_t hash = config_hash(config);
  const int total = config.suite.task_count;
  const int goal = stop_after_task > 0 ? std::min(stop_after_task, total) : total;

  Checkpoint state;
  if (fs::exists(ckpt_file)) {
    state = load_checkpoint(ckpt_file);
    if (state.config_hash != hash)
      throw std::runtime_error("run: " + ckpt_file.string() +
                               " was written by a different configuration; refusing to resume");
  } else {
    state.engine = make_engine(config.network(), derive_seed(config.seed, "engine"),
                               config.capacity_fraction);
    state.config_hash = hash;
    std::ofstream(metrics_file, std::ios::trunc);
    std::ofstream(residuals_file, std::ios::trunc) << kResidualHeader;
    write_accuracy_csv(accuracy_file, {}, total);
  }

  SequenceResult result;
  const int committed = static_cast<int>(state.engine.ledger.committed_count());
  if (committed < goal) {
    TaskSuiteConfig suite = config.suite;
    suite.seed = derive_seed(config.seed, "suite");
    const std::vector<TaskDataset> tasks = make_suite(suite);

    for (int t = committed + 1; t <= goal; ++t) {
      PhasePlan plan = config.plan;
      const bool prune = plan.prune_last_task || t < total;
      TaskRunRecord rec = train_task(state.engine, tasks[static_cast<std::size_t>(t - 1)], plan,
                                     prune);

      std::vector<EvalRecord> row;
      for (const TaskSlice& s : state.engine.ledger.slices) {
        const TaskDataset& d = tasks[static_cast<std::size_t>(s.task_id - 1)];
        row.push_back(evaluate(state.engine, s.task_id, d.test_x, d.test_y));
      }
      state.eval_rows.push_back(std::move(row));

      // flush everything this task produced before the next one starts
      append_metrics(metrics_file, rec);
      append_residuals(residuals_file, rec);
      write_accuracy_csv(accuracy_file, state.eval_rows, total);
      save_checkpoint(ckpt_file, state);
      result.tasks.push_back(std::move(rec));
    }
  }

  result.matrix = state.eval_rows;
  if (!result.matrix.empty()) {
    double sum = 0.0;
    for (const EvalRecord& r : result.matrix.back()) sum += r.top1_accuracy;
    result.average_accuracy = sum / static_cast<double>(result.matrix.back().size());
  }
  std::cout << "average accuracy over " << result.matrix.size() << " tasks: "
            << fixed6(result.average_accuracy) << "\n";
  return result;
}

namespace {

std::string value_label(double v) {
  std::string s = shortest(v);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("report: cannot open " + file.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream parts(line);
    while (std::getline(parts, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c >= width.size()) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      cell.resize(width[c], ' ');
      out += cell;
      if (c + 1 < row.size()) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

void write_csv(const fs::path& file, const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(file, std::ios::trunc);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << row[c];
    }
    out << "\n";
  }
}

}  // namespace

void run_sweeps(const ExperimentConfig& config) {
  config.validate();
  const bool beta = !config.sweep_beta.empty();
  const bool capacity = !config.sweep_capacity.empty();
  require(beta != capacity, "sweep: provide exactly one of sweep_beta / sweep_capacity");
  const std::vector<double>& values = beta ? config.sweep_beta : config.sweep_capacity;

  fs::create_directories(config.out_dir);
  std::vector<std::vector<std::string>> summary;
  std::vector<std::string> header = {beta ? "beta_pct" : "capacity_fraction"};
  for (int t = 1; t <= config.suite.task_count; ++t) header.push_back("task" + std::to_string(t));
  header.push_back("avg");
  summary.push_back(std::move(header));

  for (double v : values) {
    ExperimentConfig sub = config;
    sub.sweep_beta.clear();
    sub.sweep_capacity.clear();
    if (beta)
      sub.plan.beta_pct = v;
    else
      sub.capacity_fraction = v;
    sub.out_dir = config.out_dir / ((beta ? "beta_" : "capacity_") + value_label(v));
    const SequenceResult r = run_experiment(sub);

    std::vector<std::string> row = {shortest(v)};
    for (const EvalRecord& e : r.matrix.back()) row.push_back(fixed6(e.top1_accuracy));
    row.push_back(fixed6(r.average_accuracy));
    summary.push_back(std::move(row));
  }
  write_csv(config.out_dir / "sweep_summary.csv", summary);
}

std::string report(const std::filesystem::path& artifacts_dir) {
  const fs::path sweep_file = artifacts_dir / "sweep_summary.csv";
  const fs::path accuracy_file = artifacts_dir / "accuracy.csv";

  std::vector<std::vector<std::string>> table;
  if (fs::exists(sweep_file)) {
    table = read_csv_rows(sweep_file);
  } else if (fs::exists(accuracy_file)) {
    const auto rows = read_csv_rows(accuracy_file);
    if (rows.size() < 2)
      throw std::runtime_error("report: " + accuracy_file.string() + " holds no finished tasks");
    // final matrix row only: one accuracy per task plus the average
    std::vector<std::string> header(rows.front().begin() + 1, rows.front().end());
    std::vector<std::string> values(rows.back().begin() + 1, rows.back().end());
    table.push_back(std::move(header));
    table.push_back(std::move(values));
  } else {
    throw std::runtime_error("report: no artifacts in " + artifacts_dir.string() +
                             " (looked for sweep_summary.csv and accuracy.csv)");
  }

  write_csv(artifacts_dir / "report.csv", table);
  return render_table(table);
}

}  // namespace lps
