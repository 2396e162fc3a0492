#include "lps/checkpoint.hpp"

#include "lps/digest.hpp"

#include "json.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>
#include <string>

namespace lps {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'L', 'P', 'S', 'C', 'K', 'P', 'T', '\n'};

[[noreturn]] void fail(const std::filesystem::path& file, const std::string& what) {
  throw std::runtime_error("checkpoint: " + what + " in " + file.string());
}

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

// Payload sections in write order; the header carries the same list so a
// reader can check what it is about to consume.
class SectionWriter {
 public:
  void f64(const std::string& name, const Matrix& m) {
    note(name, "f64", m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) put_u64_le(payload_, std::bit_cast<std::uint64_t>(m(i, j)));
  }

  void bits(const std::string& name, const BoolMatrix& b) {
    note(name, "u8", b.rows(), b.cols());
    for (Index i = 0; i < b.rows(); ++i)
      for (Index j = 0; j < b.cols(); ++j) payload_.push_back(b(i, j) ? 1 : 0);
  }

  void vec(const std::string& name, const Vector& v) { f64(name, v); }

  const json& sections() const { return sections_; }
  const std::string& payload() const { return payload_; }

 private:
  void note(const std::string& name, const char* kind, Index rows, Index cols) {
    sections_.push_back({{"name", name}, {"kind", kind}, {"rows", rows}, {"cols", cols}});
  }

  json sections_ = json::array();
  std::string payload_;
};

class SectionReader {
 public:
  SectionReader(const json& sections, const std::string& payload,
                const std::filesystem::path& file)
      : sections_(sections), payload_(payload), file_(file) {}

  // rows/cols of -1 accept whatever the header declares
  Matrix f64(const std::string& name, Index rows, Index cols) {
    const json& s = next(name, "f64", rows, cols);
    Matrix m(s["rows"].get<Index>(), s["cols"].get<Index>());
    const auto* p = bytes(static_cast<std::size_t>(m.size()) * 8);
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) {
        m(i, j) = std::bit_cast<double>(get_u64_le(p));
        p += 8;
      }
    return m;
  }

  BoolMatrix bits(const std::string& name, Index rows, Index cols) {
    const json& s = next(name, "u8", rows, cols);
    BoolMatrix b(s["rows"].get<Index>(), s["cols"].get<Index>());
    const auto* p = bytes(static_cast<std::size_t>(b.size()));
    for (Index i = 0; i < b.rows(); ++i)
      for (Index j = 0; j < b.cols(); ++j) {
        if (*p > 1) fail(file_, "section " + name + " holds a non-boolean byte");
        b(i, j) = *p++ != 0;
      }
    return b;
  }

  Vector vec(const std::string& name, Index size) {
    const Matrix m = f64(name, size, 1);
    return m.col(0);
  }

  void finish() const {
    if (cursor_ != sections_.size()) fail(file_, "unread trailing sections");
    if (offset_ != payload_.size()) fail(file_, "unread trailing payload bytes");
  }

 private:
  const json& next(const std::string& name, const char* kind, Index rows, Index cols) {
    if (cursor_ >= sections_.size()) fail(file_, "missing section " + name);
    const json& s = sections_[cursor_++];
    if (s["name"] != name)
      fail(file_, "expected section " + name + ", found " + s["name"].get<std::string>());
    if (s["kind"] != kind) fail(file_, "section " + name + " has the wrong kind");
    if ((rows >= 0 && s["rows"].get<Index>() != rows) ||
        (cols >= 0 && s["cols"].get<Index>() != cols))
      fail(file_, "section " + name + " has the wrong shape");
    return s;
  }

  const unsigned char* bytes(std::size_t n) {
    if (offset_ + n > payload_.size()) fail(file_, "payload ends inside a section");
    const auto* p = reinterpret_cast<const unsigned char*>(payload_.data()) + offset_;
    offset_ += n;
    return p;
  }

  const json& sections_;
  const std::string& payload_;
  const std::filesystem::path& file_;
  std::size_t cursor_ = 0;
  std::size_t offset_ = 0;
};

std::uint64_t payload_digest(const std::string& payload) {
  Fnv1a64 f;
  f.update(payload.data(), payload.size());
  return f.value();
}

std::uint64_t parse_hex(const json& j, const std::filesystem::path& file) {
  const std::string s = j.get<std::string>();
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(s, &used, 16);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(file, "malformed hex field '" + s + "'");
  }
}

json eval_rows_to_json(const std::vector<std::vector<EvalRecord>>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json jrow = json::array();
    for (const EvalRecord& r : row)
      jrow.push_back({{"task", r.task_id},
                      {"accuracy", r.top1_accuracy},
                      {"samples", r.sample_count},
                      {"digest", to_hex(r.logits_digest)}});
    out.push_back(std::move(jrow));
  }
  return out;
}

std::vector<std::vector<EvalRecord>> eval_rows_from_json(const json& j,
                                                         const std::filesystem::path& file) {
  std::vector<std::vector<EvalRecord>> rows;
  for (const json& jrow : j) {
    std::vector<EvalRecord> row;
    for (const json& r : jrow) {
      EvalRecord e;
      e.task_id = r.at("task").get<int>();
      e.top1_accuracy = r.at("accuracy").get<double>();
      e.sample_count = r.at("samples").get<long>();
      e.logits_digest = parse_hex(r.at("digest"), file);
      row.push_back(e);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& file, const Checkpoint& state) {
  const Engine& engine = state.engine;
  const PartitionLedger& ledger = engine.ledger;
  const std::size_t layers = ledger.layer_count();
  require(engine.feature_biases.size() == layers, "checkpoint: bias/layer count mismatch");

  SectionWriter w;
  for (std::size_t l = 0; l < layers; ++l)
    w.vec("bias/" + std::to_string(l), engine.feature_biases[l]);
  for (std::size_t l = 0; l < layers; ++l)
    w.f64("ledger/accumulated/" + std::to_string(l), ledger.accumulated[l]);
  for (std::size_t l = 0; l < layers; ++l)
    w.bits("ledger/used/" + std::to_string(l), ledger.used_support.layers[l]);
  for (std::size_t l = 0; l < layers; ++l)
    w.bits("ledger/reserved/" + std::to_string(l), ledger.reserved.layers[l]);

  json slices = json::array();
  for (const TaskSlice& s : ledger.slices) {
    const std::string base = "slice/" + std::to_string(s.task_id) + "/";
    for (std::size_t l = 0; l < layers; ++l)
      w.f64(base + "weights/" + std::to_string(l), s.weights[l]);
    for (std::size_t l = 0; l < s.masks.size(); ++l)
      w.f64(base + "masks/" + std::to_string(l), s.masks[l]);
    w.f64(base + "head", s.head);
    w.vec(base + "head_bias", s.head_bias);
    for (std::size_t l = 0; l < layers; ++l)
      w.bits(base + "wsupp/" + std::to_string(l), s.weight_support.layers[l]);
    for (std::size_t l = 0; l < layers; ++l)
      w.bits(base + "msupp/" + std::to_string(l), s.mask_support.layers[l]);
    slices.push_back({{"task_id", s.task_id}, {"has_masks", !s.masks.empty()}});
  }

  json header;
  header["format_version"] = state.format_version;
  header["layer_dims"] = engine.spec.layer_dims;
  header["root_seed"] = engine.root_seed;
  header["config_hash"] = state.config_hash;
  header["slices"] = std::move(slices);
  header["eval_rows"] = eval_rows_to_json(state.eval_rows);
  header["sections"] = w.sections();
  header["payload_digest"] = to_hex(payload_digest(w.payload()));

  std::string blob(kMagic, sizeof(kMagic));
  const std::string header_text = header.dump();
  put_u64_le(blob, header_text.size());
  blob += header_text;
  blob += w.payload();

  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(tmp, "cannot create");
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) fail(tmp, "write failed");
  }
  std::filesystem::rename(tmp, file);
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(file, "cannot open");
  const std::string blob{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

  if (blob.size() < sizeof(kMagic) + 8) fail(file, "truncated before the header");
  if (std::string_view(blob.data(), sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic)))
    fail(file, "not a checkpoint file (bad magic)");
  const std::uint64_t header_len =
      get_u64_le(reinterpret_cast<const unsigned char*>(blob.data()) + sizeof(kMagic));
  const std::size_t header_start = sizeof(kMagic) + 8;
  if (header_start + header_len > blob.size()) fail(file, "truncated header");

  json header;
  try {
    header = json::parse(blob.begin() + static_cast<long>(header_start),
                         blob.begin() + static_cast<long>(header_start + header_len));
  } catch (const json::exception& e) {
    fail(file, std::string("corrupt header: ") + e.what());
  }

  Checkpoint state;
  try {
    state.format_version = header.at("format_version").get<int>();
    if (state.format_version != kCheckpointVersion)
      fail(file, "unsupported format version " + std::to_string(state.format_version) +
                     " (this build reads version " + std::to_string(kCheckpointVersion) + ")");

    const std::string payload = blob.substr(header_start + header_len);
    std::size_t expected = 0;
    for (const json& s : header.at("sections"))
      expected += static_cast<std::size_t>(s.at("rows").get<Index>()) *
                  static_cast<std::size_t>(s.at("cols").get<Index>()) *
                  (s.at("kind") == "f64" ? 8 : 1);
    if (payload.size() != expected)
      fail(file, "truncated payload (" + std::to_string(payload.size()) + " of " +
                     std::to_string(expected) + " bytes)");
    const std::uint64_t want = parse_hex(header.at("payload_digest"), file);
    if (payload_digest(payload) != want) fail(file, "payload digest mismatch");

    NetworkSpec spec;
    spec.layer_dims = header.at("layer_dims").get<std::vector<Index>>();
    spec.validate();
    Engine& engine = state.engine;
    engine.spec = spec;
    engine.root_seed = header.at("root_seed").get<std::uint64_t>();
    state.config_hash = header.at("config_hash").get<std::uint64_t>();
    state.eval_rows = eval_rows_from_json(header.at("eval_rows"), file);

    PartitionLedger& ledger = engine.ledger;
    ledger = make_ledger(spec.zero_feature_weights());
    const std::size_t layers = ledger.layer_count();

    SectionReader r(header.at("sections"), payload, file);
    engine.feature_biases.clear();
    for (std::size_t l = 0; l < layers; ++l)
      engine.feature_biases.push_back(r.vec("bias/" + std::to_string(l), spec.feature_cols(l)));
    for (std::size_t l = 0; l < layers; ++l)
      ledger.accumulated[l] = r.f64("ledger/accumulated/" + std::to_string(l),
                                    spec.feature_rows(l), spec.feature_cols(l));
    for (std::size_t l = 0; l < layers; ++l)
      ledger.used_support.layers[l] =
          r.bits("ledger/used/" + std::to_string(l), spec.feature_rows(l), spec.feature_cols(l));
    for (std::size_t l = 0; l < layers; ++l)
      ledger.reserved.layers[l] = r.bits("ledger/reserved/" + std::to_string(l),
                                         spec.feature_rows(l), spec.feature_cols(l));

    for (const json& js : header.at("slices")) {
      TaskSlice s;
      s.task_id = js.at("task_id").get<int>();
      const std::string base = "slice/" + std::to_string(s.task_id) + "/";
      for (std::size_t l = 0; l < layers; ++l)
        s.weights.push_back(r.f64(base + "weights/" + std::to_string(l), spec.feature_rows(l),
                                  spec.feature_cols(l)));
      if (js.at("has_masks").get<bool>())
        for (std::size_t l = 0; l < layers; ++l)
          s.masks.push_back(r.f64(base + "masks/" + std::to_string(l), spec.feature_rows(l),
                                  spec.feature_cols(l)));
      s.head = r.f64(base + "head", spec.head_rows(), -1);
      s.head_bias = r.vec(base + "head_bias", s.head.cols());
      for (std::size_t l = 0; l < layers; ++l)
        s.weight_support.layers.push_back(r.bits(base + "wsupp/" + std::to_string(l),
                                                 spec.feature_rows(l), spec.feature_cols(l)));
      for (std::size_t l = 0; l < layers; ++l)
        s.mask_support.layers.push_back(r.bits(base + "msupp/" + std::to_string(l),
                                               spec.feature_rows(l), spec.feature_cols(l)));
      ledger.slices.push_back(std::move(s));
    }
    r.finish();
  } catch (const json::exception& e) {
    fail(file, std::string("corrupt header: ") + e.what());
  }

  // the digest guards the bytes; this guards their meaning
  const InvariantReport report = verify_invariants(state.engine.ledger);
  if (!report.pass) fail(file, "restored ledger fails invariants: " + report.failures.front());
  return state;
}

}  // namespace lps
