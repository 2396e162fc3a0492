#include "lps/data_io.hpp"

#include "lps/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lps {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;  // ubyte, 3 dimensions
constexpr std::uint32_t kLabelMagic = 0x00000801;  // ubyte, 1 dimension

// Dimension fields larger than this are treated as corruption rather than
// honored with a giant allocation.
constexpr std::uint32_t kDimLimit = 1u << 24;

[[noreturn]] void fail(const std::filesystem::path& file, const std::string& what) {
  throw std::runtime_error("idx: " + what + " in " + file.string());
}

std::uint32_t read_u32_be(std::istream& in, const std::filesystem::path& file, const char* what) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) fail(file, std::string("truncated ") + what);
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_magic(std::istream& in, const std::filesystem::path& file,
                         std::uint32_t expected) {
  const std::uint32_t magic = read_u32_be(in, file, "magic");
  if (magic != expected) {
    std::ostringstream msg;
    msg << "bad magic 0x" << std::hex << magic << " (expected 0x" << expected << ")";
    fail(file, msg.str());
  }
  return magic;
}

std::uint32_t read_dim(std::istream& in, const std::filesystem::path& file, const char* what) {
  const std::uint32_t v = read_u32_be(in, file, what);
  if (v > kDimLimit) fail(file, std::string("implausible ") + what + " " + std::to_string(v));
  return v;
}

void read_payload(std::istream& in, const std::filesystem::path& file, std::uint8_t* dst,
                  std::size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    fail(file, "truncated payload (" + std::to_string(in.gcount()) + " of " + std::to_string(n) +
                   " bytes)");
}

}  // namespace

ImageBytes read_idx_images(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(file, "cannot open");
  read_magic(in, file, kImageMagic);
  ImageBytes out;
  out.count = static_cast<Index>(read_dim(in, file, "image count"));
  out.rows = static_cast<Index>(read_dim(in, file, "row count"));
  out.cols = static_cast<Index>(read_dim(in, file, "column count"));
  out.pixels.resize(static_cast<std::size_t>(out.count) * static_cast<std::size_t>(out.rows) *
                    static_cast<std::size_t>(out.cols));
  read_payload(in, file, out.pixels.data(), out.pixels.size());
  return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(file, "cannot open");
  read_magic(in, file, kLabelMagic);
  std::vector<std::uint8_t> labels(read_dim(in, file, "label count"));
  read_payload(in, file, labels.data(), labels.size());
  return labels;
}

void write_idx_images(const std::filesystem::path& file, const ImageBytes& images) {
  require(images.count >= 0 && images.rows >= 1 && images.cols >= 1,
          "idx: image geometry must be positive");
  require(images.pixels.size() == static_cast<std::size_t>(images.count * images.rows * images.cols),
          "idx: pixel buffer does not match the declared geometry");
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(file, "cannot create");
  write_u32_be(out, kImageMagic);
  write_u32_be(out, static_cast<std::uint32_t>(images.count));
  write_u32_be(out, static_cast<std::uint32_t>(images.rows));
  write_u32_be(out, static_cast<std::uint32_t>(images.cols));
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
  if (!out) fail(file, "write failed");
}

void write_idx_labels(const std::filesystem::path& file, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(file, "cannot create");
  write_u32_be(out, kLabelMagic);
  write_u32_be(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
  if (!out) fail(file, "write failed");
}

Matrix to_unit_rows(const ImageBytes& images) {
  const Index dim = images.rows * images.cols;
  Matrix x(images.count, dim);
  for (Index i = 0; i < images.count; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * static_cast<std::size_t>(dim);
    for (Index j = 0; j < dim; ++j)
      x(i, j) = static_cast<double>(images.pixels[base + static_cast<std::size_t>(j)]) / 255.0;
  }
  return x;
}

std::pair<Matrix, Eigen::VectorXi> read_labeled_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("csv: cannot open " + file.string());

  std::vector<int> labels;
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(fields, field, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || field.find_first_not_of(" \t\r", used) != std::string::npos)
        throw std::runtime_error("csv: bad number '" + field + "' at line " +
                                 std::to_string(line_no) + " of " + file.string());
      values.push_back(v);
    }
    if (values.size() < 2)
      throw std::runtime_error("csv: line " + std::to_string(line_no) + " of " + file.string() +
                               " needs a label and at least one feature");
    const double label = values.front();
    if (label < 0.0 || label != std::floor(label))
      throw std::runtime_error("csv: label must be a non-negative integer at line " +
                               std::to_string(line_no) + " of " + file.string());
    if (!rows.empty() && values.size() != rows.front().size() + 1)
      throw std::runtime_error("csv: ragged row at line " + std::to_string(line_no) + " of " +
                               file.string());
    labels.push_back(static_cast<int>(label));
    rows.push_back(std::vector<double>(values.begin() + 1, values.end()));
  }
  if (rows.empty()) throw std::runtime_error("csv: no data rows in " + file.string());

  Matrix x(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  Eigen::VectorXi y(static_cast<Index>(labels.size()));
  double peak = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    y(i) = labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < x.cols(); ++j) {
      x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      peak = std::max(peak, std::abs(x(i, j)));
    }
  }
  if (peak > 1.0) x /= 255.0;
  return {std::move(x), std::move(y)};
}

namespace {

// Seven-segment membership per digit, segment order A B C D E F G
// (top, upper right, lower right, bottom, lower left, upper left, middle).
constexpr bool kSegments[10][7] = {
    {true, true, true, true, true, true, false},     // 0
    {false, true, true, false, false, false, false},  // 1
    {true, true, false, true, true, false, true},     // 2
    {true, true, true, true, false, false, true},     // 3
    {false, true, true, false, false, true, true},    // 4
    {true, false, true, true, false, true, true},     // 5
    {true, false, true, true, true, true, true},      // 6
    {true, true, true, false, false, false, false},   // 7
    {true, true, true, true, true, true, true},       // 8
    {true, true, true, true, false, true, true},      // 9
};

constexpr Index kGlyphSide = 28;

struct Canvas {
  std::uint8_t* px;

  void stamp(Index r, Index c, double v) {
    if (r < 0 || r >= kGlyphSide || c < 0 || c >= kGlyphSide) return;
    const auto ink = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    std::uint8_t& cell = px[r * kGlyphSide + c];
    cell = std::max(cell, ink);
  }

  void hbar(Index r, Index c0, Index c1, Index th, double v) {
    for (Index r2 = r; r2 < r + th; ++r2)
      for (Index c = c0; c < c1; ++c) stamp(r2, c, v);
  }

  void vbar(Index c, Index r0, Index r1, Index th, double v) {
    for (Index c2 = c; c2 < c + th; ++c2)
      for (Index r = r0; r < r1; ++r) stamp(r, c2, v);
  }
};

void render_glyph(std::uint8_t* px, int digit, Rng& rng) {
  const Index dx = static_cast<Index>(rng.below(5)) - 2;
  const Index dy = static_cast<Index>(rng.below(5)) - 2;
  const Index th = 2 + static_cast<Index>(rng.below(2));
  const double base_ink = 190.0 + 65.0 * rng.uniform();

  // glyph box before jitter: columns 8..20, rows 5..24 (thickness inclusive)
  const Index x0 = 8 + dx;
  const Index x1 = 18 + dx;
  const Index y0 = 5 + dy;
  const Index ym = 13 + dy;
  const Index y2 = 21 + dy;

  const bool* seg = kSegments[digit];
  Canvas canvas{px};
  const auto ink = [&] { return base_ink * (0.8 + 0.2 * rng.uniform()); };
  if (seg[0]) canvas.hbar(y0, x0, x1 + th, th, ink());
  if (seg[1]) canvas.vbar(x1, y0, ym + th, th, ink());
  if (seg[2]) canvas.vbar(x1, ym, y2 + th, th, ink());
  if (seg[3]) canvas.hbar(y2, x0, x1 + th, th, ink());
  if (seg[4]) canvas.vbar(x0, ym, y2 + th, th, ink());
  if (seg[5]) canvas.vbar(x0, y0, ym + th, th, ink());
  if (seg[6]) canvas.hbar(ym, x0, x1 + th, th, ink());

  // mild ink wobble everywhere plus sparse background speckle, so backgrounds
  // stay mostly clean the way scanned digits do
  for (Index k = 0; k < kGlyphSide * kGlyphSide; ++k) {
    double noisy = static_cast<double>(px[k]) + 10.0 * rng.gaussian();
    if (rng.below(50) == 0) noisy += rng.uniform(0.0, 120.0);
    px[k] = static_cast<std::uint8_t>(std::clamp(noisy, 0.0, 255.0));
  }
}

}  // namespace

ImageBytes render_digit_images(const std::vector<std::uint8_t>& labels, std::uint64_t seed) {
  ImageBytes out;
  out.count = static_cast<Index>(labels.size());
  out.rows = kGlyphSide;
  out.cols = kGlyphSide;
  out.pixels.assign(static_cast<std::size_t>(out.count) * kGlyphSide * kGlyphSide, 0);
  for (Index i = 0; i < out.count; ++i) {
    const std::uint8_t digit = labels[static_cast<std::size_t>(i)];
    require(digit < 10, "digit glyphs: labels must be 0..9");
    // one stream per image, keyed by position, so any slice renders the same
    Rng rng(derive_seed(seed, "glyph", static_cast<std::uint64_t>(i)));
    render_glyph(out.pixels.data() + static_cast<std::size_t>(i) * kGlyphSide * kGlyphSide, digit,
                 rng);
  }
  return out;
}

namespace {

std::vector<std::uint8_t> balanced_labels(Index count, int class_count, std::uint64_t seed) {
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i)
    labels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i % class_count);
  Rng rng(seed);
  rng.shuffle(labels);
  return labels;
}

Eigen::VectorXi to_int_labels(const std::vector<std::uint8_t>& labels) {
  Eigen::VectorXi y(static_cast<Index>(labels.size()));
  for (Index i = 0; i < y.size(); ++i) y(i) = labels[static_cast<std::size_t>(i)];
  return y;
}

}  // namespace

TaskDataset synthetic_digit_corpus(Index train_count, Index test_count, int class_count,
                                   std::uint64_t seed) {
  require(class_count >= 2 && class_count <= 10, "digit corpus: class count must be 2..10");
  require(train_count >= class_count && test_count >= class_count,
          "digit corpus: need at least one sample per class in each split");

  const auto train_labels = balanced_labels(train_count, class_count, derive_seed(seed, "order", 0));
  const auto test_labels = balanced_labels(test_count, class_count, derive_seed(seed, "order", 1));

  TaskDataset d;
  d.task_id = 1;
  d.class_count = class_count;
  d.train_x = to_unit_rows(render_digit_images(train_labels, derive_seed(seed, "render", 0)));
  d.train_y = to_int_labels(train_labels);
  d.test_x = to_unit_rows(render_digit_images(test_labels, derive_seed(seed, "render", 1)));
  d.test_y = to_int_labels(test_labels);
  return d;
}

namespace {

// The synthetic corpus is a fixed artifact like a real dataset would be, so
// its seed is a constant rather than part of the experiment configuration.
constexpr std::uint64_t kCorpusSeed = 271828;
constexpr Index kCorpusTrain = 12000;
constexpr Index kCorpusTest = 2000;

std::filesystem::path find_idx_file(const std::filesystem::path& dir, const std::string& stem,
                                    const std::string& kind) {
  // both common spellings: train-images-idx3-ubyte and train-images.idx3-ubyte
  const std::filesystem::path dashed = dir / (stem + "-" + kind + "-ubyte");
  if (std::filesystem::exists(dashed)) return dashed;
  const std::filesystem::path dotted = dir / (stem + "." + kind + "-ubyte");
  if (std::filesystem::exists(dotted)) return dotted;
  throw std::runtime_error("digit corpus: missing " + dashed.string() + " (or " + dotted.string() +
                           ")");
}

void load_idx_split(const std::filesystem::path& dir, const std::string& stem, int class_count,
                    Matrix& x, Eigen::VectorXi& y) {
  const ImageBytes images = read_idx_images(find_idx_file(dir, stem + "-images", "idx3"));
  const std::vector<std::uint8_t> labels = read_idx_labels(find_idx_file(dir, stem + "-labels", "idx1"));
  if (static_cast<Index>(labels.size()) != images.count)
    throw std::runtime_error("digit corpus: " + stem + " image and label counts differ");

  const Matrix all = to_unit_rows(images);
  std::vector<Index> keep;
  for (Index i = 0; i < images.count; ++i)
    if (labels[static_cast<std::size_t>(i)] < class_count) keep.push_back(i);
  if (keep.empty())
    throw std::runtime_error("digit corpus: no " + stem + " samples below class " +
                             std::to_string(class_count));

  x.resize(static_cast<Index>(keep.size()), all.cols());
  y.resize(static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    x.row(static_cast<Index>(k)) = all.row(keep[k]);
    y(static_cast<Index>(k)) = labels[static_cast<std::size_t>(keep[k])];
  }
}

}  // namespace

TaskDataset load_digit_corpus(int class_count) {
  require(class_count >= 2 && class_count <= 10, "digit corpus: class count must be 2..10");
  const char* dir = std::getenv("LPS_MNIST_DIR");
  if (dir == nullptr || *dir == '\0') {
    // the synthetic corpus is immutable, so repeated loads share one copy
    static std::map<int, TaskDataset> cache;
    auto it = cache.find(class_count);
    if (it == cache.end())
      it = cache.emplace(class_count, synthetic_digit_corpus(kCorpusTrain, kCorpusTest,
                                                             class_count, kCorpusSeed))
               .first;
    return it->second;
  }

  TaskDataset d;
  d.task_id = 1;
  d.class_count = class_count;
  load_idx_split(dir, "train", class_count, d.train_x, d.train_y);
  load_idx_split(dir, "t10k", class_count, d.test_x, d.test_y);
  return d;
}

void TaskSuiteConfig::validate() const {
  require(task_count >= 1, "suite: need at least one task");
  require(input_dim >= 1, "suite: input dimension must be positive");
  require(class_count >= 2, "suite: need at least two classes per task");
  require(train_cap >= 0 && test_cap >= 0, "suite: caps must be non-negative");
  require(blob_similarity >= 0.0 && blob_similarity <= 1.0, "suite: similarity must be in [0, 1]");
  if (kind == SuiteKind::split)
    require(task_count * class_count <= 10, "suite: split tasks need task_count * class_count <= 10");
}

std::vector<TaskDataset> make_suite(const TaskSuiteConfig& config) {
  config.validate();
  switch (config.kind) {
    case SuiteKind::blobs: {
      const Index train = config.train_cap > 0 ? config.train_cap : 240;
      const Index test = config.test_cap > 0 ? config.test_cap : 80;
      return make_blob_tasks(config.task_count, config.input_dim, config.class_count, train, test,
                             config.seed, config.blob_similarity);
    }
    case SuiteKind::permuted: {
      const TaskDataset base = load_digit_corpus(config.class_count);
      require(base.train_x.cols() == config.input_dim,
              "suite: input_dim does not match the digit corpus");
      auto tasks = make_permuted_tasks(base, config.task_count, derive_seed(config.seed, "permutations"));
      for (auto& t : tasks)
        t = subsample_stratified(t, config.train_cap, config.test_cap,
                                 derive_seed(config.seed, "caps", static_cast<std::uint64_t>(t.task_id)));
      return tasks;
    }
    case SuiteKind::split: {
      const TaskDataset base = load_digit_corpus(10);
      require(base.train_x.cols() == config.input_dim,
              "suite: input_dim does not match the digit corpus");
      auto tasks = make_split_tasks(base, config.class_count, config.task_count,
                                    derive_seed(config.seed, "groups"));
      for (auto& t : tasks)
        t = subsample_stratified(t, config.train_cap, config.test_cap,
                                 derive_seed(config.seed, "caps", static_cast<std::uint64_t>(t.task_id)));
      return tasks;
    }
  }
  throw std::invalid_argument("suite: unknown kind");
}

}  // namespace lps
