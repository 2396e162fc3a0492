#ifndef LPS_DATA_IO_HPP_
#define LPS_DATA_IO_HPP_

#include "lps/tasks.hpp"
#include "lps/types.hpp"

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace lps {

// Raw byte images as stored in IDX files: `count` images of rows x cols
// pixels each, row-major within an image.
struct ImageBytes {
  Index count = 0;
  Index rows = 0;
  Index cols = 0;
  std::vector<std::uint8_t> pixels;
};

// IDX image/label files (big-endian magic 0x00000803 / 0x00000801). Readers
// throw on unreadable paths, wrong magic, or short payloads; extra trailing
// bytes are ignored.
ImageBytes read_idx_images(const std::filesystem::path& file);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& file);
void write_idx_images(const std::filesystem::path& file, const ImageBytes& images);
void write_idx_labels(const std::filesystem::path& file, const std::vector<std::uint8_t>& labels);

// One row per image, flattened row-major, intensities scaled by 1/255.
Matrix to_unit_rows(const ImageBytes& images);

// CSV fallback: one row per sample, label first, then the features. When any
// feature exceeds 1 the whole feature block is treated as byte intensities
// and scaled by 1/255; otherwise values are taken verbatim.
std::pair<Matrix, Eigen::VectorXi> read_labeled_csv(const std::filesystem::path& file);

// Procedural 28x28 digit glyphs: seven-segment strokes with seeded jitter in
// position, stroke weight, ink level, and per-pixel noise. One image per
// entry of `labels` (values 0..9).
ImageBytes render_digit_images(const std::vector<std::uint8_t>& labels, std::uint64_t seed);

// Balanced synthetic digit dataset in task form (inputs in [0,1], labels
// 0..class_count-1, shuffled sample order).
TaskDataset synthetic_digit_corpus(Index train_count, Index test_count, int class_count,
                                   std::uint64_t seed);

// Base corpus for permuted/split suites. When the environment variable
// LPS_MNIST_DIR names a directory holding the four standard IDX files
// (train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-images-idx3-ubyte,
// t10k-labels-idx1-ubyte; '.' accepted in place of '-idx'), that data is
// loaded and filtered to labels below class_count. Otherwise a fixed
// synthetic corpus of 12000 train / 2000 test glyphs stands in.
TaskDataset load_digit_corpus(int class_count);

}  // namespace lps

#endif  // LPS_DATA_IO_HPP_
