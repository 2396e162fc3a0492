#ifndef LPS_CHECKPOINT_HPP_
#define LPS_CHECKPOINT_HPP_

#include "lps/trainer.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace lps {

inline constexpr int kCheckpointVersion = 1;

// A saved run: the engine (ledger, shared biases, root seed) plus the
// evaluation matrix rows recorded so far and a hash of the configuration
// that produced them. Restoring and continuing gives bit-identical results
// to the uninterrupted run because every random stream is re-derived from
// (root seed, task id, epoch).
struct Checkpoint {
  int format_version = kCheckpointVersion;
  Engine engine;
  std::uint64_t config_hash = 0;
  std::vector<std::vector<EvalRecord>> eval_rows;
};

// On disk: an 8-byte magic, a little-endian header length, a JSON header
// (shapes, seeds, section directory, payload digest), then the payload with
// every matrix as little-endian float64 or 0/1 bytes in row-major order.
// The digest is checked before any matrix is used; version mismatch,
// truncation, and corruption all fail loudly. Writes go through a temp file
// and rename, so an interrupted save never leaves a half-written checkpoint.
void save_checkpoint(const std::filesystem::path& file, const Checkpoint& state);
Checkpoint load_checkpoint(const std::filesystem::path& file);

}  // namespace lps

#endif  // LPS_CHECKPOINT_HPP_
