#pragma once

// Running moment integrals persisted on a fixed grid of multiples of the
// segment length. File format, one record per line after the header:
//
//   # zetalab-checkpoint v1
//   k,T,cumulative_value,cumulative_err,config_digest
//
// Values are written with 17 significant digits, so a resumed run continues
// from exactly the doubles it stopped at.

#include <functional>
#include <string>
#include <vector>

#include "zetalab/moment_profile.hpp"

namespace zetalab::moment {

inline constexpr const char* kCheckpointHeader = "# zetalab-checkpoint v1";

struct CheckpointRecord {
  int k = 0;
  double T = 0.0;
  double value = 0.0;
  double err = 0.0;
  std::string digest;
};

struct MomentCheckpoint {
  int k = 0;
  std::string digest;
  std::vector<CheckpointRecord> grid;  // T strictly increasing
};

/// 16 hex digits (FNV-1a) over every setting that changes the numbers.
std::string config_digest(int k, const PrecisionContext& ctx, const QuadConfig& cfg);

std::string format_record(const CheckpointRecord& r);
CheckpointRecord parse_record(const std::string& line);

/// Records for k. A missing file gives an empty checkpoint. Throws
/// validation-error on a digest mismatch, non-increasing T or decreasing
/// values, and parse-error on malformed lines.
MomentCheckpoint read_checkpoint(const std::string& path, int k, const std::string& digest);

/// Appends under an exclusive lock, writing the header if the file is new.
void append_records(const std::string& path, const std::vector<CheckpointRecord>& records);

/// Extends the k-th moment checkpoint to T_end (rounded up to a multiple of
/// the segment length). Segments are integrated independently and added in
/// order, so stopping and resuming yields the same file.
MomentCheckpoint run_checkpointed(int k, double T_end, const PrecisionContext& ctx, const QuadConfig& cfg,
                                  const std::string& path, const ZSource& source = {},
                                  const std::function<void(const CheckpointRecord&)>& on_record = {});

}  // namespace zetalab::moment
