#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlnc/config.hpp"
#include "rlnc/netmodel.hpp"

namespace rlnc {

struct SweepRow {
  int buffer_size = 0;  // uniform buffer at this point; 0 = as declared
  EngineKind engine = EngineKind::Occupancy;
  std::uint64_t work = 0;  // epochs (occupancy/reduced), block length
                           // (packetized), or 0 (chain)
  double throughput = 0.0;
  double ci95 = 0.0;        // half-width of the 95% interval; 0 for chain
  std::uint64_t seed = 0;   // per-point derived seed (0 for chain)
  std::uint64_t wall_ms = 0;  // stays 0 unless timing collection is on
  std::string status = "ok";  // or the error kind that stopped the point
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string config_echo;  // resolved parameters, one line, for the header
};

/// Per-point seed derivation: deterministic function of the base seed and
/// the point index, independent of threading and run order.
std::uint64_t seed_for_point(std::uint64_t base_seed, std::size_t index);

/// Runs one sweep point per entry of cfg.buffers (or a single as-declared
/// point when the list is empty).  Points run in parallel, capped by the
/// RLNC_THREADS environment variable (default: hardware concurrency); rows
/// come back in point order regardless.  Per-point failures are recorded in
/// the row's status instead of propagating, so one bad point cannot take
/// down a sweep.  cfg.seed must be set.
SweepResult run_sweep(const ErasureNetwork& net, const ExperimentConfig& cfg,
                      bool collect_timing = false);

/// Deterministic CSV: a `#` header echoing the resolved parameters, a column
/// header, then one row per sweep point.  Identical inputs give identical
/// bytes (wall_ms is zeroed unless timing collection was requested).
std::string sweep_to_csv(const SweepResult& result);

struct CompareOutcome {
  bool pass = false;
  std::string report;
};

/// Row-by-row comparison of two sweeps over the same points: a pair of rows
/// agrees when the relative gap is within `tolerance` or the 95% intervals
/// overlap.  Throws MismatchedSweep when the point grids differ.
CompareOutcome compare_sweeps(const SweepResult& a, const SweepResult& b,
                              double tolerance);

}  // namespace rlnc
