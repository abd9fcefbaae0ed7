#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlnc/netmodel.hpp"

namespace rlnc {

enum class EngineKind { Packetized, Occupancy, Chain, Reduced };

const char* to_string(EngineKind kind);
EngineKind engine_from_string(const std::string& name);  // throws UsageError

/// Parameters for a sweep run.  Flags on the command line override whatever
/// the config file's "experiment" block declares.
struct ExperimentConfig {
  EngineKind engine = EngineKind::Occupancy;
  std::vector<int> buffers;  // uniform buffer sweep; empty = run as declared
  std::uint64_t epochs = 1000000;   // Monte Carlo epochs, warmup included
  std::uint64_t block_size = 2000;  // packetized block length
  std::uint64_t replicas = 8;       // packetized replicas per sweep point
  int field_width = 16;             // field width in bits (packetized)
  std::optional<std::uint64_t> seed;  // mandatory before running
  std::string out;                    // CSV path; empty = stdout
};

struct ParsedConfig {
  NetworkDescription description;
  ErasureNetwork network;
  std::optional<ExperimentConfig> experiment;
};

/// Reads and validates a network config file.  Schema:
///   {
///     "nodes":  [{"id": "s"}, {"id": "1", "buffer": 2}, ...],
///     "edges":  [{"from": "s", "to": "1", "erasure": 0.1}, ...],
///     "source": "s",
///     "dest":   "d",
///     "experiment": { "engine": "...", "buffers": [...], "epochs": ...,
///                     "block_size": ..., "replicas": ..., "seed": ...,
///                     "out": "..." }            // optional block
///   }
/// "erasure" accepts a number or a decimal string; strings keep the exact
/// rational for min-cut arithmetic.  "buffer" defaults to 1 and is ignored
/// on the source and destination.
ParsedConfig parse_config(const std::string& path);

/// Same, from an in-memory JSON document (origin only labels errors).
ParsedConfig parse_config_text(const std::string& text,
                               const std::string& origin);

/// Canonical JSON for a validated network; parsing it back reproduces the
/// network exactly.
std::string serialize_config(const ErasureNetwork& net);

}  // namespace rlnc
