#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "decon/configuration.hpp"
#include "decon/dynamics.hpp"
#include "decon/strategy.hpp"
#include "decon/trace.hpp"

namespace decon {

struct RunOptions {
  Round max_rounds = 1'000'000;
  /// Empty: 4n(T+1) under FTEA, 4n^2 under IDED. Zero disables detection.
  std::optional<Round> stall_window;
  /// Empty: whatever the strategy requires.
  std::optional<bool> node_oracle;
  /// Hide the status of absent incident edges.
  bool strict_visibility = false;
  /// Present co-located memories to merge() in a seeded random order.
  bool shuffle_exchange = false;
  std::uint64_t shuffle_seed = 0;
  /// Recorded in the trace header only.
  std::uint64_t seed = 0;
};

struct RunSpec {
  const Footprint* footprint = nullptr;
  DynamicityModel model;
  Adversary* adversary = nullptr;
  const Strategy* strategy = nullptr;
  std::size_t agent_count = 1;
  NodeId home = 0;
  RunOptions options;
};

struct RunResult {
  Trace trace;
  Outcome outcome;
  Configuration final_configuration;
  /// First round at whose end every node was clean.
  std::optional<Round> all_nodes_clean_at;
  std::size_t moves = 0;
};

Round default_stall_window(std::size_t node_count, const DynamicityModel& model);

/// Opaque stable node name handed out by the node-identity oracle.
NodeKey node_handle(NodeId v) noexcept;

struct ViewOptions {
  bool node_oracle = false;
  bool strict_visibility = false;
};

/// What `self` sees at `node`. Peers (self included) appear in ascending id
/// order with their current memories.
LocalView local_view(const Configuration& config, const Footprint& fp, NodeId node, AgentId self,
                     const ViewOptions& options);

/// One shared snapshot per agent, parallel to `config.agents`.
using MemorySnapshots = std::vector<std::shared_ptr<const Memory>>;
MemorySnapshots snapshot_memories(const Configuration& config);

/// Same as above, with peers taken from `snapshots`.
LocalView local_view(const Configuration& config, const Footprint& fp, NodeId node, AgentId self,
                     const ViewOptions& options, const MemorySnapshots& snapshots);

/// Merges the memories of one co-located group through the strategy.
void exchange(const Strategy& strategy, std::span<Agent* const> group, std::mt19937_64* shuffle = nullptr);

/// A round is quiet when nobody moved, contamination did not change and the
/// edge set equals the previous round's.
bool is_quiet(const RoundRecord& previous, const RoundRecord& current);

/// True when every round after the first in `window` is quiet.
bool detect_stall(std::span<const RoundRecord> window);

/// Executes one scenario. Throws Error{BadParams} on a malformed spec.
RunResult run(const RunSpec& spec);

}  // namespace decon
