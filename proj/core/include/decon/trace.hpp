#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "decon/contamination.hpp"
#include "decon/dynamics.hpp"
#include "decon/graph.hpp"
#include "decon/view.hpp"

namespace decon {

inline constexpr const char* kTraceVersion = "decon-trace/1";

enum class OutcomeKind : std::uint8_t {
  FullSuccess,
  NodeSuccess,
  Stall,
  MonotonicityViolation,
  ModelViolation,
  RoundLimit,
};

std::string_view to_string(OutcomeKind kind) noexcept;
std::optional<OutcomeKind> parse_outcome_kind(std::string_view text) noexcept;
/// 0 FullSuccess, 2 NodeSuccess, 3 Stall, 4 MonotonicityViolation,
/// 5 ModelViolation, 6 RoundLimit.
int exit_code(OutcomeKind kind) noexcept;

struct Outcome {
  OutcomeKind kind = OutcomeKind::RoundLimit;
  Round round = 0;
  std::string detail;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct AgentRecord {
  AgentId id = 0;
  /// Position at the end of the round.
  NodeId node = 0;
  Action action;

  friend bool operator==(const AgentRecord&, const AgentRecord&) = default;
};

struct RoundRecord {
  Round round = 0;
  std::vector<EdgeId> absent;
  std::vector<AgentRecord> agents;
  /// Contamination at the end of the round; true = contaminated.
  NodeMask nodes;
  EdgeMask edges;
  std::vector<NodeId> violated_nodes;
  std::vector<EdgeId> violated_edges;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct TraceHeader {
  std::string version = kTraceVersion;
  std::uint64_t seed = 0;
  std::uint64_t scenario_hash = 0;
  std::size_t node_count = 0;
  std::vector<Edge> edges;
  DynamicityModel model;
  NodeId home = 0;
  std::string strategy;
  std::string adversary;
  std::size_t agents = 0;
  Round stall_window = 0;
  Round max_rounds = 0;

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct Trace {
  TraceHeader header;
  std::vector<RoundRecord> rounds;
  std::optional<Outcome> outcome;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// FNV-1a over the header fields that define the scenario (seed excluded).
std::uint64_t scenario_hash(const TraceHeader& header);

/// One JSON object per line: header, rounds, outcome. Keys are sorted so the
/// byte stream is a function of the trace alone.
void write_trace(std::ostream& out, const Trace& trace);
std::string trace_to_string(const Trace& trace);
/// Throws Error{CorruptTrace}.
Trace read_trace(std::istream& in);
Trace trace_from_string(const std::string& text);

struct VerifyReport {
  bool ok = true;
  /// First round at which the trace diverges from the rules.
  std::optional<Round> round;
  std::string message;
  std::size_t rounds_checked = 0;
};

/// Re-checks a trace without the engine: connectivity and the FTEA bound of
/// every round, legality of every move, contamination recomputed from the
/// moves, no clean-to-contaminated flips unless the outcome says so, and the
/// outcome itself.
VerifyReport verify_trace(const Trace& trace);

}  // namespace decon
