#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace decon {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using Port = std::uint32_t;
using AgentId = std::uint32_t;
using Round = std::uint64_t;

/// One flag per footprint edge, indexed by canonical EdgeId.
using EdgeMask = std::vector<bool>;
/// One flag per node.
using NodeMask = std::vector<bool>;

enum class ErrorCode {
  DuplicateEdge,
  PortClash,
  Disconnected,
  SelfLoop,
  NodeOutOfRange,
  BadN,
  BadDepth,
  BadParams,
  EdgeAbsent,
  InsufficientAgents,
  CorruptTrace,
  ConfigError,
  ScheduleError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace decon
