#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "decon/configuration.hpp"
#include "decon/graph.hpp"

namespace decon {

enum class ModelKind : std::uint8_t { FTEA, IDED };

std::string_view to_string(ModelKind kind) noexcept;

/// FTEA: an edge may be absent for at most T consecutive rounds and must be
/// present in the (T+1)-th. IDED: no bound.
struct DynamicityModel {
  ModelKind kind = ModelKind::FTEA;
  std::size_t T = 1;

  static DynamicityModel ftea(std::size_t T);
  static DynamicityModel ided() { return {ModelKind::IDED, 0}; }

  friend bool operator==(const DynamicityModel&, const DynamicityModel&) = default;
};

struct AdversaryDecision {
  EdgeMask present_edges;
};

struct Violation {
  enum class Kind : std::uint8_t { DisconnectedRound, TBoundExceeded };
  Kind kind = Kind::DisconnectedRound;
  std::optional<EdgeId> edge;
};

std::string describe(const Violation& v);

/// ok (nullopt) iff the present edges span a connected graph and, under
/// FTEA, every edge whose ledger count reached T is present.
std::optional<Violation> validate_decision(const Footprint& fp, const DynamicityModel& model,
                                           const AbsenceLedger& ledger,
                                           const AdversaryDecision& decision);

/// Decides the edge set of a round after observing the configuration at
/// the end of the previous round. Adversaries are single-run objects.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  virtual AdversaryDecision step(const Footprint& fp, const DynamicityModel& model,
                                 const Configuration& observation) = 0;
  virtual std::unique_ptr<Adversary> clone() const = 0;
};

class StaticAdversary final : public Adversary {
 public:
  std::string name() const override { return "static"; }
  AdversaryDecision step(const Footprint& fp, const DynamicityModel&, const Configuration&) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<StaticAdversary>(*this); }
};

/// Keeps every rim edge of a wheel absent until each outer vertex holds an
/// agent, then restores all edges for good.
class WheelRimAdversary final : public Adversary {
 public:
  explicit WheelRimAdversary(NodeId hub) : hub_(hub) {}
  std::string name() const override { return "wheel_rim"; }
  AdversaryDecision step(const Footprint& fp, const DynamicityModel&, const Configuration& obs) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<WheelRimAdversary>(*this); }
  bool released() const noexcept { return released_; }

 private:
  NodeId hub_;
  bool released_ = false;
};

/// Seeded stress adversary. Each round every present edge is dropped with
/// probability p; absent edges stay absent until the FTEA bound forces them
/// back (when `bound` is set); edges are then restored in canonical order
/// until the round is connected.
class RandomAdversary final : public Adversary {
 public:
  RandomAdversary(std::uint64_t seed, std::optional<std::size_t> bound, double removal_probability);
  std::string name() const override { return bound_ ? "random_ftea" : "random_ided"; }
  AdversaryDecision step(const Footprint& fp, const DynamicityModel&, const Configuration& obs) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<RandomAdversary>(*this); }

 private:
  std::mt19937_64 rng_;
  std::optional<std::size_t> bound_;
  double p_;
};

/// Hides one edge forever; everything else stays present.
class HideEdgeAdversary final : public Adversary {
 public:
  explicit HideEdgeAdversary(EdgeId edge) : edge_(edge) {}
  std::string name() const override { return "hide_edge"; }
  AdversaryDecision step(const Footprint& fp, const DynamicityModel&, const Configuration&) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<HideEdgeAdversary>(*this); }

 private:
  EdgeId edge_;
};

/// Oblivious schedule: entry i lists the edges absent in round i+1. Rounds
/// past the end of the schedule have every edge present.
class ScheduleAdversary final : public Adversary {
 public:
  explicit ScheduleAdversary(std::vector<std::vector<EdgeId>> absent_by_round)
      : schedule_(std::move(absent_by_round)) {}
  std::string name() const override { return "schedule"; }
  AdversaryDecision step(const Footprint& fp, const DynamicityModel&, const Configuration& obs) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<ScheduleAdversary>(*this); }
  const std::vector<std::vector<EdgeId>>& schedule() const noexcept { return schedule_; }

 private:
  std::vector<std::vector<EdgeId>> schedule_;
};

std::unique_ptr<Adversary> random_ftea_adversary(std::uint64_t seed, std::size_t T,
                                                 double removal_probability);
std::unique_ptr<Adversary> random_ided_adversary(std::uint64_t seed, double removal_probability);

/// One line per round, whitespace-separated absent edge indices. Every line
/// is checked against connectivity and, for FTEA, the T bound. Throws
/// Error{ScheduleError}.
ScheduleAdversary load_schedule(std::istream& in, const Footprint& fp, const DynamicityModel& model);

/// Ready-made lower-bound constructions.
struct ScenarioSetup {
  Footprint footprint;
  std::unique_ptr<Adversary> adversary;
  DynamicityModel model;
  NodeId home = 0;
};

/// K_{n/2,n/2}, static edges, Home = a1. n even and > 4, else Error{BadN}.
ScenarioSetup bipartite_scenario(std::size_t n);
/// Wheel on n vertices with the rim adversary under IDED, Home = hub. n > 4.
ScenarioSetup wheel_scenario(std::size_t n);
/// Complete binary tree of the given depth, static, Home = root. depth >= 1.
ScenarioSetup diameter_tree_scenario(std::size_t depth);

}  // namespace decon
