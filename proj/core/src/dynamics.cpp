#include "decon/dynamics.hpp"

#include <istream>
#include <numeric>
#include <sstream>

#include "decon/generators.hpp"
#include "rng_util.hpp"

namespace decon {

void AbsenceLedger::record(const EdgeMask& present_edges) {
  absent_for.resize(present_edges.size(), 0);
  for (std::size_t e = 0; e < present_edges.size(); ++e) {
    absent_for[e] = present_edges[e] ? 0 : absent_for[e] + 1;
  }
}

NodeMask Configuration::guarded_nodes(std::size_t node_count) const {
  NodeMask guarded(node_count, false);
  for (const Agent& a : agents) guarded.at(a.position) = true;
  return guarded;
}

std::string_view to_string(ModelKind kind) noexcept { return kind == ModelKind::FTEA ? "FTEA" : "IDED"; }

DynamicityModel DynamicityModel::ftea(std::size_t T) {
  if (T < 1) throw Error(ErrorCode::BadParams, "FTEA needs T >= 1");
  return {ModelKind::FTEA, T};
}

std::string describe(const Violation& v) {
  if (v.kind == Violation::Kind::DisconnectedRound) return "disconnected round";
  return "edge " + std::to_string(v.edge.value_or(0)) + " absent beyond T";
}

std::optional<Violation> validate_decision(const Footprint& fp, const DynamicityModel& model,
                                           const AbsenceLedger& ledger,
                                           const AdversaryDecision& decision) {
  if (decision.present_edges.size() != fp.edge_count() || !is_connected(fp, decision.present_edges)) {
    return Violation{Violation::Kind::DisconnectedRound, std::nullopt};
  }
  if (model.kind == ModelKind::FTEA) {
    for (EdgeId e = 0; e < fp.edge_count(); ++e) {
      if (!decision.present_edges[e] && e < ledger.absent_for.size() && ledger.absent_for[e] >= model.T) {
        return Violation{Violation::Kind::TBoundExceeded, e};
      }
    }
  }
  return std::nullopt;
}

AdversaryDecision StaticAdversary::step(const Footprint& fp, const DynamicityModel&, const Configuration&) {
  return {EdgeMask(fp.edge_count(), true)};
}

AdversaryDecision WheelRimAdversary::step(const Footprint& fp, const DynamicityModel&,
                                          const Configuration& obs) {
  if (!released_) {
    NodeMask occupied = obs.guarded_nodes(fp.node_count());
    bool all = true;
    for (NodeId v = 0; v < fp.node_count(); ++v) all = all && (v == hub_ || occupied[v]);
    released_ = all;
  }
  EdgeMask present(fp.edge_count(), true);
  if (!released_) {
    for (EdgeId e = 0; e < fp.edge_count(); ++e) {
      present[e] = fp.edge(e).u == hub_ || fp.edge(e).v == hub_;
    }
  }
  return {present};
}

RandomAdversary::RandomAdversary(std::uint64_t seed, std::optional<std::size_t> bound,
                                 double removal_probability)
    : rng_(seed), bound_(bound), p_(removal_probability) {
  if (bound_ && *bound_ < 1) throw Error(ErrorCode::BadParams, "random_ftea needs T >= 1");
  if (!(p_ >= 0.0 && p_ <= 1.0)) throw Error(ErrorCode::BadParams, "removal probability outside [0,1]");
}

AdversaryDecision RandomAdversary::step(const Footprint& fp, const DynamicityModel&, const Configuration& obs) {
  const std::size_t m = fp.edge_count();
  EdgeMask present(m, false);
  for (EdgeId e = 0; e < m; ++e) {
    const bool was_present = e >= obs.present_edges.size() || obs.present_edges[e];
    const std::size_t absent = e < obs.ledger.absent_for.size() ? obs.ledger.absent_for[e] : 0;
    if (bound_ && absent >= *bound_) {
      present[e] = true;
    } else if (was_present) {
      present[e] = !detail::bernoulli(rng_, p_);
    } else if (bound_) {
      present[e] = false;
    } else {
      present[e] = !detail::bernoulli(rng_, p_);
    }
  }
  // Restore edges in canonical order until the round is connected.
  std::vector<NodeId> parent(fp.node_count());
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (EdgeId e = 0; e < m; ++e) {
    if (present[e]) parent[find(fp.edge(e).u)] = find(fp.edge(e).v);
  }
  for (EdgeId e = 0; e < m; ++e) {
    if (present[e]) continue;
    const NodeId a = find(fp.edge(e).u), b = find(fp.edge(e).v);
    if (a == b) continue;
    parent[a] = b;
    present[e] = true;
  }
  return {present};
}

AdversaryDecision HideEdgeAdversary::step(const Footprint& fp, const DynamicityModel&, const Configuration&) {
  EdgeMask present(fp.edge_count(), true);
  if (edge_ < present.size()) present[edge_] = false;
  return {present};
}

AdversaryDecision ScheduleAdversary::step(const Footprint& fp, const DynamicityModel&, const Configuration& obs) {
  EdgeMask present(fp.edge_count(), true);
  if (obs.round < schedule_.size()) {
    for (EdgeId e : schedule_[obs.round]) present.at(e) = false;
  }
  return {present};
}

std::unique_ptr<Adversary> random_ftea_adversary(std::uint64_t seed, std::size_t T, double removal_probability) {
  return std::make_unique<RandomAdversary>(seed, T, removal_probability);
}

std::unique_ptr<Adversary> random_ided_adversary(std::uint64_t seed, double removal_probability) {
  return std::make_unique<RandomAdversary>(seed, std::nullopt, removal_probability);
}

ScheduleAdversary load_schedule(std::istream& in, const Footprint& fp, const DynamicityModel& model) {
  std::vector<std::vector<EdgeId>> rounds;
  AbsenceLedger ledger = AbsenceLedger::fresh(fp.edge_count());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream fields(line);
    std::vector<EdgeId> absent;
    EdgeMask present(fp.edge_count(), true);
    long long e;
    while (fields >> e) {
      if (e < 0 || static_cast<std::size_t>(e) >= fp.edge_count()) {
        throw Error(ErrorCode::ScheduleError, "line " + std::to_string(line_no) + ": edge index out of range");
      }
      absent.push_back(static_cast<EdgeId>(e));
      present[static_cast<std::size_t>(e)] = false;
    }
    if (!fields.eof()) {
      throw Error(ErrorCode::ScheduleError, "line " + std::to_string(line_no) + ": not an edge index");
    }
    if (auto v = validate_decision(fp, model, ledger, {present})) {
      throw Error(ErrorCode::ScheduleError, "line " + std::to_string(line_no) + ": " + describe(*v));
    }
    ledger.record(present);
    rounds.push_back(std::move(absent));
  }
  return ScheduleAdversary(std::move(rounds));
}

ScenarioSetup bipartite_scenario(std::size_t n) {
  if (n <= 4 || n % 2 != 0) throw Error(ErrorCode::BadN, "bipartite scenario needs even n > 4");
  return {complete_bipartite_graph(n), std::make_unique<StaticAdversary>(), DynamicityModel::ftea(1), 0};
}

ScenarioSetup wheel_scenario(std::size_t n) {
  if (n <= 4) throw Error(ErrorCode::BadN, "wheel scenario needs n > 4");
  return {wheel_graph(n), std::make_unique<WheelRimAdversary>(0), DynamicityModel::ided(), 0};
}

ScenarioSetup diameter_tree_scenario(std::size_t depth) {
  if (depth < 1 || depth > 20) throw Error(ErrorCode::BadDepth, "diameter tree needs 1 <= depth <= 20");
  return {complete_binary_tree(depth), std::make_unique<StaticAdversary>(), DynamicityModel::ftea(1), 0};
}

}  // namespace decon
