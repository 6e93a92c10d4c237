#include "decon/memory.hpp"

#include <algorithm>
#include <queue>

#include <json.hpp>

namespace decon {

bool NodeKnowledge::finished() const noexcept {
  return std::all_of(ports.begin(), ports.end(), [](const PortKnowledge& p) { return p.clean; });
}

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Mobile: return "mobile";
    case Role::Settled: return "settled";
    case Role::Cleaner: return "cleaner";
  }
  return "unknown";
}

NodeKnowledge& KnownMap::touch(NodeKey key, std::size_t degree, Round round) {
  auto [it, inserted] = nodes_.try_emplace(key);
  if (inserted) {
    it->second.discovered = round;
    it->second.ports.resize(degree);
  } else {
    it->second.discovered = std::min(it->second.discovered, round);
    if (it->second.ports.size() < degree) it->second.ports.resize(degree);
  }
  return it->second;
}

void KnownMap::link(NodeKey a, Port pa, NodeKey b, Port pb) {
  auto& pka = nodes_.at(a).ports.at(pa);
  auto& pkb = nodes_.at(b).ports.at(pb);
  pka.clean = pkb.clean = true;
  pka.neighbor = b;
  pka.remote_port = pb;
  pkb.neighbor = a;
  pkb.remote_port = pa;
}

void KnownMap::mark_clean(NodeKey key, Port p) { nodes_.at(key).ports.at(p).clean = true; }

void KnownMap::observe_presence(NodeKey key, Port p, bool present, Round round) {
  auto& pk = nodes_.at(key).ports.at(p);
  if (pk.observed_at && *pk.observed_at > round) return;
  pk.observed_at = round;
  pk.observed_missing = !present;
}

namespace {

template <class T>
std::optional<T> join_optional(const std::optional<T>& a, const std::optional<T>& b) {
  if (a && b) return std::min(*a, *b);
  return a ? a : b;
}

void join_port(PortKnowledge& into, const PortKnowledge& from) {
  into.clean = into.clean || from.clean;
  if (into.neighbor && from.neighbor && *into.neighbor != *from.neighbor) {
    // Conflicting names cannot arise from a consistent run; pick deterministically.
    if (*from.neighbor < *into.neighbor) {
      into.neighbor = from.neighbor;
      into.remote_port = from.remote_port;
    }
  } else {
    into.neighbor = join_optional(into.neighbor, from.neighbor);
    into.remote_port = join_optional(into.remote_port, from.remote_port);
  }
  if (!from.observed_at) return;
  if (!into.observed_at || *from.observed_at > *into.observed_at) {
    into.observed_at = from.observed_at;
    into.observed_missing = from.observed_missing;
  } else if (*from.observed_at == *into.observed_at) {
    into.observed_missing = into.observed_missing || from.observed_missing;
  }
}

}  // namespace

void KnownMap::merge(const KnownMap& other) {
  for (const auto& [key, theirs] : other.nodes_) {
    auto [it, inserted] = nodes_.try_emplace(key, theirs);
    if (inserted) continue;
    NodeKnowledge& mine = it->second;
    mine.discovered = std::min(mine.discovered, theirs.discovered);
    if (mine.ports.size() < theirs.ports.size()) mine.ports.resize(theirs.ports.size());
    for (std::size_t p = 0; p < theirs.ports.size(); ++p) join_port(mine.ports[p], theirs.ports[p]);
  }
}

std::optional<Port> KnownMap::next_hop(NodeKey from, NodeKey to, std::span<const Port> blocked) const {
  if (from == to || !contains(from) || !contains(to)) return std::nullopt;
  // BFS from the destination so ties at `from` resolve by lowest port.
  std::map<NodeKey, std::size_t> dist;
  std::queue<NodeKey> frontier;
  dist[to] = 0;
  frontier.push(to);
  while (!frontier.empty()) {
    NodeKey v = frontier.front();
    frontier.pop();
    if (v == from) break;
    for (const PortKnowledge& pk : nodes_.at(v).ports) {
      if (!pk.neighbor || !contains(*pk.neighbor) || dist.count(*pk.neighbor)) continue;
      // `from`'s blocked ports are checked from its own side below.
      dist[*pk.neighbor] = dist[v] + 1;
      frontier.push(*pk.neighbor);
    }
  }
  const auto& ports = nodes_.at(from).ports;
  std::optional<Port> best;
  std::size_t best_dist = static_cast<std::size_t>(-1);
  for (Port p = 0; p < ports.size(); ++p) {
    if (!ports[p].neighbor) continue;
    if (std::find(blocked.begin(), blocked.end(), p) != blocked.end()) continue;
    auto it = dist.find(*ports[p].neighbor);
    if (it == dist.end() || it->second >= best_dist) continue;
    best = p;
    best_dist = it->second;
  }
  return best;
}

KnownMap merge_knowledge(std::span<const Memory* const> group) {
  KnownMap out;
  for (const Memory* m : group) out.merge(m->map);
  return out;
}

namespace {

using nlohmann::json;

json port_to_json(const PortKnowledge& p) {
  json j;
  j["clean"] = p.clean;
  j["neighbor"] = p.neighbor ? json(*p.neighbor) : json(nullptr);
  j["remote_port"] = p.remote_port ? json(*p.remote_port) : json(nullptr);
  j["observed_at"] = p.observed_at ? json(*p.observed_at) : json(nullptr);
  j["observed_missing"] = p.observed_missing;
  return j;
}

template <class T>
std::optional<T> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace

std::string serialize(const Memory& memory) {
  json j;
  j["role"] = std::string(to_string(memory.role));
  j["here"] = memory.here ? json(*memory.here) : json(nullptr);
  j["exploring"] = memory.exploring;
  if (memory.last_move) {
    j["last_move"] = json::array({memory.last_move->first, memory.last_move->second});
  } else {
    j["last_move"] = nullptr;
  }
  json nodes = json::array();
  for (const auto& [key, info] : memory.map.nodes()) {
    json ports = json::array();
    for (const auto& p : info.ports) ports.push_back(port_to_json(p));
    nodes.push_back(json{{"key", key}, {"discovered", info.discovered}, {"ports", ports}});
  }
  j["map"] = nodes;
  return j.dump();
}

Memory deserialize_memory(const std::string& text) {
  json j = json::parse(text);
  Memory m;
  const std::string role = j.at("role").get<std::string>();
  m.role = role == "settled" ? Role::Settled : role == "cleaner" ? Role::Cleaner : Role::Mobile;
  m.here = opt_from<NodeKey>(j.at("here"));
  m.exploring = j.at("exploring").get<bool>();
  if (!j.at("last_move").is_null()) {
    m.last_move = std::make_pair(j["last_move"][0].get<NodeKey>(), j["last_move"][1].get<Port>());
  }
  for (const json& node : j.at("map")) {
    const auto key = node.at("key").get<NodeKey>();
    const auto& ports = node.at("ports");
    NodeKnowledge& info = m.map.touch(key, ports.size(), node.at("discovered").get<Round>());
    for (std::size_t p = 0; p < ports.size(); ++p) {
      PortKnowledge& pk = info.ports[p];
      pk.clean = ports[p].at("clean").get<bool>();
      pk.neighbor = opt_from<NodeKey>(ports[p].at("neighbor"));
      pk.remote_port = opt_from<Port>(ports[p].at("remote_port"));
      pk.observed_at = opt_from<Round>(ports[p].at("observed_at"));
      pk.observed_missing = ports[p].at("observed_missing").get<bool>();
    }
  }
  return m;
}

}  // namespace decon
