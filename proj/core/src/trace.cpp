#include "decon/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace decon {

namespace {

constexpr std::string_view kOutcomeNames[] = {"FullSuccess",           "NodeSuccess",    "Stall",
                                              "MonotonicityViolation", "ModelViolation", "RoundLimit"};

}  // namespace

std::string_view to_string(OutcomeKind kind) noexcept { return kOutcomeNames[static_cast<std::size_t>(kind)]; }

std::optional<OutcomeKind> parse_outcome_kind(std::string_view text) noexcept {
  for (std::size_t i = 0; i < std::size(kOutcomeNames); ++i) {
    if (kOutcomeNames[i] == text) return static_cast<OutcomeKind>(i);
  }
  return std::nullopt;
}

int exit_code(OutcomeKind kind) noexcept {
  switch (kind) {
    case OutcomeKind::FullSuccess: return 0;
    case OutcomeKind::NodeSuccess: return 2;
    case OutcomeKind::Stall: return 3;
    case OutcomeKind::MonotonicityViolation: return 4;
    case OutcomeKind::ModelViolation: return 5;
    case OutcomeKind::RoundLimit: return 6;
  }
  return 1;
}

std::uint64_t scenario_hash(const TraceHeader& h) {
  std::ostringstream s;
  s << h.node_count << ';';
  for (const Edge& e : h.edges) s << e.u << ' ' << e.v << ' ' << e.pu << ' ' << e.pv << ',';
  s << ';' << to_string(h.model.kind) << ';' << h.model.T << ';' << h.home << ';' << h.strategy << ';' << h.adversary
    << ';' << h.agents << ';' << h.stall_window << ';' << h.max_rounds;
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : s.str()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

namespace {

using nlohmann::json;

std::string bits(const std::vector<bool>& mask) {
  std::string out(mask.size(), '0');
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? '1' : '0';
  return out;
}

std::vector<bool> unbits(const std::string& text) {
  std::vector<bool> out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') throw Error(ErrorCode::CorruptTrace, "bad bitset");
    out[i] = text[i] == '1';
  }
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json header_json(const TraceHeader& h) {
  json edges = json::array();
  for (const Edge& e : h.edges) edges.push_back({e.u, e.v, e.pu, e.pv});
  return {{"type", "header"},
          {"version", h.version},
          {"seed", h.seed},
          {"scenario_hash", hex64(h.scenario_hash)},
          {"n", h.node_count},
          {"edges", edges},
          {"model", std::string(to_string(h.model.kind))},
          {"T", h.model.T},
          {"home", h.home},
          {"strategy", h.strategy},
          {"adversary", h.adversary},
          {"agents", h.agents},
          {"stall_window", h.stall_window},
          {"max_rounds", h.max_rounds}};
}

json round_json(const RoundRecord& r) {
  json agents = json::array();
  for (const AgentRecord& a : r.agents) agents.push_back({a.id, a.node, to_string(a.action)});
  return {{"type", "round"},
          {"r", r.round},
          {"absent", r.absent},
          {"agents", agents},
          {"nodes", bits(r.nodes)},
          {"edges", bits(r.edges)},
          {"viol", {{"nodes", r.violated_nodes}, {"edges", r.violated_edges}}}};
}

json outcome_json(const Outcome& o) {
  return {{"type", "outcome"}, {"kind", std::string(to_string(o.kind))}, {"round", o.round}, {"detail", o.detail}};
}

TraceHeader parse_header(const json& j) {
  TraceHeader h;
  h.version = j.at("version").get<std::string>();
  if (h.version != kTraceVersion) throw Error(ErrorCode::CorruptTrace, "unsupported trace version " + h.version);
  h.seed = j.at("seed").get<std::uint64_t>();
  h.scenario_hash = std::stoull(j.at("scenario_hash").get<std::string>(), nullptr, 16);
  h.node_count = j.at("n").get<std::size_t>();
  for (const json& e : j.at("edges")) {
    h.edges.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<Port>(), e.at(3).get<Port>()});
  }
  const std::string model = j.at("model").get<std::string>();
  if (model == "FTEA") {
    h.model = {ModelKind::FTEA, j.at("T").get<std::size_t>()};
  } else if (model == "IDED") {
    h.model = {ModelKind::IDED, j.at("T").get<std::size_t>()};
  } else {
    throw Error(ErrorCode::CorruptTrace, "unknown model " + model);
  }
  h.home = j.at("home").get<NodeId>();
  h.strategy = j.at("strategy").get<std::string>();
  h.adversary = j.at("adversary").get<std::string>();
  h.agents = j.at("agents").get<std::size_t>();
  h.stall_window = j.at("stall_window").get<Round>();
  h.max_rounds = j.at("max_rounds").get<Round>();
  return h;
}

RoundRecord parse_round(const json& j) {
  RoundRecord r;
  r.round = j.at("r").get<Round>();
  r.absent = j.at("absent").get<std::vector<EdgeId>>();
  for (const json& a : j.at("agents")) {
    auto action = parse_action(a.at(2).get<std::string>());
    if (!action) throw Error(ErrorCode::CorruptTrace, "bad action");
    r.agents.push_back({a.at(0).get<AgentId>(), a.at(1).get<NodeId>(), *action});
  }
  r.nodes = unbits(j.at("nodes").get<std::string>());
  r.edges = unbits(j.at("edges").get<std::string>());
  r.violated_nodes = j.at("viol").at("nodes").get<std::vector<NodeId>>();
  r.violated_edges = j.at("viol").at("edges").get<std::vector<EdgeId>>();
  return r;
}

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  out << header_json(trace.header).dump() << '\n';
  for (const RoundRecord& r : trace.rounds) out << round_json(r).dump() << '\n';
  if (trace.outcome) out << outcome_json(*trace.outcome).dump() << '\n';
}

std::string trace_to_string(const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (have_header) throw Error(ErrorCode::CorruptTrace, "second header");
        trace.header = parse_header(j);
        have_header = true;
      } else if (!have_header) {
        throw Error(ErrorCode::CorruptTrace, "record before header");
      } else if (trace.outcome) {
        throw Error(ErrorCode::CorruptTrace, "record after outcome");
      } else if (type == "round") {
        trace.rounds.push_back(parse_round(j));
      } else if (type == "outcome") {
        auto kind = parse_outcome_kind(j.at("kind").get<std::string>());
        if (!kind) throw Error(ErrorCode::CorruptTrace, "unknown outcome kind");
        trace.outcome = Outcome{*kind, j.at("round").get<Round>(), j.at("detail").get<std::string>()};
      } else {
        throw Error(ErrorCode::CorruptTrace, "unknown record type " + type);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CorruptTrace) {
        throw Error(ErrorCode::CorruptTrace, "line " + std::to_string(line_no) + ": " + e.what());
      }
      throw;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::CorruptTrace, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw Error(ErrorCode::CorruptTrace, "missing header");
  return trace;
}

Trace trace_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

// ---- verification ----

namespace {

struct Rules {
  std::size_t n = 0;
  std::vector<Edge> edges;
  /// adjacency[v][p] = edge index at port p.
  std::vector<std::vector<std::optional<EdgeId>>> adjacency;
};

std::optional<std::string> load_rules(const TraceHeader& h, Rules& rules) {
  rules.n = h.node_count;
  rules.edges = h.edges;
  if (rules.n == 0) return "empty graph";
  std::vector<std::size_t> degree(rules.n, 0);
  for (const Edge& e : rules.edges) {
    if (e.u >= rules.n || e.v >= rules.n || e.u == e.v) return "bad edge in header";
    ++degree[e.u];
    ++degree[e.v];
  }
  rules.adjacency.resize(rules.n);
  for (NodeId v = 0; v < rules.n; ++v) rules.adjacency[v].resize(degree[v]);
  for (EdgeId e = 0; e < rules.edges.size(); ++e) {
    const Edge& ed = rules.edges[e];
    if (ed.pu >= degree[ed.u] || ed.pv >= degree[ed.v]) return "port out of range in header";
    auto& a = rules.adjacency[ed.u][ed.pu];
    auto& b = rules.adjacency[ed.v][ed.pv];
    if (a || b) return "port used twice in header";
    a = e;
    b = e;
  }
  return std::nullopt;
}

bool connected(const Rules& rules, const std::vector<bool>& present) {
  std::vector<bool> seen(rules.n, false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (const auto& slot : rules.adjacency[v]) {
      if (!present[*slot]) continue;
      const Edge& e = rules.edges[*slot];
      const NodeId w = e.u == v ? e.v : e.u;
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == rules.n;
}

// Naive fixpoint iteration.
void close_contamination(const Rules& rules, std::vector<bool>& nodes, std::vector<bool>& edges,
                         const std::vector<bool>& present, const std::vector<bool>& guarded) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (EdgeId e = 0; e < rules.edges.size(); ++e) {
      if (!present[e]) continue;
      const NodeId u = rules.edges[e].u, v = rules.edges[e].v;
      if (!edges[e] && (nodes[u] || nodes[v])) {
        edges[e] = true;
        changed = true;
      }
      if (edges[e]) {
        for (NodeId w : {u, v}) {
          if (!nodes[w] && !guarded[w]) {
            nodes[w] = true;
            changed = true;
          }
        }
      }
    }
  }
}

VerifyReport fail(VerifyReport report, std::optional<Round> round, std::string message) {
  report.ok = false;
  report.round = round;
  report.message = std::move(message);
  return report;
}

bool all_false(const std::vector<bool>& v) { return std::none_of(v.begin(), v.end(), [](bool b) { return b; }); }

}  // namespace

VerifyReport verify_trace(const Trace& trace) {
  VerifyReport report;
  const TraceHeader& h = trace.header;
  Rules rules;
  if (auto problem = load_rules(h, rules)) return fail(report, std::nullopt, *problem);
  if (h.home >= rules.n) return fail(report, std::nullopt, "home out of range");
  if (h.agents < 1) return fail(report, std::nullopt, "no agents");
  if (h.model.kind == ModelKind::FTEA && h.model.T < 1) return fail(report, std::nullopt, "FTEA with T = 0");
  if (trace.rounds.empty()) return fail(report, std::nullopt, "no rounds");
  if (!trace.outcome) return fail(report, std::nullopt, "missing outcome");
  const std::size_t m = rules.edges.size();

  // Round 0: placement.
  std::vector<bool> nodes(rules.n, true), edges(m, true);
  nodes[h.home] = false;
  {
    const RoundRecord& r0 = trace.rounds.front();
    if (r0.round != 0 || !r0.absent.empty()) return fail(report, 0, "round 0 malformed");
    if (r0.agents.size() != h.agents) return fail(report, 0, "wrong agent count");
    for (std::size_t i = 0; i < r0.agents.size(); ++i) {
      const AgentRecord& a = r0.agents[i];
      if (a.id != i + 1 || a.node != h.home || a.action.is_move()) return fail(report, 0, "agents not placed at home");
    }
    if (r0.nodes != nodes || r0.edges != edges) return fail(report, 0, "initial contamination mismatch");
  }
  report.rounds_checked = 1;

  std::vector<std::size_t> absent_run(m, 0);
  Round quiet = 0;
  bool saw_violation = false;
  for (std::size_t i = 1; i < trace.rounds.size(); ++i) {
    const RoundRecord& prev = trace.rounds[i - 1];
    const RoundRecord& r = trace.rounds[i];
    if (r.round != prev.round + 1) return fail(report, r.round, "rounds not consecutive");
    if (saw_violation) return fail(report, r.round, "rounds after a violation");
    std::vector<bool> present(m, true);
    for (EdgeId e : r.absent) {
      if (e >= m) return fail(report, r.round, "absent edge out of range");
      present[e] = false;
    }
    if (!connected(rules, present)) return fail(report, r.round, "round is disconnected");
    for (EdgeId e = 0; e < m; ++e) {
      if (present[e]) {
        absent_run[e] = 0;
        continue;
      }
      if (h.model.kind == ModelKind::FTEA && absent_run[e] >= h.model.T) {
        return fail(report, r.round, "edge " + std::to_string(e) + " absent more than T rounds");
      }
      ++absent_run[e];
    }

    if (r.agents.size() != prev.agents.size()) return fail(report, r.round, "agent set changed");
    std::vector<bool> next_nodes = nodes, next_edges = edges, guarded(rules.n, false);
    bool moved = false;
    for (std::size_t k = 0; k < r.agents.size(); ++k) {
      const AgentRecord& a = r.agents[k];
      const AgentRecord& was = prev.agents[k];
      if (a.id != was.id || a.node >= rules.n) return fail(report, r.round, "agent record mismatch");
      if (a.action.is_move()) {
        moved = true;
        const auto& ports = rules.adjacency[was.node];
        if (a.action.port >= ports.size()) return fail(report, r.round, "move through a nonexistent port");
        const EdgeId e = *ports[a.action.port];
        if (!present[e]) return fail(report, r.round, "agent " + std::to_string(a.id) + " moved on an absent edge");
        const Edge& ed = rules.edges[e];
        if (a.node != (ed.u == was.node ? ed.v : ed.u)) return fail(report, r.round, "move lands on the wrong node");
        next_edges[e] = false;
      } else if (a.node != was.node) {
        return fail(report, r.round, "agent moved without a move action");
      }
      next_nodes[a.node] = false;
      guarded[a.node] = true;
    }
    close_contamination(rules, next_nodes, next_edges, present, guarded);
    if (next_nodes != r.nodes || next_edges != r.edges) return fail(report, r.round, "contamination mismatch");

    std::vector<NodeId> flipped_nodes;
    std::vector<EdgeId> flipped_edges;
    for (NodeId v = 0; v < rules.n; ++v) {
      if (!nodes[v] && next_nodes[v]) flipped_nodes.push_back(v);
    }
    for (EdgeId e = 0; e < m; ++e) {
      if (!edges[e] && next_edges[e]) flipped_edges.push_back(e);
    }
    if (flipped_nodes != r.violated_nodes || flipped_edges != r.violated_edges) {
      return fail(report, r.round, "violation list does not match");
    }
    if (!flipped_nodes.empty() || !flipped_edges.empty()) {
      saw_violation = true;
      if (trace.outcome->kind != OutcomeKind::MonotonicityViolation) {
        return fail(report, r.round, "recontamination in a run not marked as violating");
      }
    }
    const bool quiet_round = !moved && nodes == next_nodes && edges == next_edges && prev.absent == r.absent;
    quiet = quiet_round ? quiet + 1 : 0;
    if (i + 1 < trace.rounds.size() && all_false(next_nodes) && all_false(next_edges)) {
      return fail(report, r.round, "run continued after full decontamination");
    }
    nodes = std::move(next_nodes);
    edges = std::move(next_edges);
    ++report.rounds_checked;
  }

  const Outcome& o = *trace.outcome;
  const Round last = trace.rounds.back().round;
  const bool nodes_clean = all_false(nodes), edges_clean = all_false(edges);
  const bool window_quiet = h.stall_window > 0 && quiet >= h.stall_window;
  auto bad_outcome = [&](const std::string& why) { return fail(report, o.round, "outcome " + std::string(to_string(o.kind)) + ": " + why); };
  switch (o.kind) {
    case OutcomeKind::FullSuccess:
      if (o.round != last || !nodes_clean || !edges_clean) return bad_outcome("graph not clean");
      break;
    case OutcomeKind::NodeSuccess:
      if (o.round != last || !nodes_clean || edges_clean || !window_quiet) return bad_outcome("inconsistent");
      break;
    case OutcomeKind::Stall:
      if (o.round != last || nodes_clean || !window_quiet) return bad_outcome("inconsistent");
      break;
    case OutcomeKind::MonotonicityViolation:
      if (o.round != last || !saw_violation) return bad_outcome("no recontamination recorded");
      break;
    case OutcomeKind::ModelViolation:
      if (o.round != last + 1) return bad_outcome("round mismatch");
      break;
    case OutcomeKind::RoundLimit:
      if (o.round != last || last != h.max_rounds) return bad_outcome("round limit not reached");
      break;
  }
  return report;
}

}  // namespace decon
