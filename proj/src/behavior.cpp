#include "pnstruct/behavior.hpp"

#include <algorithm>
#include <deque>

namespace pnstruct {

namespace {

ExplorationOutcome explore_or_raise(const PetriNet& net, const Marking& m0,
                                    const ExplorationLimits& limits) {
  ExplorationOutcome outcome = explore(net, m0, limits);
  if (outcome.verdict == ExploreVerdict::Unbounded)
    raise(ErrorCode::UnboundedNet, "net is unbounded from " + to_bracket(m0));
  if (outcome.verdict == ExploreVerdict::LimitExceeded)
    raise(ErrorCode::LimitExceeded, "state-space limits exceeded");
  return outcome;
}

/// Per-node enabled sets as sorted transition-index vectors.  Edges are
/// grouped by source, so one sweep suffices.
std::vector<std::vector<std::uint32_t>> enabled_sets(
    const ReachabilityGraph& g) {
  std::vector<std::vector<std::uint32_t>> en(g.nodes.size());
  for (const auto& e : g.edges) en[e.src].push_back(e.transition);
  return en;
}

}  // namespace

BlockingReport blocking_markings(const PetriNet& net, const Marking& m0,
                                 const Cluster& c,
                                 const ExplorationLimits& limits) {
  return blocking_markings(net, explore_or_raise(net, m0, limits).graph, m0, c);
}

BlockingReport blocking_markings(const PetriNet& net,
                                 const ReachabilityGraph& g, const Marking& m0,
                                 const Cluster& c) {
  bool known = false;
  for (const auto& cl : clusters(net))
    if (cl == c) {
      known = true;
      break;
    }
  if (!known) {
    std::string names;
    for (const auto& p : c.places) names += (names.empty() ? "" : ",") + p;
    for (const auto& t : c.transitions) names += (names.empty() ? "" : ",") + t;
    raise(ErrorCode::UnknownCluster,
          "{" + names + "} is not a cluster of '" + net.name() + "'");
  }

  std::vector<std::uint32_t> target;
  for (const auto& t : c.transitions)
    target.push_back(
        static_cast<std::uint32_t>(net.transition_index(t)));
  std::sort(target.begin(), target.end());

  BlockingReport report;
  report.cluster = c;
  auto en = enabled_sets(g);
  for (std::uint32_t v = 0; v < g.nodes.size(); ++v)
    if (en[v] == target) report.blocking_markings.push_back(g.nodes[v]);
  std::sort(report.blocking_markings.begin(), report.blocking_markings.end());

  std::set<std::string> outside;
  for (const auto& t : net.transitions())
    if (!c.transitions.count(t)) outside.insert(t);
  for (const auto& mb : report.blocking_markings)
    report.avoidance_sequences.push_back(
        find_constrained_sequence(g, m0, mb, outside));
  return report;
}

LocalSafetyResult is_locally_safe(const PetriNet& net, const Marking& m0,
                                  const ExplorationLimits& limits) {
  return is_locally_safe(p_components(net),
                         explore_or_raise(net, m0, limits).graph);
}

LocalSafetyResult is_locally_safe(const std::vector<ComponentSet>& comps,
                                  const ReachabilityGraph& g) {
  LocalSafetyResult r;
  if (comps.empty()) {
    r.locally_safe = true;
    r.vacuous = true;
    return r;
  }
  for (const auto& comp : comps) {
    for (const auto& m : g.nodes) {
      int sum = 0;
      for (const auto& [place, count] : m)
        if (comp.places.count(place)) sum += count;
      if (sum > 1) {
        r.locally_safe = false;
        r.witness = {comp, m, sum};
        return r;
      }
    }
  }
  r.locally_safe = true;
  return r;
}

std::vector<Cluster> home_clusters(const PetriNet& net, const Marking& m0,
                                   const ExplorationLimits& limits) {
  std::set<Marking> home = home_markings(explore_or_raise(net, m0, limits).graph);
  std::vector<Cluster> out;
  for (const auto& c : clusters(net))
    if (home.count(cluster_marking(c))) out.push_back(c);
  return out;
}

PerpetualityReport is_perpetual(const PetriNet& net, const Marking& m0,
                                const ExplorationLimits& limits) {
  ExplorationOutcome outcome = explore(net, m0, limits);
  if (outcome.verdict == ExploreVerdict::LimitExceeded)
    raise(ErrorCode::LimitExceeded, "state-space limits exceeded");

  PerpetualityReport r;
  if (outcome.verdict == ExploreVerdict::Unbounded) {
    r.bounded = false;
    r.perpetual = false;
    return r;
  }
  r.bounded = true;
  LivenessResult lv = is_live(outcome.graph);
  r.live = lv.live;
  std::set<Marking> home = home_markings(outcome.graph);
  for (const auto& c : clusters(net))
    if (home.count(cluster_marking(c))) r.home_clusters.push_back(c);
  r.locally_safe = is_locally_safe(p_components(net), outcome.graph);
  r.perpetual = lv.live && !r.home_clusters.empty();
  return r;
}

LucencyVerdict check_lucency(const PetriNet& net, const Marking& m0,
                             const ExplorationLimits& limits) {
  ExplorationOutcome outcome = explore(net, m0, limits);
  LucencyVerdict v;
  if (outcome.verdict == ExploreVerdict::LimitExceeded) {
    v.status = LucencyStatus::Inconclusive;
    return v;
  }
  if (outcome.verdict == ExploreVerdict::Unbounded) {
    v.status = LucencyStatus::NotLucentUnbounded;
    v.pump = outcome.witness;
    // Each pump pass only adds tokens, so the support can grow at most
    // once per place; once it repeats, the enabled set is frozen while the
    // marking keeps growing.
    Marking cur = outcome.witness->m_low;
    for (std::size_t i = 0; i <= net.place_count(); ++i) {
      Marking next = fire_sequence(net, cur, outcome.witness->pump);
      bool same_support = next.size() == cur.size() &&
                          std::equal(next.begin(), next.end(), cur.begin(),
                                     [](const auto& a, const auto& b) {
                                       return a.first == b.first;
                                     });
      if (same_support) {
        v.m1 = cur;
        v.m2 = next;
        v.shared_enabled = enabled_transitions(net, cur);
        break;
      }
      cur = std::move(next);
    }
    return v;
  }
  return check_lucency(outcome.graph);
}

LucencyVerdict check_lucency(const ReachabilityGraph& g) {
  LucencyVerdict v;
  auto en = enabled_sets(g);
  std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> groups;
  for (std::uint32_t node = 0; node < g.nodes.size(); ++node)
    groups[en[node]].push_back(node);

  // The offending pair reported is the lexicographically smallest, by
  // marking order, over all groups that collide.
  const Marking* best1 = nullptr;
  const Marking* best2 = nullptr;
  const std::vector<std::uint32_t>* best_en = nullptr;
  for (const auto& [shared, members] : groups) {
    if (members.size() < 2) continue;
    std::vector<const Marking*> sorted;
    for (std::uint32_t node : members) sorted.push_back(&g.nodes[node]);
    std::sort(sorted.begin(), sorted.end(),
              [](const Marking* a, const Marking* b) { return *a < *b; });
    if (!best1 || std::tie(*sorted[0], *sorted[1]) < std::tie(*best1, *best2)) {
      best1 = sorted[0];
      best2 = sorted[1];
      best_en = &shared;
    }
  }
  if (!best1) {
    v.status = LucencyStatus::Lucent;
    return v;
  }
  v.status = LucencyStatus::NotLucent;
  v.m1 = *best1;
  v.m2 = *best2;
  for (std::uint32_t t : *best_en)
    v.shared_enabled.insert(g.transition_labels[t]);
  return v;
}

std::optional<std::vector<std::string>> realize_path(
    const PetriNet& net, const Marking& m0, const Marking& mStart,
    const ComponentSet& X, const std::vector<std::string>& path,
    const Cluster& C, bool intermediate_avoid_home_place,
    const ExplorationLimits& limits) {
  if (!is_p_component(net, X))
    raise(ErrorCode::NotAComponent, "X is not a P-component of the net");
  if (path.empty() || path.size() % 2 == 0)
    raise(ErrorCode::ValidationError,
          "path must alternate place, transition, ... , place");

  // Structural path checks: alternation, arcs between neighbours, no
  // repeated node, confinement to X.
  std::set<std::string> seen_nodes;
  for (std::size_t i = 0; i < path.size(); ++i) {
    bool place_slot = i % 2 == 0;
    const std::string& id = path[i];
    if (place_slot ? !net.has_place(id) : !net.has_transition(id))
      raise(ErrorCode::ValidationError,
            "'" + id + "' is not a " + (place_slot ? "place" : "transition"));
    if (!(place_slot ? X.places.count(id) : X.transitions.count(id)))
      raise(ErrorCode::PathLeavesComponent,
            "'" + id + "' lies outside the component");
    if (!seen_nodes.insert(id).second)
      raise(ErrorCode::PathNotElementary, "'" + id + "' repeats on the path");
    if (i > 0) {
      const std::string& prev = path[i - 1];
      std::set<std::string> succ = adjacency(net, prev, Direction::post);
      if (!succ.count(id))
        raise(ErrorCode::ValidationError,
              "no arc from '" + prev + "' to '" + id + "'");
    }
  }
  auto it_start = mStart.find(path.front());
  if (it_start == mStart.end() || it_start->second < 1)
    raise(ErrorCode::StartUnmarked,
          "'" + path.front() + "' is unmarked in " + to_bracket(mStart));
  {
    std::vector<std::string> shared;
    std::set_intersection(C.places.begin(), C.places.end(), X.places.begin(),
                          X.places.end(), std::back_inserter(shared));
    if (shared.size() != 1 || shared[0] != path.back())
      raise(ErrorCode::ValidationError,
            "path must end at the cluster place inside the component");
  }

  ExplorationOutcome outcome = explore_or_raise(net, m0, limits);
  const ReachabilityGraph& g = outcome.graph;
  int start = g.find_node(mStart);
  if (start < 0)
    raise(ErrorCode::UnknownMarking,
          to_bracket(mStart) + " is not a reachable marking");
  int goal = g.find_node(cluster_marking(C));
  if (goal < 0)
    raise(ErrorCode::UnknownMarking,
          to_bracket(cluster_marking(C)) + " is not a reachable marking");

  std::vector<std::uint32_t> wanted;  // path transitions, in order
  for (std::size_t i = 1; i < path.size(); i += 2)
    wanted.push_back(static_cast<std::uint32_t>(net.transition_index(path[i])));
  std::vector<char> in_X(g.transition_labels.size(), 0);
  for (const auto& t : X.transitions)
    in_X[net.transition_index(t)] = 1;

  int home_place = -1;
  if (intermediate_avoid_home_place && C.places.size() == 1)
    home_place = net.place_index(*C.places.begin());

  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(
      g.nodes.size());
  for (const auto& e : g.edges) adj[e.src].emplace_back(e.dst, e.transition);

  // One search state per (graph node, transitions of the path already
  // consumed); X-transitions advance the index or are forbidden, the rest
  // move freely.
  std::size_t width = wanted.size() + 1;
  std::vector<std::int64_t> prev_state(g.nodes.size() * width, -1);
  std::vector<std::int32_t> prev_via(g.nodes.size() * width, -1);
  auto encode = [&](std::uint32_t node, std::size_t k) {
    return static_cast<std::size_t>(node) * width + k;
  };
  std::size_t start_state = encode(static_cast<std::uint32_t>(start), 0);
  std::size_t goal_state =
      encode(static_cast<std::uint32_t>(goal), wanted.size());
  prev_state[start_state] = static_cast<std::int64_t>(start_state);
  std::deque<std::size_t> queue{start_state};
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    if (s == goal_state) break;
    std::uint32_t node = static_cast<std::uint32_t>(s / width);
    std::size_t k = s % width;
    for (auto [dst, t] : adj[node]) {
      std::size_t k2 = k;
      if (in_X[t]) {
        if (k >= wanted.size() || wanted[k] != t) continue;
        k2 = k + 1;
      }
      std::size_t s2 = encode(dst, k2);
      if (prev_state[s2] >= 0) continue;
      if (home_place >= 0 && s2 != goal_state) {
        auto found = g.nodes[dst].find(net.places()[home_place]);
        if (found != g.nodes[dst].end() && found->second > 0) continue;
      }
      prev_state[s2] = static_cast<std::int64_t>(s);
      prev_via[s2] = static_cast<std::int32_t>(t);
      queue.push_back(s2);
    }
  }
  if (prev_state[goal_state] < 0) return std::nullopt;
  std::vector<std::string> seq;
  for (std::size_t s = goal_state; s != start_state;
       s = static_cast<std::size_t>(prev_state[s]))
    seq.push_back(g.transition_labels[prev_via[s]]);
  std::reverse(seq.begin(), seq.end());
  return seq;
}

}  // namespace pnstruct
