#include "pnstruct/statespace.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#ifdef PNSTRUCT_HAVE_OPENMP
#include <omp.h>
#endif

namespace pnstruct {

namespace {

using Dense = std::vector<std::int32_t>;

struct DenseHash {
  std::size_t operator()(const Dense& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int32_t x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

Dense to_dense(const PetriNet& net, const Marking& m) {
  Dense v(net.place_count(), 0);
  for (const auto& [place, count] : m) {
    int p = net.place_index(place);
    if (p < 0)
      raise(ErrorCode::MarkingPlaceUnknown,
            "marking refers to unknown place '" + place + "'");
    v[p] = count;
  }
  return v;
}

Marking from_dense(const PetriNet& net, const Dense& v) {
  Marking m;
  for (std::size_t p = 0; p < v.size(); ++p)
    if (v[p] > 0) m[net.places()[p]] = v[p];
  return m;
}

bool dense_enabled(const PetriNet& net, const Dense& m, int t) {
  for (int p : net.pre_places(t))
    if (m[p] < 1) return false;
  return true;
}

Dense dense_fire(const PetriNet& net, const Dense& m, int t) {
  Dense next = m;
  for (int p : net.pre_places(t)) --next[p];
  for (int p : net.post_places(t)) ++next[p];
  return next;
}

/// true iff b >= a componentwise and b != a.
bool strictly_dominates(const Dense& b, const Dense& a) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] < a[i]) return false;
    if (b[i] > a[i]) strict = true;
  }
  return strict;
}

struct SearchState {
  std::vector<Dense> markings;
  std::unordered_map<Dense, std::uint32_t, DenseHash> index;
  std::vector<std::int32_t> parent;     // search-tree parent, -1 at the root
  std::vector<std::int32_t> parent_via; // transition fired from the parent
  std::vector<ReachabilityGraph::Edge> edges;
};

UnboundedWitness build_witness(const PetriNet& net, const SearchState& s,
                               std::uint32_t low, std::uint32_t high) {
  // Transitions along the search-tree path from the root down to `node`.
  auto path_to = [&](std::uint32_t node) {
    std::vector<std::string> seq;
    for (std::uint32_t v = node; s.parent[v] >= 0;
         v = static_cast<std::uint32_t>(s.parent[v]))
      seq.push_back(net.transitions()[s.parent_via[v]]);
    std::reverse(seq.begin(), seq.end());
    return seq;
  };
  UnboundedWitness w;
  w.prefix = path_to(low);
  w.m_low = from_dense(net, s.markings[low]);
  std::vector<std::string> full = path_to(high);
  w.pump.assign(full.begin() + static_cast<long>(w.prefix.size()), full.end());
  w.m_high = from_dense(net, s.markings[high]);
  return w;
}

ExplorationOutcome finish_complete(const PetriNet& net, SearchState&& s) {
  ExplorationOutcome out;
  out.verdict = ExploreVerdict::Complete;
  out.graph.initial = 0;
  out.graph.transition_labels = net.transitions();
  out.graph.nodes.reserve(s.markings.size());
  for (const auto& d : s.markings) out.graph.nodes.push_back(from_dense(net, d));
  out.graph.edges = std::move(s.edges);
  return out;
}

/// Registers the successor marking `succ` of node `src` via transition `t`.
/// Returns Unbounded or LimitExceeded when the search must stop, and has no
/// verdict otherwise.  Shared by the serial loop and the parallel merge so
/// that both produce byte-identical outcomes.
std::optional<ExplorationOutcome> admit_successor(
    const PetriNet& net, const ExplorationLimits& limits, SearchState& s,
    std::uint32_t src, int t, Dense&& succ) {
  auto [it, inserted] =
      s.index.try_emplace(std::move(succ),
                          static_cast<std::uint32_t>(s.markings.size()));
  std::uint32_t dst = it->second;
  if (inserted) {
    if (s.markings.size() >= limits.max_states) {
      ExplorationOutcome out;
      out.verdict = ExploreVerdict::LimitExceeded;
      return out;
    }
    s.markings.push_back(it->first);
    s.parent.push_back(static_cast<std::int32_t>(src));
    s.parent_via.push_back(t);
    for (std::int32_t anc = static_cast<std::int32_t>(src); anc >= 0;
         anc = s.parent[anc]) {
      if (strictly_dominates(s.markings[dst],
                             s.markings[static_cast<std::uint32_t>(anc)])) {
        ExplorationOutcome out;
        out.verdict = ExploreVerdict::Unbounded;
        out.witness =
            build_witness(net, s, static_cast<std::uint32_t>(anc), dst);
        return out;
      }
    }
  }
  if (s.edges.size() >= limits.max_edges) {
    ExplorationOutcome out;
    out.verdict = ExploreVerdict::LimitExceeded;
    return out;
  }
  s.edges.push_back({src, static_cast<std::uint32_t>(t), dst});
  return std::nullopt;
}

SearchState seed_search(const PetriNet& net, const Marking& m0) {
  SearchState s;
  Dense root = to_dense(net, m0);
  s.index.emplace(root, 0u);
  s.markings.push_back(std::move(root));
  s.parent.push_back(-1);
  s.parent_via.push_back(-1);
  return s;
}

}  // namespace

ExplorationOutcome explore_serial(const PetriNet& net, const Marking& m0,
                                  const ExplorationLimits& limits) {
  SearchState s = seed_search(net, m0);
  int nt = static_cast<int>(net.transition_count());
  for (std::uint32_t src = 0; src < s.markings.size(); ++src) {
    for (int t = 0; t < nt; ++t) {
      if (!dense_enabled(net, s.markings[src], t)) continue;
      auto stop =
          admit_successor(net, limits, s, src, t, dense_fire(net, s.markings[src], t));
      if (stop) return *std::move(stop);
    }
  }
  return finish_complete(net, std::move(s));
}

#ifdef PNSTRUCT_HAVE_OPENMP

ExplorationOutcome explore(const PetriNet& net, const Marking& m0,
                           const ExplorationLimits& limits) {
  SearchState s = seed_search(net, m0);
  int nt = static_cast<int>(net.transition_count());

  // Breadth levels coincide with index ranges: every node discovered while
  // merging level k belongs to level k+1, so the frontier is a contiguous
  // slice of the marking array.
  std::uint32_t level_begin = 0;
  while (level_begin < s.markings.size()) {
    std::uint32_t level_end = static_cast<std::uint32_t>(s.markings.size());
    std::vector<std::vector<std::pair<int, Dense>>> expanded(level_end -
                                                             level_begin);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t off = 0;
         off < static_cast<std::int64_t>(level_end - level_begin); ++off) {
      std::uint32_t src = level_begin + static_cast<std::uint32_t>(off);
      auto& local = expanded[off];
      for (int t = 0; t < nt; ++t)
        if (dense_enabled(net, s.markings[src], t))
          local.emplace_back(t, dense_fire(net, s.markings[src], t));
    }
    // The merge runs single-threaded in (source, transition) order, which
    // is exactly the order the serial search admits successors in.
    for (std::uint32_t src = level_begin; src < level_end; ++src) {
      for (auto& [t, succ] : expanded[src - level_begin]) {
        auto stop = admit_successor(net, limits, s, src, t, std::move(succ));
        if (stop) return *std::move(stop);
      }
    }
    level_begin = level_end;
  }
  return finish_complete(net, std::move(s));
}

#else

ExplorationOutcome explore(const PetriNet& net, const Marking& m0,
                           const ExplorationLimits& limits) {
  return explore_serial(net, m0, limits);
}

#endif

int ReachabilityGraph::find_node(const Marking& m) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == m) return static_cast<int>(i);
  return -1;
}

SccPartition strongly_connected_components(const ReachabilityGraph& g) {
  std::size_t n = g.nodes.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& e : g.edges) adj[e.src].push_back(e.dst);

  // Tarjan, iterative to keep large graphs off the call stack.
  SccPartition out;
  out.component.assign(n, -1);
  std::vector<std::int32_t> low(n, -1), num(n, -1);
  std::vector<std::uint32_t> stack;
  std::vector<char> on_stack(n, 0);
  std::int32_t counter = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t next_child;
  };
  std::vector<Frame> frames;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (num[start] >= 0) continue;
    frames.push_back({start, 0});
    num[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next_child < adj[f.v].size()) {
        std::uint32_t w = adj[f.v][f.next_child++];
        if (num[w] < 0) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        if (low[f.v] == num[f.v]) {
          int id = static_cast<int>(out.members.size());
          out.members.emplace_back();
          std::uint32_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            out.component[w] = id;
            out.members.back().push_back(w);
          } while (w != f.v);
          std::sort(out.members.back().begin(), out.members.back().end());
        }
        std::uint32_t v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }

  out.bottom.assign(out.members.size(), 1);
  for (const auto& e : g.edges)
    if (out.component[e.src] != out.component[e.dst])
      out.bottom[out.component[e.src]] = 0;
  return out;
}

std::set<Marking> home_markings(const ReachabilityGraph& g) {
  SccPartition sccs = strongly_connected_components(g);
  int the_bottom = -1;
  for (std::size_t id = 0; id < sccs.members.size(); ++id) {
    if (!sccs.bottom[id]) continue;
    if (the_bottom >= 0) return {};  // two escape-proof regions, no home
    the_bottom = static_cast<int>(id);
  }
  std::set<Marking> out;
  for (std::uint32_t v : sccs.members[the_bottom]) out.insert(g.nodes[v]);
  return out;
}

namespace {

ExplorationOutcome explore_or_raise(const PetriNet& net, const Marking& m0,
                                    const ExplorationLimits& limits) {
  ExplorationOutcome outcome = explore(net, m0, limits);
  if (outcome.verdict == ExploreVerdict::Unbounded)
    raise(ErrorCode::UnboundedNet,
          "net is unbounded from " + to_bracket(m0) + "; pump " +
              to_bracket(outcome.witness->m_low) + " => " +
              to_bracket(outcome.witness->m_high));
  if (outcome.verdict == ExploreVerdict::LimitExceeded)
    raise(ErrorCode::LimitExceeded, "state-space limits exceeded");
  return outcome;
}

}  // namespace

std::set<Marking> home_markings(const PetriNet& net, const Marking& m0,
                                const ExplorationLimits& limits) {
  return home_markings(explore_or_raise(net, m0, limits).graph);
}

LivenessResult is_live(const ReachabilityGraph& g) {
  SccPartition sccs = strongly_connected_components(g);
  std::vector<std::set<std::uint32_t>> labels(sccs.members.size());
  for (const auto& e : g.edges)
    labels[sccs.component[e.src]].insert(e.transition);

  for (std::size_t id = 0; id < sccs.members.size(); ++id) {
    if (!sccs.bottom[id]) continue;
    if (labels[id].size() == g.transition_labels.size()) continue;
    // Some transition never fires inside this escape-proof region.  The
    // smallest member marking and the smallest missing transition make the
    // witness reproducible.
    std::uint32_t missing = 0;
    while (labels[id].count(missing)) ++missing;
    const Marking* m = &g.nodes[sccs.members[id][0]];
    for (std::uint32_t v : sccs.members[id])
      if (g.nodes[v] < *m) m = &g.nodes[v];
    LivenessResult r;
    r.live = false;
    r.witness = {*m, g.transition_labels[missing]};
    return r;
  }
  LivenessResult r;
  r.live = true;
  return r;
}

LivenessResult is_live(const PetriNet& net, const Marking& m0,
                       const ExplorationLimits& limits) {
  return is_live(explore_or_raise(net, m0, limits).graph);
}

BoundednessResult boundedness(const PetriNet& net, const Marking& m0,
                              const ExplorationLimits& limits) {
  ExplorationOutcome outcome = explore(net, m0, limits);
  if (outcome.verdict == ExploreVerdict::LimitExceeded)
    raise(ErrorCode::LimitExceeded, "state-space limits exceeded");
  BoundednessResult r;
  if (outcome.verdict == ExploreVerdict::Unbounded) {
    r.bounded = false;
    r.witness = std::move(outcome.witness);
    return r;
  }
  r.bounded = true;
  for (const auto& m : outcome.graph.nodes)
    for (const auto& [place, count] : m) {
      auto [it, fresh] = r.per_place_max.try_emplace(place, count);
      if (!fresh) it->second = std::max(it->second, count);
      r.bound = std::max(r.bound, count);
    }
  return r;
}

std::optional<std::vector<std::string>> find_constrained_sequence(
    const ReachabilityGraph& g, const Marking& m_from, const Marking& m_to,
    const std::set<std::string>& allowed) {
  int from = g.find_node(m_from);
  if (from < 0)
    raise(ErrorCode::UnknownMarking,
          to_bracket(m_from) + " is not a reachable marking");
  int to = g.find_node(m_to);
  if (to < 0)
    raise(ErrorCode::UnknownMarking,
          to_bracket(m_to) + " is not a reachable marking");

  std::vector<char> allowed_t(g.transition_labels.size(), 0);
  for (std::size_t t = 0; t < g.transition_labels.size(); ++t)
    if (allowed.count(g.transition_labels[t])) allowed_t[t] = 1;

  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(
      g.nodes.size());  // dst, transition
  for (const auto& e : g.edges)
    if (allowed_t[e.transition]) adj[e.src].emplace_back(e.dst, e.transition);

  std::vector<std::int32_t> prev_node(g.nodes.size(), -1);
  std::vector<std::int32_t> prev_via(g.nodes.size(), -1);
  std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(from)};
  prev_node[from] = from;  // marks visited; the root loops onto itself
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    if (v == static_cast<std::uint32_t>(to)) break;
    for (auto [w, t] : adj[v]) {
      if (prev_node[w] >= 0) continue;
      prev_node[w] = static_cast<std::int32_t>(v);
      prev_via[w] = static_cast<std::int32_t>(t);
      queue.push_back(w);
    }
  }
  if (prev_node[to] < 0) return std::nullopt;
  std::vector<std::string> seq;
  for (std::uint32_t v = static_cast<std::uint32_t>(to);
       v != static_cast<std::uint32_t>(from);
       v = static_cast<std::uint32_t>(prev_node[v]))
    seq.push_back(g.transition_labels[prev_via[v]]);
  std::reverse(seq.begin(), seq.end());
  return seq;
}

std::optional<std::vector<std::string>> find_constrained_sequence(
    const PetriNet& net, const Marking& m_from, const Marking& m_to,
    const std::set<std::string>& allowed, const ExplorationLimits& limits) {
  return find_constrained_sequence(explore_or_raise(net, m_from, limits).graph,
                                   m_from, m_to, allowed);
}

}  // namespace pnstruct
