#include "pnstruct/structure.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace pnstruct {

namespace {

bool sets_equal_or_disjoint(const std::vector<int>& a,
                            const std::vector<int>& b) {
  if (a == b) return true;
  // Both sorted, so a linear sweep decides disjointness.
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    (a[i] < b[j] ? i : j)++;
  }
  return true;
}

/// Every node reachable from `from` following arcs forward (or backward).
std::vector<char> directed_reach(const PetriNet& net, std::size_t from,
                                 bool forward) {
  std::size_t np = net.place_count();
  std::vector<char> seen(np + net.transition_count(), 0);
  std::deque<std::size_t> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    auto visit = [&](std::size_t w) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    };
    if (v < np) {
      for (int t : forward ? net.post_transitions(v) : net.pre_transitions(v))
        visit(np + t);
    } else {
      std::size_t t = v - np;
      for (int p : forward ? net.post_places(t) : net.pre_places(t)) visit(p);
    }
  }
  return seen;
}

}  // namespace

NetClassification classify(const PetriNet& net) {
  NetClassification c;

  c.is_p_net = true;
  for (std::size_t t = 0; t < net.transition_count(); ++t)
    if (net.pre_places(t).size() != 1 || net.post_places(t).size() != 1) {
      c.is_p_net = false;
      break;
    }

  c.is_t_net = true;
  for (std::size_t p = 0; p < net.place_count(); ++p)
    if (net.pre_transitions(p).size() != 1 ||
        net.post_transitions(p).size() != 1) {
      c.is_t_net = false;
      break;
    }

  c.is_free_choice = true;
  for (std::size_t t1 = 0; t1 < net.transition_count() && c.is_free_choice;
       ++t1)
    for (std::size_t t2 = t1 + 1; t2 < net.transition_count(); ++t2)
      if (!sets_equal_or_disjoint(net.pre_places(t1), net.pre_places(t2))) {
        c.is_free_choice = false;
        break;
      }

  {
    std::set<std::string> all;
    for (const auto& p : net.places()) all.insert(p);
    for (const auto& t : net.transitions()) all.insert(t);
    c.is_strongly_connected = fragment_strongly_connected(subnet(net, all));
  }

  // Workflow shape: a unique place nothing produces into, a unique place
  // nothing consumes from, no transition with a missing side, and every
  // node lying on a directed path between the two.
  std::vector<int> sources, sinks;
  for (std::size_t p = 0; p < net.place_count(); ++p) {
    if (net.pre_transitions(p).empty()) sources.push_back(static_cast<int>(p));
    if (net.post_transitions(p).empty()) sinks.push_back(static_cast<int>(p));
  }
  bool transitions_two_sided = true;
  for (std::size_t t = 0; t < net.transition_count(); ++t)
    if (net.pre_places(t).empty() || net.post_places(t).empty()) {
      transitions_two_sided = false;
      break;
    }
  if (sources.size() == 1 && sinks.size() == 1 && transitions_two_sided) {
    std::size_t np = net.place_count();
    std::vector<char> fwd = directed_reach(net, sources[0], true);
    std::vector<char> bwd = directed_reach(net, sinks[0], false);
    bool all_on_path = true;
    for (std::size_t v = 0; v < np + net.transition_count(); ++v)
      if (!fwd[v] || !bwd[v]) {
        all_on_path = false;
        break;
      }
    if (all_on_path)
      c.workflow = {net.places()[sources[0]], net.places()[sinks[0]]};
  }
  return c;
}

SiphonTrapVerdict siphon_trap_predicate(const PetriNet& net,
                                        const std::set<std::string>& R,
                                        SetKind kind) {
  std::set<int> producers, consumers;
  for (const auto& id : R) {
    int p = net.place_index(id);
    if (p < 0) raise(ErrorCode::UnknownPlace, "no place named '" + id + "'");
    producers.insert(net.pre_transitions(p).begin(),
                     net.pre_transitions(p).end());
    consumers.insert(net.post_transitions(p).begin(),
                     net.post_transitions(p).end());
  }
  SiphonTrapVerdict v;
  v.proper = !R.empty();
  v.holds = kind == SetKind::siphon
                ? std::includes(consumers.begin(), consumers.end(),
                                producers.begin(), producers.end())
                : std::includes(producers.begin(), producers.end(),
                                consumers.begin(), consumers.end());
  return v;
}

CommonerResult commoner_check(const PetriNet& net, const Marking& m0,
                              int size_cap) {
  int np = static_cast<int>(net.place_count());
  if (np > size_cap || np > 31)
    raise(ErrorCode::CapExceeded,
          "siphon enumeration over " + std::to_string(np) + " places refused");

  int nt = static_cast<int>(net.transition_count());
  std::vector<std::uint32_t> pre_mask(nt, 0), post_mask(nt, 0);
  for (int t = 0; t < nt; ++t) {
    for (int p : net.pre_places(t)) pre_mask[t] |= 1u << p;
    for (int p : net.post_places(t)) post_mask[t] |= 1u << p;
  }
  std::uint32_t marked = 0;
  for (const auto& [place, count] : m0)
    if (count > 0) {
      int p = net.place_index(place);
      if (p < 0)
        raise(ErrorCode::MarkingPlaceUnknown,
              "marking refers to unknown place '" + place + "'");
      marked |= 1u << p;
    }

  // Greatest trap inside a place set: drop every place some transition can
  // drain without refilling the set, until stable.
  auto greatest_trap = [&](std::uint32_t q) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int t = 0; t < nt; ++t)
        if ((pre_mask[t] & q) && !(post_mask[t] & q)) {
          q &= ~pre_mask[t];
          changed = true;
        }
    }
    return q;
  };

  for (std::uint32_t r = 1; r < (1u << np); ++r) {
    bool siphon = true;
    for (int t = 0; t < nt; ++t)
      if ((post_mask[t] & r) && !(pre_mask[t] & r)) {
        siphon = false;
        break;
      }
    if (!siphon) continue;
    if ((greatest_trap(r) & marked) == 0) {
      CommonerResult res;
      res.holds = false;
      res.bad_siphon.emplace();
      for (int p = 0; p < np; ++p)
        if (r & (1u << p)) res.bad_siphon->insert(net.places()[p]);
      return res;
    }
  }
  CommonerResult res;
  res.holds = true;
  return res;
}

std::set<std::string> ComponentSet::nodes() const {
  std::set<std::string> out = places;
  out.insert(transitions.begin(), transitions.end());
  return out;
}

namespace {

/// Shared enumeration core, backtracking over primary nodes (places for
/// P-components, transitions for T-components) under the exactly-one-input,
/// exactly-one-output constraint on adjacent secondary nodes.
///
/// The constraint is propagated eagerly: committing a primary to the set
/// excludes every competitor that would give some adjacent secondary a
/// second inside-input or inside-output, and the only branching happens on
/// obligations, i.e. adjacent secondaries still missing their inside-input
/// or inside-output, one candidate at a time.  Every candidate set grown
/// this way is connected, so each component is discovered exactly once,
/// from its smallest member (smaller primaries are barred from the set up
/// front).  Leaves already satisfy the counting condition and only the
/// strong-connectivity check remains.
std::vector<ComponentSet> enumerate_components(
    const PetriNet& net, ComponentSet::Kind kind, std::size_t limit) {
  bool p_kind = kind == ComponentSet::Kind::P;
  const auto& primary = p_kind ? net.places() : net.transitions();
  const auto& secondary = p_kind ? net.transitions() : net.places();
  const std::size_t n_primary = primary.size();
  const std::size_t n_secondary = secondary.size();

  // inc_in[i]: secondaries gaining an inside-input when primary i joins;
  // inc_out[i] likewise for outputs.  cand_in[s] / cand_out[s] invert the
  // maps: the primaries able to serve as secondary s's input or output.
  std::vector<std::vector<int>> inc_in(n_primary), inc_out(n_primary);
  std::vector<std::vector<int>> cand_in(n_secondary), cand_out(n_secondary);
  for (std::size_t i = 0; i < n_primary; ++i) {
    if (p_kind) {
      inc_in[i].assign(net.post_transitions(i).begin(),
                       net.post_transitions(i).end());
      inc_out[i].assign(net.pre_transitions(i).begin(),
                        net.pre_transitions(i).end());
    } else {
      inc_in[i].assign(net.post_places(i).begin(), net.post_places(i).end());
      inc_out[i].assign(net.pre_places(i).begin(), net.pre_places(i).end());
    }
    for (int s : inc_in[i]) cand_in[s].push_back(static_cast<int>(i));
    for (int s : inc_out[i]) cand_out[s].push_back(static_cast<int>(i));
  }

  enum : char { kUndecided = 0, kIn = 1, kOut = 2 };
  std::vector<char> state(n_primary, kUndecided);
  std::vector<int> count_in(n_secondary, 0), count_out(n_secondary, 0);
  std::vector<std::pair<int, char>> state_trail;  // (primary, previous state)
  std::vector<std::pair<int, char>> count_trail;  // (secondary, side 0=in 1=out)
  std::vector<ComponentSet> out;
  std::size_t steps = 0;

  auto set_state = [&](int i, char value) {
    state_trail.emplace_back(i, state[i]);
    state[i] = value;
  };

  // Commits primary i, bumping counters and excluding every alternative
  // provider of the now-served slots.  False on contradiction; the caller
  // rolls back through the trail marks either way.
  auto include = [&](int i) {
    set_state(i, kIn);
    for (int side = 0; side < 2; ++side) {
      const auto& raised = side == 0 ? inc_in[i] : inc_out[i];
      auto& count = side == 0 ? count_in : count_out;
      const auto& cand = side == 0 ? cand_in : cand_out;
      for (int s : raised) {
        count_trail.emplace_back(s, static_cast<char>(side));
        if (++count[s] > 1) return false;
        for (int j : cand[s]) {
          if (j == i) continue;
          if (state[j] == kIn) return false;
          if (state[j] == kUndecided) set_state(j, kOut);
        }
      }
    }
    return true;
  };

  auto rollback = [&](std::size_t state_mark, std::size_t count_mark) {
    while (state_trail.size() > state_mark) {
      auto [i, prev] = state_trail.back();
      state_trail.pop_back();
      state[i] = prev;
    }
    while (count_trail.size() > count_mark) {
      auto [s, side] = count_trail.back();
      count_trail.pop_back();
      --(side == 0 ? count_in : count_out)[s];
    }
  };

  std::function<void()> search = [&]() {
    if (++steps > limit)
      raise(ErrorCode::ComponentLimitExceeded,
            "component search exceeded " + std::to_string(limit) + " steps");

    for (std::size_t s = 0; s < n_secondary; ++s) {
      if (count_in[s] == 0 && count_out[s] == 0) continue;  // not adjacent
      for (int side = 0; side < 2; ++side) {
        if ((side == 0 ? count_in : count_out)[s] > 0) continue;
        const auto& candidates = (side == 0 ? cand_in : cand_out)[s];
        for (int q : candidates) {
          if (state[q] != kUndecided) continue;
          const std::size_t sm = state_trail.size(), cm = count_trail.size();
          if (include(q)) search();
          rollback(sm, cm);
        }
        return;  // the obligation admits only these alternatives
      }
    }

    // No obligation left: every adjacent secondary sits at exactly one
    // inside-input and one inside-output.
    std::set<std::string> members, adjacent;
    for (std::size_t i = 0; i < n_primary; ++i)
      if (state[i] == kIn) members.insert(primary[i]);
    for (std::size_t s = 0; s < n_secondary; ++s)
      if (count_in[s] + count_out[s] > 0) adjacent.insert(secondary[s]);
    std::set<std::string> all = members;
    all.insert(adjacent.begin(), adjacent.end());
    if (!fragment_strongly_connected(subnet(net, all))) return;
    ComponentSet c;
    c.kind = kind;
    c.places = p_kind ? members : adjacent;
    c.transitions = p_kind ? adjacent : members;
    out.push_back(std::move(c));
  };

  for (std::size_t seed = 0; seed < n_primary; ++seed) {
    std::fill(state.begin(), state.begin() + static_cast<long>(seed), kOut);
    std::fill(state.begin() + static_cast<long>(seed), state.end(), kUndecided);
    std::fill(count_in.begin(), count_in.end(), 0);
    std::fill(count_out.begin(), count_out.end(), 0);
    state_trail.clear();
    count_trail.clear();
    if (include(static_cast<int>(seed))) search();
  }

  std::sort(out.begin(), out.end(), [](const ComponentSet& a,
                                       const ComponentSet& b) {
    return std::tie(a.places, a.transitions) < std::tie(b.places, b.transitions);
  });
  return out;
}

}  // namespace

std::vector<ComponentSet> p_components(const PetriNet& net,
                                       std::size_t limit) {
  return enumerate_components(net, ComponentSet::Kind::P, limit);
}

std::vector<ComponentSet> t_components(const PetriNet& net,
                                       std::size_t limit) {
  return enumerate_components(net, ComponentSet::Kind::T, limit);
}

bool covers_net(const PetriNet& net, const std::vector<ComponentSet>& comps) {
  std::set<std::string> covered;
  for (const auto& c : comps) {
    covered.insert(c.places.begin(), c.places.end());
    covered.insert(c.transitions.begin(), c.transitions.end());
  }
  return covered.size() == net.place_count() + net.transition_count();
}

bool is_p_component(const PetriNet& net, const ComponentSet& c) {
  if (c.kind != ComponentSet::Kind::P || c.places.empty()) return false;
  std::set<std::string> adjacent;
  for (const auto& id : c.places) {
    int p = net.place_index(id);
    if (p < 0) return false;
    for (int t : net.pre_transitions(p))
      adjacent.insert(net.transitions()[t]);
    for (int t : net.post_transitions(p))
      adjacent.insert(net.transitions()[t]);
  }
  if (adjacent != c.transitions) return false;
  for (const auto& id : adjacent) {
    int t = net.transition_index(id);
    int in = 0, out = 0;
    for (int p : net.pre_places(t)) in += c.places.count(net.places()[p]);
    for (int p : net.post_places(t)) out += c.places.count(net.places()[p]);
    if (in != 1 || out != 1) return false;
  }
  return fragment_strongly_connected(subnet(net, c.nodes()));
}

QProjection q_projection(const PetriNet& net, const Marking& m,
                         const std::vector<ComponentSet>& Q) {
  if (Q.empty()) raise(ErrorCode::EmptyCover, "no components chosen");
  std::set<std::string> all;
  for (const auto& c : Q) {
    if (!is_p_component(net, c)) {
      std::string names;
      for (const auto& p : c.places) names += (names.empty() ? "" : ",") + p;
      raise(ErrorCode::NotAComponent,
            "{" + names + "} does not induce a P-component");
    }
    auto nodes = c.nodes();
    all.insert(nodes.begin(), nodes.end());
  }
  SubnetFragment frag = subnet(net, all);
  RawNet raw;
  raw.name = net.name();
  raw.places = frag.places;
  raw.transitions = frag.transitions;
  raw.arcs = frag.arcs;

  QProjection out;
  out.source = net;
  out.chosen = Q;
  out.projected_net = validate_net(raw);
  out.projected_marking =
      project_marking(m, {frag.places.begin(), frag.places.end()});
  return out;
}

PetriNet short_circuit(const PetriNet& net) {
  NetClassification c = classify(net);
  if (!c.workflow)
    raise(ErrorCode::NotAWorkflowNet,
          "'" + net.name() + "' has no source/sink workflow shape");
  if (net.has_node("t_star"))
    raise(ErrorCode::IdCollisionOnTStar,
          "the id t_star is already taken in '" + net.name() + "'");
  RawNet raw;
  raw.name = net.name();
  raw.places = net.places();
  raw.transitions = net.transitions();
  raw.transitions.push_back("t_star");
  raw.arcs = net.arcs();
  raw.arcs.emplace_back(c.workflow->second, "t_star");
  raw.arcs.emplace_back("t_star", c.workflow->first);
  return validate_net(raw);
}

SoundnessResult check_soundness(const PetriNet& net,
                                const ExplorationLimits& limits) {
  NetClassification c = classify(net);
  if (!c.workflow)
    raise(ErrorCode::NotAWorkflowNet,
          "'" + net.name() + "' has no source/sink workflow shape");
  PetriNet closed = short_circuit(net);
  Marking m0{{c.workflow->first, 1}};

  ExplorationOutcome outcome = explore(closed, m0, limits);
  if (outcome.verdict == ExploreVerdict::LimitExceeded)
    raise(ErrorCode::LimitExceeded, "state-space limits exceeded");

  SoundnessResult r;
  if (outcome.verdict == ExploreVerdict::Unbounded) {
    r.bounded = false;
    r.sound = false;
    r.boundedness_witness = std::move(outcome.witness);
    return r;
  }
  r.bounded = true;
  LivenessResult lv = is_live(outcome.graph);
  r.live = lv.live;
  r.liveness_witness = lv.witness;
  r.sound = lv.live;
  return r;
}

}  // namespace pnstruct
