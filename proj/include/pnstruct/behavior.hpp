#pragma once

#include <optional>

#include "pnstruct/net.hpp"
#include "pnstruct/statespace.hpp"
#include "pnstruct/structure.hpp"

namespace pnstruct {

/// Blocking analysis of one cluster: the reachable markings whose enabled
/// set is exactly the cluster's transition set, each paired with a shortest
/// firing sequence from the initial marking that avoids those transitions,
/// when one exists.
struct BlockingReport {
  Cluster cluster;
  std::vector<Marking> blocking_markings;  // sorted by marking order
  /// avoidance_sequences[i] realizes blocking_markings[i] using only
  /// transitions outside the cluster; empty optional when unreachable that
  /// way.
  std::vector<std::optional<std::vector<std::string>>> avoidance_sequences;
};

BlockingReport blocking_markings(const PetriNet& net, const Marking& m0,
                                 const Cluster& c,
                                 const ExplorationLimits& limits = {});

/// Same analysis over an already-explored graph.
BlockingReport blocking_markings(const PetriNet& net,
                                 const ReachabilityGraph& g, const Marking& m0,
                                 const Cluster& c);

struct LocalSafetyWitness {
  ComponentSet component;
  Marking marking;
  int token_sum = 0;
};

struct LocalSafetyResult {
  bool locally_safe = false;
  /// True when the net has no P-components at all, making the verdict an
  /// empty universal statement; report consumers surface a warning.
  bool vacuous = false;
  std::optional<LocalSafetyWitness> witness;
};

/// Every P-component must hold at most one token in every reachable
/// marking.  The witness names the first component (in enumeration order)
/// and first marking (in discovery order) where the sum exceeds one.
LocalSafetyResult is_locally_safe(const PetriNet& net, const Marking& m0,
                                  const ExplorationLimits& limits = {});

/// Core of the check, over precomputed components and graph.
LocalSafetyResult is_locally_safe(const std::vector<ComponentSet>& comps,
                                  const ReachabilityGraph& g);

/// Clusters whose canonical marking (one token per cluster place) is a home
/// marking, in cluster order.
std::vector<Cluster> home_clusters(const PetriNet& net, const Marking& m0,
                                   const ExplorationLimits& limits = {});

struct PerpetualityReport {
  bool bounded = false;
  std::optional<bool> live;  // undecided when the net is unbounded
  std::vector<Cluster> home_clusters;
  std::optional<LocalSafetyResult> locally_safe;
  bool perpetual = false;
};

/// Perpetual means live, bounded, and owning a home cluster; the report
/// keeps every sub-verdict.
PerpetualityReport is_perpetual(const PetriNet& net, const Marking& m0,
                                const ExplorationLimits& limits = {});

enum class LucencyStatus { Lucent, NotLucent, NotLucentUnbounded, Inconclusive };

/// A marked net is lucent when distinct reachable markings always enable
/// distinct transition sets.
struct LucencyVerdict {
  LucencyStatus status = LucencyStatus::Inconclusive;
  /// NotLucent: the lexicographically first pair of distinct reachable
  /// markings sharing an enabled set.  Also filled for NotLucentUnbounded
  /// when pumping materializes such a pair.
  std::optional<Marking> m1, m2;
  std::set<std::string> shared_enabled;
  /// NotLucentUnbounded: the dominance witness proving unboundedness.
  std::optional<UnboundedWitness> pump;
};

/// Decides lucency.  Bounded nets are settled by grouping the reachable
/// markings by enabled set.  An unbounded net is never lucent: repeating
/// the pump only ever adds tokens, so the set of marked places stabilizes
/// after at most one pump per place, and from then on consecutive pump
/// results are distinct markings with identical enabled sets.  The verdict
/// carries such a pair together with the pump witness.
LucencyVerdict check_lucency(const PetriNet& net, const Marking& m0,
                             const ExplorationLimits& limits = {});

/// Bounded-case grouping over an already-explored graph.
LucencyVerdict check_lucency(const ReachabilityGraph& g);

/// Finds a firing sequence from mStart to the cluster marking M(C) whose
/// projection onto the P-component X is exactly the transition list of
/// `path`.  The path alternates places and transitions inside X, must be
/// elementary (no repeated node), starts at a place marked in mStart, and
/// ends at the place of C lying in X.  The search runs breadth-first over
/// (reachability-graph node, path progress) pairs: transitions of X are
/// only allowed in path order, all other transitions move freely.
///
/// With intermediate_avoid_home_place set (meaningful when C has a single
/// place p_H), markings strictly between start and goal must not mark p_H.
std::optional<std::vector<std::string>> realize_path(
    const PetriNet& net, const Marking& m0, const Marking& mStart,
    const ComponentSet& X, const std::vector<std::string>& path,
    const Cluster& C, bool intermediate_avoid_home_place = false,
    const ExplorationLimits& limits = {});

}  // namespace pnstruct
