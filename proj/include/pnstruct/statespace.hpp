#pragma once

#include <cstdint>
#include <optional>

#include "pnstruct/net.hpp"

namespace pnstruct {

struct ExplorationLimits {
  std::size_t max_states = 1'000'000;
  std::size_t max_edges = 8'000'000;
};

/// Explicit reachability graph.  Nodes appear in breadth-first discovery
/// order (ties between enabled transitions broken by transition id), which
/// makes the whole structure reproducible: two explorations of the same net
/// and marking yield identical node and edge lists.
struct ReachabilityGraph {
  struct Edge {
    std::uint32_t src;
    std::uint32_t transition;  // index into transition_labels
    std::uint32_t dst;
  };

  std::vector<Marking> nodes;
  std::size_t initial = 0;
  std::vector<Edge> edges;  // grouped by src, then by transition index
  std::vector<std::string> transition_labels;

  /// Index of a marking among the nodes, or -1 when absent.
  int find_node(const Marking& m) const;
};

/// Proof of unboundedness: replaying `prefix` from the initial marking
/// reaches m_low, replaying `pump` from m_low reaches m_high, and m_high
/// strictly dominates m_low componentwise.  The pump can therefore be
/// repeated to push some place beyond any bound.
struct UnboundedWitness {
  std::vector<std::string> prefix;
  Marking m_low;
  std::vector<std::string> pump;
  Marking m_high;
};

enum class ExploreVerdict { Complete, Unbounded, LimitExceeded };

struct ExplorationOutcome {
  ExploreVerdict verdict = ExploreVerdict::LimitExceeded;
  ReachabilityGraph graph;                  // meaningful on Complete
  std::optional<UnboundedWitness> witness;  // set on Unbounded
};

/// Breadth-first construction of the reachability graph.  Unboundedness is
/// detected by strict dominance against an ancestor on the search-tree
/// path: if a newly discovered marking componentwise dominates (and is not
/// equal to) a marking it was derived from, the connecting subsequence can
/// be pumped forever, so exploration stops with an Unbounded witness.  The
/// limits bound nodes and edges; LimitExceeded is reported only when the
/// search neither finishes nor proves unboundedness first.
///
/// Frontier expansion runs in parallel when OpenMP is available.  Each
/// breadth level is expanded concurrently and merged in (source, transition)
/// order, so the resulting node and edge ordering is identical to the serial
/// search.
ExplorationOutcome explore(const PetriNet& net, const Marking& m0,
                           const ExplorationLimits& limits = {});

/// Single-threaded reference search.  explore() must produce bit-identical
/// outcomes; the test suite and the benchmark hold it to that.
ExplorationOutcome explore_serial(const PetriNet& net, const Marking& m0,
                                  const ExplorationLimits& limits = {});

/// Strongly connected components of the reachability graph, with the
/// "bottom" flag set on components that no edge leaves.
struct SccPartition {
  std::vector<int> component;                       // node -> component id
  std::vector<std::vector<std::uint32_t>> members;  // id -> sorted node list
  std::vector<char> bottom;                         // id -> no outgoing edge
};

SccPartition strongly_connected_components(const ReachabilityGraph& g);

/// Markings reachable from every reachable marking.  On a finite graph
/// these are exactly the nodes of the unique bottom strongly connected
/// component: a marking in a bottom component can be re-reached from
/// anywhere only if every run eventually falls into that same component,
/// so two or more bottom components mean there are none.
std::set<Marking> home_markings(const ReachabilityGraph& g);
std::set<Marking> home_markings(const PetriNet& net, const Marking& m0,
                                const ExplorationLimits& limits = {});

struct LivenessResult {
  bool live = false;
  /// On failure: a marking from which the transition can never fire again.
  std::optional<std::pair<Marking, std::string>> witness;
};

/// A net is live when from every reachable marking every transition can
/// eventually fire.  On a finite reachability graph that holds exactly when
/// every bottom strongly connected component carries every transition as an
/// edge label: any run eventually enters some bottom component and stays,
/// and within it precisely the labelled transitions remain fireable.
LivenessResult is_live(const ReachabilityGraph& g);
LivenessResult is_live(const PetriNet& net, const Marking& m0,
                       const ExplorationLimits& limits = {});

struct BoundednessResult {
  bool bounded = false;
  /// Smallest k such that no place ever holds more than k tokens.
  int bound = 0;
  std::map<std::string, int> per_place_max;
  std::optional<UnboundedWitness> witness;  // set when unbounded
};

BoundednessResult boundedness(const PetriNet& net, const Marking& m0,
                              const ExplorationLimits& limits = {});

/// Shortest firing sequence from m_from to m_to that uses only transitions
/// in `allowed`, found by breadth-first search over the reachability graph
/// with disallowed edges removed.  Returns nothing when no such sequence
/// exists.  Both markings must be nodes of the graph.
std::optional<std::vector<std::string>> find_constrained_sequence(
    const ReachabilityGraph& g, const Marking& m_from, const Marking& m_to,
    const std::set<std::string>& allowed);
std::optional<std::vector<std::string>> find_constrained_sequence(
    const PetriNet& net, const Marking& m_from, const Marking& m_to,
    const std::set<std::string>& allowed, const ExplorationLimits& limits = {});

}  // namespace pnstruct
