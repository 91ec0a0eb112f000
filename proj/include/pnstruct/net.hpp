#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pnstruct {

/// Diagnostic codes carried by every NetError.  The spelling is part of the
/// tool's output contract: the CLI prints them verbatim on stderr.
enum class ErrorCode {
  EmptyPlaces,
  EmptyTransitions,
  Disconnected,
  DanglingArcEndpoint,
  DuplicateId,
  PlaceToPlaceArc,
  UnknownNode,
  UnknownPlace,
  UnknownTransition,
  MarkingPlaceUnknown,
  NotEnabled,
  NotEnabledAtStep,
  EmptyNodeSet,
  UnknownMarking,
  CapExceeded,
  ComponentLimitExceeded,
  EmptyCover,
  NotAComponent,
  NotAWorkflowNet,
  IdCollisionOnTStar,
  UnknownCluster,
  UnboundedNet,
  LimitExceeded,
  PathNotElementary,
  PathLeavesComponent,
  StartUnmarked,
  SyntaxError,
  DuplicateDecl,
  UnknownArcEndpoint,
  ValidationError,
  MalformedXml,
  UnsupportedNetType,
  SizeOutOfRange,
};

const char* to_string(ErrorCode code);

class NetError : public std::runtime_error {
 public:
  NetError(ErrorCode code, const std::string& detail);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& detail);

/// A marking is a multiset of places in canonical form: entries with count
/// zero are never stored, so equality and ordering are structural.  The
/// map order doubles as the deterministic marking order used everywhere
/// (lexicographic by place id, then count).
using Marking = std::map<std::string, int>;

/// Renders a marking in multiset bracket notation, e.g. [p1,p2,p2].
std::string to_bracket(const Marking& m);

/// Unvalidated net description as it comes out of a parser or generator.
struct RawNet {
  std::string name;
  std::vector<std::string> places;
  std::vector<std::string> transitions;
  std::vector<std::pair<std::string, std::string>> arcs;
};

/// Immutable place/transition net.  Node ids are strings; all adjacency is
/// precomputed on validated construction and exposed both by id and by
/// dense index (places and transitions each sorted, indexed separately).
class PetriNet {
 public:
  /// Default-constructed nets are empty shells; every populated net comes
  /// out of validate_net.
  PetriNet() = default;

  const std::string& name() const { return name_; }
  const std::vector<std::string>& places() const { return places_; }
  const std::vector<std::string>& transitions() const { return transitions_; }

  bool has_place(const std::string& id) const;
  bool has_transition(const std::string& id) const;
  bool has_node(const std::string& id) const;

  /// Dense index of a place/transition id, or -1 when absent.
  int place_index(const std::string& id) const;
  int transition_index(const std::string& id) const;

  /// Input places of a transition / output places, as sorted place indices.
  const std::vector<int>& pre_places(int t) const { return t_pre_[t]; }
  const std::vector<int>& post_places(int t) const { return t_post_[t]; }
  /// Producing / consuming transitions of a place, as sorted indices.
  const std::vector<int>& pre_transitions(int p) const { return p_pre_[p]; }
  const std::vector<int>& post_transitions(int p) const { return p_post_[p]; }

  std::size_t place_count() const { return places_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }
  std::size_t arc_count() const { return arc_count_; }

  /// All arcs as (from, to) id pairs, sorted; handy for serialization.
  std::vector<std::pair<std::string, std::string>> arcs() const;

  friend PetriNet validate_net(const RawNet& raw);

 private:
  std::string name_;
  std::vector<std::string> places_;
  std::vector<std::string> transitions_;
  std::map<std::string, int> place_idx_;
  std::map<std::string, int> transition_idx_;
  std::vector<std::vector<int>> t_pre_, t_post_;  // by transition index
  std::vector<std::vector<int>> p_pre_, p_post_;  // by place index
  std::size_t arc_count_ = 0;
};

/// Checks every structural invariant (nonempty node sets, id uniqueness and
/// syntax, bipartite arcs with known endpoints, connectedness of the
/// underlying undirected graph) and builds the canonical net.
PetriNet validate_net(const RawNet& raw);

/// True iff the id matches [A-Za-z][A-Za-z0-9_]*.
bool valid_id(const std::string& id);

enum class Direction { pre, post };

/// Input or output nodes of one node.  For a place the result contains
/// transitions, for a transition places.
std::set<std::string> adjacency(const PetriNet& net, const std::string& node,
                                Direction dir);

/// en(N,M): transitions whose every input place carries a token.
std::set<std::string> enabled_transitions(const PetriNet& net,
                                          const Marking& m);

/// Fires one enabled transition: removes a token per input place, adds one
/// per output place.
Marking fire(const PetriNet& net, const Marking& m, const std::string& t);

/// Replays a whole sequence; throws NotEnabledAtStep with the failing index.
Marking fire_sequence(const PetriNet& net, const Marking& m,
                      const std::vector<std::string>& seq);

/// A cluster: the smallest node set closed under "a place brings in its
/// consumers, a transition brings in its input places".  Clusters partition
/// the node set.
struct Cluster {
  std::set<std::string> places;
  std::set<std::string> transitions;

  bool operator==(const Cluster& o) const = default;
  bool operator<(const Cluster& o) const {
    return std::tie(places, transitions) < std::tie(o.places, o.transitions);
  }
};

/// All clusters, sorted by their place/transition sets.
std::vector<Cluster> clusters(const PetriNet& net);

/// The cluster containing a given node.
Cluster cluster_of(const PetriNet& net, const std::string& node);

/// M(C): one token on each place of the cluster.
Marking cluster_marking(const Cluster& c);

/// Restriction of a marking to a place set.
Marking project_marking(const Marking& m, const std::set<std::string>& X);

/// Subsequence of steps retaining exactly the members of A.
std::vector<std::string> project_sequence(const std::vector<std::string>& seq,
                                          const std::set<std::string>& A);

/// Subnet generated by a node set: nodes restricted to X, arcs with both
/// endpoints in X.  A fragment, not a validated net; callers that need a
/// full net revalidate.
struct SubnetFragment {
  std::vector<std::string> places;
  std::vector<std::string> transitions;
  std::vector<std::pair<std::string, std::string>> arcs;
};

SubnetFragment subnet(const PetriNet& net, const std::set<std::string>& X);

/// True iff the fragment's directed graph is strongly connected (a single
/// node with no arcs counts as strongly connected).
bool fragment_strongly_connected(const SubnetFragment& frag);

}  // namespace pnstruct
