#pragma once

#include <optional>

#include "pnstruct/net.hpp"
#include "pnstruct/statespace.hpp"

namespace pnstruct {

struct NetClassification {
  bool is_p_net = false;          // every transition has one input, one output
  bool is_t_net = false;          // every place has one producer, one consumer
  bool is_free_choice = false;    // transition pre-sets pairwise equal or disjoint
  bool is_strongly_connected = false;
  /// (source, sink) when the net is a workflow net: one place with no
  /// producers, one with no consumers, and every node on a path between them.
  std::optional<std::pair<std::string, std::string>> workflow;
};

NetClassification classify(const PetriNet& net);

enum class SetKind { siphon, trap };

struct SiphonTrapVerdict {
  bool holds = false;   // the inclusion for the requested kind
  bool proper = false;  // R nonempty
};

/// R is a siphon when every transition producing into R also consumes from
/// R, and a trap when every transition consuming from R also produces into
/// R.  The empty set satisfies both vacuously and is flagged improper.
SiphonTrapVerdict siphon_trap_predicate(const PetriNet& net,
                                        const std::set<std::string>& R,
                                        SetKind kind);

struct CommonerResult {
  bool holds = false;
  /// On failure: a proper siphon containing no marked trap.
  std::optional<std::set<std::string>> bad_siphon;
};

/// Checks that every proper siphon contains a trap marked under m0, by
/// exhaustive subset enumeration with a greatest-trap-inside test.  Used as
/// a structural cross-check of the graph-based liveness decision on
/// free-choice nets, where the two must agree.  Refuses nets with more than
/// size_cap places.
CommonerResult commoner_check(const PetriNet& net, const Marking& m0,
                              int size_cap = 20);

struct ComponentSet {
  enum class Kind { P, T } kind;
  std::set<std::string> places;
  std::set<std::string> transitions;

  std::set<std::string> nodes() const;
};

/// All P-components: place sets S, taken together with every transition
/// touching S, such that each such transition has exactly one input and one
/// output place in S and the generated subnet is strongly connected.  The
/// enumeration backtracks over place choices, growing each candidate set
/// from its smallest place and branching only on adjacent transitions that
/// still miss their single input or output place inside the set; committing
/// a place immediately rules out every competitor for the slots it fills.
/// Components are returned sorted by place set.
std::vector<ComponentSet> p_components(const PetriNet& net,
                                       std::size_t limit = 1'000'000);

/// Dual enumeration: transition sets whose adjacent places each have
/// exactly one producer and one consumer inside the set.
std::vector<ComponentSet> t_components(const PetriNet& net,
                                       std::size_t limit = 1'000'000);

/// True when the union of the components covers every node of the net.
bool covers_net(const PetriNet& net, const std::vector<ComponentSet>& comps);

/// Checks one candidate against the P-component conditions directly,
/// without enumerating.
bool is_p_component(const PetriNet& net, const ComponentSet& c);

struct QProjection {
  PetriNet source;
  std::vector<ComponentSet> chosen;
  PetriNet projected_net;
  Marking projected_marking;
};

/// Restriction of the net and marking to the union of the chosen
/// P-components.  Rejects an empty selection and any member that is not a
/// P-component of the source net; the restricted node set is revalidated as
/// a full net, so a selection whose union is disconnected is also rejected.
QProjection q_projection(const PetriNet& net, const Marking& m,
                         const std::vector<ComponentSet>& Q);

/// Adds the transition t_star consuming from the sink place and producing
/// into the source place, turning a workflow net into a strongly connected
/// net.  The id t_star must be free.
PetriNet short_circuit(const PetriNet& net);

struct SoundnessResult {
  bool sound = false;
  bool bounded = false;
  /// Decided only when the exploration completes; an unbounded net leaves
  /// liveness unsettled (and already unsound).
  std::optional<bool> live;
  std::optional<std::pair<Marking, std::string>> liveness_witness;
  std::optional<UnboundedWitness> boundedness_witness;
};

/// A workflow net is sound exactly when its short-circuited form, started
/// with one token on the source place, is live and bounded.
SoundnessResult check_soundness(const PetriNet& net,
                                const ExplorationLimits& limits = {});

}  // namespace pnstruct
