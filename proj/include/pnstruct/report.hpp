#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pnstruct/behavior.hpp"
#include "pnstruct/net.hpp"
#include "pnstruct/statespace.hpp"
#include "pnstruct/structure.hpp"

namespace pnstruct {

/// Everything behind the summary row, kept for witness printing and the
/// JSON details object.
struct ReportDetails {
  std::vector<Cluster> clusters;
  std::optional<std::vector<ComponentSet>> p_comps;  // unset past the cap
  std::optional<std::vector<ComponentSet>> t_comps;
  std::vector<Marking> home_markings;  // sorted
  std::vector<Cluster> home_clusters;
  std::vector<BlockingReport> blocking;  // one per cluster, cluster order
  LucencyVerdict lucency;
  std::optional<LivenessResult> liveness;
  std::optional<BoundednessResult> bounds;
  std::optional<LocalSafetyResult> local_safety;
  std::optional<UnboundedWitness> unbounded;
  std::vector<std::string> warnings;
};

/// One summary row per net.  Fields that depend on a completed state-space
/// search are empty optionals when the search was cut off (and then a
/// warning explains which); unboundedness itself settles several of them
/// definitely.  Invariants: perpetual = live and bounded and
/// home_cluster_present; safe implies bounded.
struct AnalysisReport {
  std::string name;
  std::int64_t place_count = 0;
  std::int64_t transition_count = 0;
  std::optional<std::int64_t> reachable_marking_count;
  bool free_choice = false;
  std::optional<bool> live;
  std::optional<bool> bounded;
  std::optional<bool> safe;
  std::optional<bool> locally_safe;
  std::optional<std::int64_t> p_component_count;
  std::optional<std::int64_t> t_component_count;
  std::optional<bool> has_p_cover;
  std::optional<bool> has_t_cover;
  std::optional<bool> home_cluster_present;
  std::optional<bool> perpetual;
  std::optional<bool> unique_blocking_markings;
  std::optional<bool> lucent;
  ReportDetails details;
};

/// Runs the full analysis pipeline over one marked net: classification,
/// state-space search, liveness, boundedness, component enumeration and
/// covers, local safety, home clusters, perpetuality, per-cluster blocking
/// markings, lucency.  Resource cutoffs downgrade the affected fields to
/// empty optionals instead of failing the whole report.
AnalysisReport analyze(const PetriNet& net, const Marking& m0,
                       const ExplorationLimits& limits = {});

/// Deterministic JSON rendering: fixed key order, two-space indent,
/// trailing newline.  Empty optionals serialize as null; the details
/// object carries clusters, components, home markings, the blocking map,
/// witnesses, and warnings.
std::string serialize_report(const AnalysisReport& report);

}  // namespace pnstruct
