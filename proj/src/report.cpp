#include "pnstruct/report.hpp"

#include <algorithm>

#include "json.hpp"

namespace pnstruct {

AnalysisReport analyze(const PetriNet& net, const Marking& m0,
                       const ExplorationLimits& limits) {
  AnalysisReport r;
  r.name = net.name();
  r.place_count = static_cast<std::int64_t>(net.place_count());
  r.transition_count = static_cast<std::int64_t>(net.transition_count());
  r.free_choice = classify(net).is_free_choice;
  r.details.clusters = clusters(net);

  try {
    r.details.p_comps = p_components(net);
    r.p_component_count =
        static_cast<std::int64_t>(r.details.p_comps->size());
    r.has_p_cover = covers_net(net, *r.details.p_comps);
  } catch (const NetError& e) {
    if (e.code() != ErrorCode::ComponentLimitExceeded) throw;
    r.details.warnings.emplace_back(
        "P-component enumeration exceeded its cap; component fields left "
        "open");
  }
  try {
    r.details.t_comps = t_components(net);
    r.t_component_count =
        static_cast<std::int64_t>(r.details.t_comps->size());
    r.has_t_cover = covers_net(net, *r.details.t_comps);
  } catch (const NetError& e) {
    if (e.code() != ErrorCode::ComponentLimitExceeded) throw;
    r.details.warnings.emplace_back(
        "T-component enumeration exceeded its cap; component fields left "
        "open");
  }

  ExplorationOutcome outcome = explore(net, m0, limits);

  if (outcome.verdict == ExploreVerdict::LimitExceeded) {
    r.details.lucency.status = LucencyStatus::Inconclusive;
    r.details.warnings.emplace_back(
        "state-space limits exceeded; behavioural verdicts are "
        "inconclusive");
    return r;
  }

  if (outcome.verdict == ExploreVerdict::Unbounded) {
    r.bounded = false;
    r.safe = false;
    r.perpetual = false;
    r.lucent = false;
    r.details.unbounded = outcome.witness;
    r.details.lucency = check_lucency(net, m0, limits);
    r.details.warnings.emplace_back(
        "net is unbounded; the reachable set is infinite, so liveness, "
        "local safety, home clusters, and blocking markings are left open");
    return r;
  }

  const ReachabilityGraph& g = outcome.graph;
  r.reachable_marking_count = static_cast<std::int64_t>(g.nodes.size());

  BoundednessResult b;
  b.bounded = true;
  for (const auto& m : g.nodes)
    for (const auto& [place, count] : m) {
      auto [it, fresh] = b.per_place_max.try_emplace(place, count);
      if (!fresh) it->second = std::max(it->second, count);
      b.bound = std::max(b.bound, count);
    }
  r.bounded = true;
  r.safe = b.bound <= 1;
  r.details.bounds = std::move(b);

  LivenessResult lv = is_live(g);
  r.live = lv.live;
  r.details.liveness = std::move(lv);

  std::set<Marking> home = home_markings(g);
  r.details.home_markings.assign(home.begin(), home.end());
  for (const auto& c : r.details.clusters)
    if (home.count(cluster_marking(c))) r.details.home_clusters.push_back(c);
  r.home_cluster_present = !r.details.home_clusters.empty();
  r.perpetual = *r.live && *r.bounded && *r.home_cluster_present;

  if (r.details.p_comps) {
    LocalSafetyResult ls = is_locally_safe(*r.details.p_comps, g);
    if (ls.vacuous)
      r.details.warnings.emplace_back(
          "net has no P-components; local safety holds vacuously");
    r.locally_safe = ls.locally_safe;
    r.details.local_safety = std::move(ls);
  }

  bool all_at_most_one = true;
  bool all_at_least_one = true;
  for (const auto& c : r.details.clusters) {
    BlockingReport br = blocking_markings(net, g, m0, c);
    if (br.blocking_markings.size() > 1) all_at_most_one = false;
    if (br.blocking_markings.empty()) all_at_least_one = false;
    r.details.blocking.push_back(std::move(br));
  }
  // Uniqueness asks for at most one blocking marking per cluster, and for
  // exactly one on live bounded free-choice nets.
  r.unique_blocking_markings =
      all_at_most_one &&
      (!(*r.live && r.free_choice) || all_at_least_one);

  r.details.lucency = check_lucency(g);
  r.lucent = r.details.lucency.status == LucencyStatus::Lucent;
  return r;
}

namespace {

using json = nlohmann::ordered_json;

json opt_bool(const std::optional<bool>& v) {
  return v ? json(*v) : json(nullptr);
}

json opt_int(const std::optional<std::int64_t>& v) {
  return v ? json(*v) : json(nullptr);
}

json cluster_json(const Cluster& c) {
  json j;
  j["places"] = c.places;
  j["transitions"] = c.transitions;
  return j;
}

json component_json(const ComponentSet& c) {
  json j;
  j["places"] = c.places;
  j["transitions"] = c.transitions;
  return j;
}

std::string cluster_key(const Cluster& c) {
  std::string key;
  for (const auto& p : c.places) key += (key.empty() ? "" : ",") + p;
  for (const auto& t : c.transitions) key += (key.empty() ? "" : ",") + t;
  return key;
}

json witness_json(const UnboundedWitness& w) {
  json j;
  j["prefix"] = w.prefix;
  j["m_low"] = to_bracket(w.m_low);
  j["pump"] = w.pump;
  j["m_high"] = to_bracket(w.m_high);
  return j;
}

const char* lucency_name(LucencyStatus s) {
  switch (s) {
    case LucencyStatus::Lucent: return "lucent";
    case LucencyStatus::NotLucent: return "not_lucent";
    case LucencyStatus::NotLucentUnbounded: return "not_lucent_unbounded";
    case LucencyStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

json details_json(const ReportDetails& d) {
  json j;
  json cl = json::array();
  for (const auto& c : d.clusters) cl.push_back(cluster_json(c));
  j["clusters"] = std::move(cl);

  if (d.p_comps) {
    json pc = json::array();
    for (const auto& c : *d.p_comps) pc.push_back(component_json(c));
    j["p_components"] = std::move(pc);
  } else {
    j["p_components"] = nullptr;
  }
  if (d.t_comps) {
    json tc = json::array();
    for (const auto& c : *d.t_comps) tc.push_back(component_json(c));
    j["t_components"] = std::move(tc);
  } else {
    j["t_components"] = nullptr;
  }

  json hm = json::array();
  for (const auto& m : d.home_markings) hm.push_back(to_bracket(m));
  j["home_markings"] = std::move(hm);

  json hc = json::array();
  for (const auto& c : d.home_clusters) hc.push_back(cluster_json(c));
  j["home_clusters"] = std::move(hc);

  json blocking = json::object();
  for (const auto& br : d.blocking) {
    json entry;
    json ms = json::array();
    for (const auto& m : br.blocking_markings) ms.push_back(to_bracket(m));
    entry["markings"] = std::move(ms);
    json av = json::array();
    for (const auto& seq : br.avoidance_sequences)
      av.push_back(seq ? json(*seq) : json(nullptr));
    entry["avoidance"] = std::move(av);
    blocking[cluster_key(br.cluster)] = std::move(entry);
  }
  j["blocking"] = std::move(blocking);

  {
    json lj;
    lj["status"] = lucency_name(d.lucency.status);
    if (d.lucency.m1) lj["m1"] = to_bracket(*d.lucency.m1);
    if (d.lucency.m2) lj["m2"] = to_bracket(*d.lucency.m2);
    if (!d.lucency.shared_enabled.empty())
      lj["shared_enabled"] = d.lucency.shared_enabled;
    if (d.lucency.pump) lj["pump"] = witness_json(*d.lucency.pump);
    j["lucency"] = std::move(lj);
  }

  if (d.liveness && !d.liveness->live && d.liveness->witness) {
    json w;
    w["marking"] = to_bracket(d.liveness->witness->first);
    w["dead_transition"] = d.liveness->witness->second;
    j["liveness_witness"] = std::move(w);
  }
  if (d.bounds && d.bounds->bounded) {
    j["bound"] = d.bounds->bound;
    j["per_place_max"] = d.bounds->per_place_max;
  }
  if (d.local_safety && !d.local_safety->locally_safe &&
      d.local_safety->witness) {
    json w;
    w["component_places"] = d.local_safety->witness->component.places;
    w["marking"] = to_bracket(d.local_safety->witness->marking);
    w["token_sum"] = d.local_safety->witness->token_sum;
    j["local_safety_witness"] = std::move(w);
  }
  if (d.unbounded) j["unbounded_witness"] = witness_json(*d.unbounded);
  j["warnings"] = d.warnings;
  return j;
}

}  // namespace

std::string serialize_report(const AnalysisReport& r) {
  json j;
  j["name"] = r.name;
  j["place_count"] = r.place_count;
  j["transition_count"] = r.transition_count;
  j["reachable_marking_count"] = opt_int(r.reachable_marking_count);
  j["free_choice"] = r.free_choice;
  j["live"] = opt_bool(r.live);
  j["bounded"] = opt_bool(r.bounded);
  j["safe"] = opt_bool(r.safe);
  j["locally_safe"] = opt_bool(r.locally_safe);
  j["p_component_count"] = opt_int(r.p_component_count);
  j["t_component_count"] = opt_int(r.t_component_count);
  j["has_p_cover"] = opt_bool(r.has_p_cover);
  j["has_t_cover"] = opt_bool(r.has_t_cover);
  j["home_cluster_present"] = opt_bool(r.home_cluster_present);
  j["perpetual"] = opt_bool(r.perpetual);
  j["unique_blocking_markings"] = opt_bool(r.unique_blocking_markings);
  j["lucent"] = opt_bool(r.lucent);
  j["details"] = details_json(r.details);
  return j.dump(2) + "\n";
}

}  // namespace pnstruct
