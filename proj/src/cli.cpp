#include "pnstruct/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pnstruct/behavior.hpp"
#include "pnstruct/corpus.hpp"
#include "pnstruct/formats.hpp"
#include "pnstruct/net.hpp"
#include "pnstruct/report.hpp"
#include "pnstruct/statespace.hpp"
#include "pnstruct/structure.hpp"

namespace pnstruct {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Ctx {
  std::ostringstream out;
  std::ostringstream err;
  bool json = false;
  ExplorationLimits limits;
};

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

std::string braces(const std::set<std::string>& s) {
  return "{" + join(std::vector<std::string>(s.begin(), s.end()), ",") + "}";
}

std::string angles(const std::vector<std::string>& seq) {
  return "<" + join(seq, ",") + ">";
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

std::string tri(const std::optional<bool>& b) {
  if (!b.has_value()) return "?";
  return yesno(*b);
}

std::string tri_count(const std::optional<std::int64_t>& n) {
  if (!n.has_value()) return "?";
  return std::to_string(*n);
}

ordered_json json_strings(const std::set<std::string>& s) {
  ordered_json a = ordered_json::array();
  for (const auto& x : s) a.push_back(x);
  return a;
}

ordered_json json_component(const ComponentSet& c) {
  ordered_json j;
  j["places"] = json_strings(c.places);
  j["transitions"] = json_strings(c.transitions);
  return j;
}

ordered_json json_net(const PetriNet& net, const Marking& m0) {
  ordered_json j;
  j["name"] = net.name();
  j["places"] = net.places();
  j["transitions"] = net.transitions();
  ordered_json arcs = ordered_json::array();
  for (const auto& [from, to] : net.arcs()) arcs.push_back({from, to});
  j["arcs"] = std::move(arcs);
  j["marking"] = to_bracket(m0);
  return j;
}

void emit_json(Ctx& ctx, const ordered_json& j) { ctx.out << j.dump(2) << "\n"; }

std::string describe_unbounded(const UnboundedWitness& w) {
  return "prefix " + angles(w.prefix) + " reaches " + to_bracket(w.m_low) +
         "; pump " + angles(w.pump) + " reaches " + to_bracket(w.m_high);
}

/// First free-choice violation in id order: two transitions sharing an
/// input place with different input sets.
std::string free_choice_violation(const PetriNet& net) {
  const auto& places = net.places();
  for (std::size_t p = 0; p < places.size(); ++p) {
    const auto& takers = net.post_transitions(static_cast<int>(p));
    for (std::size_t i = 1; i < takers.size(); ++i) {
      if (net.pre_places(takers[0]) != net.pre_places(takers[i])) {
        return "transitions " + net.transitions()[takers[0]] + " and " +
               net.transitions()[takers[i]] + " share input place " + places[p] +
               " but have different input sets";
      }
    }
  }
  return "";
}

std::string p_net_violation(const PetriNet& net) {
  for (std::size_t t = 0; t < net.transition_count(); ++t) {
    const auto ins = net.pre_places(static_cast<int>(t)).size();
    const auto outs = net.post_places(static_cast<int>(t)).size();
    if (ins != 1 || outs != 1) {
      return "transition " + net.transitions()[t] + " has " + std::to_string(ins) +
             " input places and " + std::to_string(outs) + " output places";
    }
  }
  return "";
}

std::string t_net_violation(const PetriNet& net) {
  for (std::size_t p = 0; p < net.place_count(); ++p) {
    const auto ins = net.pre_transitions(static_cast<int>(p)).size();
    const auto outs = net.post_transitions(static_cast<int>(p)).size();
    if (ins != 1 || outs != 1) {
      return "place " + net.places()[p] + " has " + std::to_string(ins) +
             " producers and " + std::to_string(outs) + " consumers";
    }
  }
  return "";
}

std::set<std::string> reach_one_direction(const PetriNet& net,
                                          const std::string& start,
                                          Direction dir) {
  std::set<std::string> seen{start};
  std::vector<std::string> todo{start};
  while (!todo.empty()) {
    std::string node = todo.back();
    todo.pop_back();
    for (const auto& next : adjacency(net, node, dir)) {
      if (seen.insert(next).second) todo.push_back(next);
    }
  }
  return seen;
}

std::string strong_connectivity_violation(const PetriNet& net) {
  const std::string start =
      net.place_count() > 0 ? net.places().front() : net.transitions().front();
  auto all_nodes = [&]() {
    std::vector<std::string> nodes = net.places();
    nodes.insert(nodes.end(), net.transitions().begin(), net.transitions().end());
    std::sort(nodes.begin(), nodes.end());
    return nodes;
  }();
  const auto forward = reach_one_direction(net, start, Direction::post);
  for (const auto& node : all_nodes) {
    if (!forward.count(node)) return "no path from " + start + " to " + node;
  }
  const auto backward = reach_one_direction(net, start, Direction::pre);
  for (const auto& node : all_nodes) {
    if (!backward.count(node)) return "no path from " + node + " to " + start;
  }
  return "";
}

std::string workflow_violation(const PetriNet& net) {
  std::vector<std::string> sources, sinks;
  for (std::size_t p = 0; p < net.place_count(); ++p) {
    if (net.pre_transitions(static_cast<int>(p)).empty())
      sources.push_back(net.places()[p]);
    if (net.post_transitions(static_cast<int>(p)).empty())
      sinks.push_back(net.places()[p]);
  }
  if (sources.size() != 1) {
    return "expected exactly one source place, found " +
           std::to_string(sources.size()) +
           (sources.empty() ? "" : " (" + join(sources, ",") + ")");
  }
  if (sinks.size() != 1) {
    return "expected exactly one sink place, found " + std::to_string(sinks.size()) +
           (sinks.empty() ? "" : " (" + join(sinks, ",") + ")");
  }
  for (std::size_t t = 0; t < net.transition_count(); ++t) {
    if (net.pre_places(static_cast<int>(t)).empty())
      return "transition " + net.transitions()[t] + " has no input places";
    if (net.post_places(static_cast<int>(t)).empty())
      return "transition " + net.transitions()[t] + " has no output places";
  }
  const auto from_source = reach_one_direction(net, sources[0], Direction::post);
  const auto to_sink = reach_one_direction(net, sinks[0], Direction::pre);
  for (const auto& place : net.places()) {
    if (!from_source.count(place))
      return "place " + place + " is not reachable from source " + sources[0];
    if (!to_sink.count(place))
      return "place " + place + " cannot reach sink " + sinks[0];
  }
  for (const auto& trans : net.transitions()) {
    if (!from_source.count(trans))
      return "transition " + trans + " is not reachable from source " + sources[0];
    if (!to_sink.count(trans))
      return "transition " + trans + " cannot reach sink " + sinks[0];
  }
  return "";
}

std::string uncovered_node(const PetriNet& net,
                           const std::vector<ComponentSet>& comps) {
  std::set<std::string> covered;
  for (const auto& c : comps) {
    covered.insert(c.places.begin(), c.places.end());
    covered.insert(c.transitions.begin(), c.transitions.end());
  }
  for (const auto& place : net.places())
    if (!covered.count(place)) return place;
  for (const auto& trans : net.transitions())
    if (!covered.count(trans)) return trans;
  return "";
}

int emit_verdict(Ctx& ctx, const std::string& property, bool holds,
                 const std::string& message, ordered_json witness = {}) {
  if (ctx.json) {
    ordered_json j;
    j["property"] = property;
    j["holds"] = holds;
    j["message"] = message;
    if (!witness.is_null()) j["witness"] = std::move(witness);
    emit_json(ctx, j);
  } else {
    ctx.out << message << "\n";
  }
  return holds ? 0 : 1;
}

int cmd_check(Ctx& ctx, const std::string& property, const std::string& file) {
  auto [net, m0] = load_net_file(file);

  if (property == "free-choice") {
    if (classify(net).is_free_choice)
      return emit_verdict(ctx, property, true, "free-choice: yes");
    const std::string why = free_choice_violation(net);
    return emit_verdict(ctx, property, false, "free-choice: no (" + why + ")",
                        ordered_json{{"violation", why}});
  }
  if (property == "p-net") {
    if (classify(net).is_p_net) return emit_verdict(ctx, property, true, "p-net: yes");
    const std::string why = p_net_violation(net);
    return emit_verdict(ctx, property, false, "p-net: no (" + why + ")",
                        ordered_json{{"violation", why}});
  }
  if (property == "t-net") {
    if (classify(net).is_t_net) return emit_verdict(ctx, property, true, "t-net: yes");
    const std::string why = t_net_violation(net);
    return emit_verdict(ctx, property, false, "t-net: no (" + why + ")",
                        ordered_json{{"violation", why}});
  }
  if (property == "strongly-connected") {
    if (classify(net).is_strongly_connected)
      return emit_verdict(ctx, property, true, "strongly-connected: yes");
    const std::string why = strong_connectivity_violation(net);
    return emit_verdict(ctx, property, false, "strongly-connected: no (" + why + ")",
                        ordered_json{{"violation", why}});
  }
  if (property == "workflow") {
    const auto cls = classify(net);
    if (cls.workflow) {
      return emit_verdict(ctx, property, true,
                          "workflow: yes (source " + cls.workflow->first + ", sink " +
                              cls.workflow->second + ")",
                          ordered_json{{"source", cls.workflow->first},
                                       {"sink", cls.workflow->second}});
    }
    const std::string why = workflow_violation(net);
    return emit_verdict(ctx, property, false, "workflow: no (" + why + ")",
                        ordered_json{{"violation", why}});
  }
  if (property == "live") {
    const auto res = is_live(net, m0, ctx.limits);
    if (res.live) return emit_verdict(ctx, property, true, "live: yes");
    const auto& [marking, dead] = *res.witness;
    return emit_verdict(ctx, property, false,
                        "live: no (from " + to_bracket(marking) + " transition " +
                            dead + " can never fire again)",
                        ordered_json{{"marking", to_bracket(marking)},
                                     {"dead_transition", dead}});
  }
  if (property == "bounded") {
    const auto res = boundedness(net, m0, ctx.limits);
    if (res.bounded) {
      return emit_verdict(ctx, property, true,
                          "bounded: yes (bound " + std::to_string(res.bound) + ")",
                          ordered_json{{"bound", res.bound}});
    }
    return emit_verdict(ctx, property, false,
                        "bounded: no (" + describe_unbounded(*res.witness) + ")",
                        ordered_json{{"prefix", res.witness->prefix},
                                     {"m_low", to_bracket(res.witness->m_low)},
                                     {"pump", res.witness->pump},
                                     {"m_high", to_bracket(res.witness->m_high)}});
  }
  if (property == "safe") {
    const auto res = boundedness(net, m0, ctx.limits);
    if (!res.bounded) {
      return emit_verdict(ctx, property, false,
                          "safe: no (" + describe_unbounded(*res.witness) + ")",
                          ordered_json{{"prefix", res.witness->prefix},
                                       {"m_low", to_bracket(res.witness->m_low)},
                                       {"pump", res.witness->pump},
                                       {"m_high", to_bracket(res.witness->m_high)}});
    }
    if (res.bound <= 1) return emit_verdict(ctx, property, true, "safe: yes");
    for (const auto& [place, peak] : res.per_place_max) {
      if (peak > 1) {
        return emit_verdict(ctx, property, false,
                            "safe: no (place " + place + " reaches " +
                                std::to_string(peak) + " tokens)",
                            ordered_json{{"place", place}, {"max_tokens", peak}});
      }
    }
  }
  if (property == "locally-safe") {
    const auto res = is_locally_safe(net, m0, ctx.limits);
    if (res.locally_safe) {
      if (res.vacuous)
        ctx.err << "warning: the net has no P-components; local safety holds "
                   "vacuously\n";
      return emit_verdict(ctx, property, true, "locally-safe: yes");
    }
    const auto& w = *res.witness;
    return emit_verdict(
        ctx, property, false,
        "locally-safe: no (P-component " + braces(w.component.places) + " holds " +
            std::to_string(w.token_sum) + " tokens at " + to_bracket(w.marking) + ")",
        ordered_json{{"component_places", json_strings(w.component.places)},
                     {"marking", to_bracket(w.marking)},
                     {"token_sum", w.token_sum}});
  }
  if (property == "cyclic") {
    const auto home = home_markings(net, m0, ctx.limits);
    if (home.count(m0))
      return emit_verdict(ctx, property, true, "cyclic: yes");
    return emit_verdict(ctx, property, false,
                        "cyclic: no (the initial marking " + to_bracket(m0) +
                            " is not a home marking)",
                        ordered_json{{"initial_marking", to_bracket(m0)}});
  }
  if (property == "sound") {
    if (!classify(net).workflow) {
      raise(ErrorCode::NotAWorkflowNet,
            "soundness is defined for workflow nets only (" +
                workflow_violation(net) + ")");
    }
    const auto res = check_soundness(net, ctx.limits);
    if (res.sound) return emit_verdict(ctx, property, true, "sound: yes");
    if (!res.bounded) {
      return emit_verdict(
          ctx, property, false,
          "sound: no (short-circuited net is unbounded: " +
              describe_unbounded(*res.boundedness_witness) + ")",
          ordered_json{{"unbounded", describe_unbounded(*res.boundedness_witness)}});
    }
    const auto& [marking, dead] = *res.liveness_witness;
    return emit_verdict(ctx, property, false,
                        "sound: no (short-circuited net is not live: from " +
                            to_bracket(marking) + " transition " + dead +
                            " can never fire again)",
                        ordered_json{{"marking", to_bracket(marking)},
                                     {"dead_transition", dead}});
  }
  if (property == "perpetual") {
    const auto res = is_perpetual(net, m0, ctx.limits);
    if (res.perpetual) {
      ordered_json clusters_json = ordered_json::array();
      for (const auto& c : res.home_clusters)
        clusters_json.push_back(braces(c.places) + braces(c.transitions));
      return emit_verdict(ctx, property, true,
                          "perpetual: yes (" +
                              std::to_string(res.home_clusters.size()) +
                              " home cluster" +
                              (res.home_clusters.size() == 1 ? "" : "s") + ")",
                          ordered_json{{"home_clusters", std::move(clusters_json)}});
    }
    std::string why;
    if (!res.bounded) {
      why = "the net is unbounded";
    } else if (res.live.has_value() && !*res.live) {
      why = "the net is not live";
    } else {
      why = "no cluster's marking is a home marking";
    }
    return emit_verdict(ctx, property, false, "perpetual: no (" + why + ")",
                        ordered_json{{"violation", why}});
  }
  if (property == "lucent" || property == "lucency") {
    const auto res = check_lucency(net, m0, ctx.limits);
    if (res.status == LucencyStatus::Inconclusive) {
      ctx.err << "error: state space exceeds the exploration limits; lucency "
                 "verdict is inconclusive\n";
      return 3;
    }
    if (res.status == LucencyStatus::Lucent)
      return emit_verdict(ctx, property, true, "lucent: yes");
    std::string message = "lucent: no (" + to_bracket(*res.m1) + " and " +
                          to_bracket(*res.m2) +
                          " are distinct reachable markings that both enable " +
                          braces(res.shared_enabled) + ")";
    if (res.status == LucencyStatus::NotLucentUnbounded)
      message += " [net is unbounded: " + describe_unbounded(*res.pump) + "]";
    ordered_json witness{{"m1", to_bracket(*res.m1)},
                         {"m2", to_bracket(*res.m2)},
                         {"shared_enabled", json_strings(res.shared_enabled)}};
    if (res.pump) witness["unbounded"] = describe_unbounded(*res.pump);
    return emit_verdict(ctx, property, false, message, std::move(witness));
  }
  if (property == "p-cover" || property == "t-cover") {
    const bool want_p = property == "p-cover";
    const auto comps = want_p ? p_components(net) : t_components(net);
    const char* label = want_p ? "P-component" : "T-component";
    if (covers_net(net, comps)) {
      return emit_verdict(ctx, property, true,
                          property + ": yes (" + std::to_string(comps.size()) + " " +
                              label + (comps.size() == 1 ? "" : "s") + ")",
                          ordered_json{{"component_count", comps.size()}});
    }
    const std::string node = uncovered_node(net, comps);
    return emit_verdict(ctx, property, false,
                        property + ": no (node " + node + " lies in no " + label + ")",
                        ordered_json{{"uncovered_node", node}});
  }

  ctx.err << "error: unknown property '" << property
          << "' (expected one of: free-choice, p-net, t-net, strongly-connected, "
             "workflow, live, bounded, safe, locally-safe, cyclic, sound, "
             "perpetual, lucent, p-cover, t-cover)\n";
  return 2;
}

void print_analysis_human(Ctx& ctx, const AnalysisReport& r) {
  auto line = [&ctx](const std::string& label, const std::string& value) {
    ctx.out << label;
    for (std::size_t i = label.size(); i < 20; ++i) ctx.out << ' ';
    ctx.out << value << "\n";
  };
  line("net:", r.name);
  line("places:", std::to_string(r.place_count));
  line("transitions:", std::to_string(r.transition_count));
  line("reachable markings:", tri_count(r.reachable_marking_count));
  line("free choice:", yesno(r.free_choice));
  line("live:", tri(r.live));
  std::string bounded_text = tri(r.bounded);
  if (r.bounded == true && r.details.bounds)
    bounded_text += " (bound " + std::to_string(r.details.bounds->bound) + ")";
  line("bounded:", bounded_text);
  line("safe:", tri(r.safe));
  line("locally safe:", tri(r.locally_safe));
  line("p-components:", tri_count(r.p_component_count) +
                            " (cover: " + tri(r.has_p_cover) + ")");
  line("t-components:", tri_count(r.t_component_count) +
                            " (cover: " + tri(r.has_t_cover) + ")");
  line("home cluster:", tri(r.home_cluster_present));
  line("perpetual:", tri(r.perpetual));
  line("unique blocking:", tri(r.unique_blocking_markings));
  line("lucent:", tri(r.lucent));

  const auto& lux = r.details.lucency;
  if (lux.m1 && lux.m2) {
    ctx.out << "lucency witness: " << to_bracket(*lux.m1) << " and "
            << to_bracket(*lux.m2) << " both enable " << braces(lux.shared_enabled)
            << "\n";
  }
  if (r.details.liveness && r.details.liveness->witness) {
    const auto& [marking, dead] = *r.details.liveness->witness;
    ctx.out << "liveness witness: from " << to_bracket(marking) << " transition "
            << dead << " can never fire again\n";
  }
  if (r.details.unbounded) {
    ctx.out << "unboundedness witness: " << describe_unbounded(*r.details.unbounded)
            << "\n";
  }
  if (r.details.local_safety && r.details.local_safety->witness) {
    const auto& w = *r.details.local_safety->witness;
    ctx.out << "local safety witness: P-component " << braces(w.component.places)
            << " holds " << w.token_sum << " tokens at " << to_bracket(w.marking)
            << "\n";
  }
  for (const auto& warning : r.details.warnings)
    ctx.out << "warning: " << warning << "\n";
}

bool report_cut_short(const AnalysisReport& r) {
  return !r.reachable_marking_count.has_value() &&
         !r.details.unbounded.has_value();
}

int cmd_analyze(Ctx& ctx, const std::string& file) {
  auto [net, m0] = load_net_file(file);
  const AnalysisReport report = analyze(net, m0, ctx.limits);
  if (ctx.json) {
    ctx.out << serialize_report(report);
  } else {
    print_analysis_human(ctx, report);
  }
  return report_cut_short(report) ? 3 : 0;
}

int cmd_components(Ctx& ctx, const std::string& file, const std::string& kind) {
  auto [net, m0] = load_net_file(file);
  (void)m0;
  const bool want_p = kind == "p";
  const auto comps = want_p ? p_components(net) : t_components(net);
  if (ctx.json) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : comps) arr.push_back(json_component(c));
    emit_json(ctx, arr);
    return 0;
  }
  const char* label = want_p ? "P-component" : "T-component";
  ctx.out << comps.size() << " " << label << (comps.size() == 1 ? "" : "s") << "\n";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    ctx.out << (i + 1) << ": places " << braces(comps[i].places) << " transitions "
            << braces(comps[i].transitions) << "\n";
  }
  return 0;
}

int cmd_blocking(Ctx& ctx, const std::string& file, const std::string& node) {
  auto [net, m0] = load_net_file(file);
  const Cluster cluster = cluster_of(net, node);
  const BlockingReport report = blocking_markings(net, m0, cluster, ctx.limits);
  if (ctx.json) {
    ordered_json j;
    j["cluster"] = ordered_json{{"places", json_strings(cluster.places)},
                                {"transitions", json_strings(cluster.transitions)}};
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < report.blocking_markings.size(); ++i) {
      ordered_json row;
      row["marking"] = to_bracket(report.blocking_markings[i]);
      if (report.avoidance_sequences[i])
        row["avoidance"] = *report.avoidance_sequences[i];
      else
        row["avoidance"] = nullptr;
      rows.push_back(std::move(row));
    }
    j["blocking_markings"] = std::move(rows);
    emit_json(ctx, j);
    return 0;
  }
  ctx.out << "cluster of " << node << ": places " << braces(cluster.places)
          << " transitions " << braces(cluster.transitions) << "\n";
  ctx.out << "blocking markings: " << report.blocking_markings.size() << "\n";
  for (std::size_t i = 0; i < report.blocking_markings.size(); ++i) {
    ctx.out << to_bracket(report.blocking_markings[i]);
    if (report.avoidance_sequences[i])
      ctx.out << "  reached by " << angles(*report.avoidance_sequences[i]);
    else
      ctx.out << "  not reachable while avoiding the cluster's transitions";
    ctx.out << "\n";
  }
  return 0;
}

int cmd_project(Ctx& ctx, const std::string& file,
                const std::vector<std::size_t>& indices) {
  auto [net, m0] = load_net_file(file);
  const auto comps = p_components(net);
  std::vector<ComponentSet> chosen;
  for (const std::size_t index : indices) {
    if (index < 1 || index > comps.size()) {
      ctx.err << "error: component index " << index << " out of range (the net has "
              << comps.size() << " P-components, numbered from 1)\n";
      return 2;
    }
    chosen.push_back(comps[index - 1]);
  }
  const QProjection projection = q_projection(net, m0, chosen);
  if (ctx.json) {
    emit_json(ctx, json_net(projection.projected_net, projection.projected_marking));
  } else {
    ctx.out << serialize_lpn(projection.projected_net, projection.projected_marking);
  }
  return 0;
}

int cmd_short_circuit(Ctx& ctx, const std::string& file) {
  auto [net, m0] = load_net_file(file);
  const PetriNet closed = short_circuit(net);
  if (ctx.json) {
    emit_json(ctx, json_net(closed, m0));
  } else {
    ctx.out << serialize_lpn(closed, m0);
  }
  return 0;
}

int cmd_table(Ctx& ctx, const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    ctx.err << "error: not a directory: " << dir << "\n";
    return 2;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".lpn" || ext == ".pnml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });

  std::vector<AnalysisReport> reports;
  reports.reserve(files.size());
  for (const auto& path : files) {
    auto [net, m0] = load_net_file(path.string());
    reports.push_back(analyze(net, m0, ctx.limits));
  }

  if (ctx.json) {
    ordered_json arr = ordered_json::array();
    for (const auto& report : reports)
      arr.push_back(ordered_json::parse(serialize_report(report)));
    emit_json(ctx, arr);
  } else {
    const std::vector<std::string> header = {"Net",  "FreC", "Live", "Boun",
                                             "Safe", "LocS", "PC",   "HClu",
                                             "Perp", "UnBM", "Lucent", "Pls",
                                             "Trs",  "RM"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
      auto cap = [](const std::optional<bool>& b) {
        if (!b.has_value()) return std::string("?");
        return std::string(*b ? "Yes" : "No");
      };
      rows.push_back({r.name, r.free_choice ? "Yes" : "No", cap(r.live),
                      cap(r.bounded), cap(r.safe), cap(r.locally_safe),
                      tri_count(r.p_component_count), cap(r.home_cluster_present),
                      cap(r.perpetual), cap(r.unique_blocking_markings),
                      cap(r.lucent), std::to_string(r.place_count),
                      std::to_string(r.transition_count),
                      tri_count(r.reachable_marking_count)});
    }
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      width[c] = header[c].size();
      for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
    }
    auto print_row = [&](const std::vector<std::string>& row) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) ctx.out << "  ";
        if (c == 0) {
          ctx.out << row[c];
          for (std::size_t i = row[c].size(); i < width[c]; ++i) ctx.out << ' ';
        } else {
          for (std::size_t i = row[c].size(); i < width[c]; ++i) ctx.out << ' ';
          ctx.out << row[c];
        }
      }
      ctx.out << "\n";
    };
    print_row(header);
    for (const auto& row : rows) print_row(row);
  }

  for (const auto& report : reports)
    if (report_cut_short(report)) return 3;
  return 0;
}

int cmd_gen(Ctx& ctx, const std::string& kind, std::uint64_t seed, int size) {
  GenParams params;
  params.seed = seed;
  params.size = size;
  auto [net, m0] =
      kind == "wf" ? gen_block_wf(params) : gen_small_random(params);
  if (ctx.json) {
    emit_json(ctx, json_net(net, m0));
  } else {
    ctx.out << serialize_lpn(net, m0);
  }
  return 0;
}

}  // namespace

CliResult run(const std::vector<std::string>& args) {
  Ctx ctx;

  CLI::App app{"Structure and behaviour analysis for place/transition nets"};
  app.require_subcommand(1);
  std::size_t max_states = ExplorationLimits{}.max_states;
  app.add_flag("--json", ctx.json, "machine-readable output");
  app.add_option("--max-states", max_states,
                 "cap on explored markings before giving up")
      ->check(CLI::PositiveNumber);

  std::string analyze_file;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "full property report for one net file");
  analyze_cmd->add_option("file", analyze_file, "net file (.lpn or .pnml)")
      ->required();
  analyze_cmd->fallthrough();

  std::string check_prop, check_file;
  auto* check_cmd =
      app.add_subcommand("check", "decide one property; exit 0 iff it holds");
  check_cmd
      ->add_option("property", check_prop,
                   "free-choice | p-net | t-net | strongly-connected | workflow | "
                   "live | bounded | safe | locally-safe | cyclic | sound | "
                   "perpetual | lucent | p-cover | t-cover")
      ->required();
  check_cmd->add_option("file", check_file, "net file (.lpn or .pnml)")->required();
  check_cmd->fallthrough();

  std::string components_file, components_kind = "p";
  auto* components_cmd =
      app.add_subcommand("components", "enumerate P-components or T-components");
  components_cmd->add_option("file", components_file, "net file (.lpn or .pnml)")
      ->required();
  components_cmd->add_option("--kind", components_kind, "p or t")
      ->check(CLI::IsMember({"p", "t"}));
  components_cmd->fallthrough();

  std::string blocking_file, blocking_node;
  auto* blocking_cmd = app.add_subcommand(
      "blocking", "blocking markings of the cluster containing a node");
  blocking_cmd->add_option("file", blocking_file, "net file (.lpn or .pnml)")
      ->required();
  blocking_cmd->add_option("--cluster", blocking_node, "any node of the cluster")
      ->required();
  blocking_cmd->fallthrough();

  std::string project_file;
  std::vector<std::size_t> project_indices;
  auto* project_cmd = app.add_subcommand(
      "project", "restrict the net to a union of P-components");
  project_cmd->add_option("file", project_file, "net file (.lpn or .pnml)")
      ->required();
  project_cmd
      ->add_option("--components", project_indices,
                   "1-based indices as printed by 'components --kind p'")
      ->required()
      ->delimiter(',');
  project_cmd->fallthrough();

  std::string sc_file;
  auto* sc_cmd = app.add_subcommand(
      "short-circuit", "close a workflow net with the transition t_star");
  sc_cmd->add_option("file", sc_file, "net file (.lpn or .pnml)")->required();
  sc_cmd->fallthrough();

  std::string table_dir;
  auto* table_cmd = app.add_subcommand(
      "table", "one summary row per net file in a directory");
  table_cmd->add_option("dir", table_dir, "directory with .lpn/.pnml files")
      ->required();
  table_cmd->fallthrough();

  std::string gen_kind;
  std::uint64_t gen_seed = 1;
  int gen_size = 8;
  auto* gen_cmd = app.add_subcommand("gen", "emit a generated net as .lpn");
  gen_cmd->add_option("--kind", gen_kind, "wf (sound workflow net) or random")
      ->required()
      ->check(CLI::IsMember({"wf", "random"}));
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--size", gen_size, "target size");
  gen_cmd->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("pnstruct");
  for (const auto& arg : args) argv.push_back(arg.c_str());

  int code = 0;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    ctx.limits.max_states = max_states;
    ctx.limits.max_edges = max_states * 8;

    if (app.got_subcommand(analyze_cmd)) {
      code = cmd_analyze(ctx, analyze_file);
    } else if (app.got_subcommand(check_cmd)) {
      code = cmd_check(ctx, check_prop, check_file);
    } else if (app.got_subcommand(components_cmd)) {
      code = cmd_components(ctx, components_file, components_kind);
    } else if (app.got_subcommand(blocking_cmd)) {
      code = cmd_blocking(ctx, blocking_file, blocking_node);
    } else if (app.got_subcommand(project_cmd)) {
      code = cmd_project(ctx, project_file, project_indices);
    } else if (app.got_subcommand(sc_cmd)) {
      code = cmd_short_circuit(ctx, sc_file);
    } else if (app.got_subcommand(table_cmd)) {
      code = cmd_table(ctx, table_dir);
    } else if (app.got_subcommand(gen_cmd)) {
      code = cmd_gen(ctx, gen_kind, gen_seed, gen_size);
    }
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    ctx.out << (parsed.empty() ? app.help() : parsed.front()->help());
    code = 0;
  } catch (const CLI::ParseError& e) {
    ctx.err << "error: " << e.what() << "\n";
    code = 2;
  } catch (const NetError& e) {
    ctx.err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::LimitExceeded:
      case ErrorCode::CapExceeded:
      case ErrorCode::ComponentLimitExceeded:
      case ErrorCode::UnboundedNet:
        code = 3;
        break;
      default:
        code = 2;
    }
  } catch (const std::exception& e) {
    ctx.err << "error: " << e.what() << "\n";
    code = 2;
  }

  return {code, ctx.out.str(), ctx.err.str()};
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  const CliResult result = run(args);
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}

}  // namespace pnstruct
