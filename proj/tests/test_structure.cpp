#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "pnstruct/corpus.hpp"
#include "pnstruct/net.hpp"
#include "pnstruct/statespace.hpp"
#include "pnstruct/structure.hpp"

using namespace pnstruct;

namespace {

// The free-choice condition in its place form: consumer sets of any two
// places are equal or disjoint, so conflicts always involve whole clusters.
bool free_choice_by_places(const PetriNet& net) {
  for (std::size_t a = 0; a < net.place_count(); ++a)
    for (std::size_t b = a + 1; b < net.place_count(); ++b) {
      const auto& ca = net.post_transitions(int(a));
      const auto& cb = net.post_transitions(int(b));
      bool equal = ca == cb;
      std::vector<int> common;
      std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                            std::back_inserter(common));
      if (!equal && !common.empty()) return false;
    }
  return true;
}

// And in its transition form: pre-sets are pairwise equal or disjoint.
bool free_choice_by_transitions(const PetriNet& net) {
  for (std::size_t a = 0; a < net.transition_count(); ++a)
    for (std::size_t b = a + 1; b < net.transition_count(); ++b) {
      const auto& pa = net.pre_places(int(a));
      const auto& pb = net.pre_places(int(b));
      bool equal = pa == pb;
      std::vector<int> common;
      std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(),
                            std::back_inserter(common));
      if (!equal && !common.empty()) return false;
    }
  return true;
}

std::set<std::string> adjacent_transitions(const PetriNet& net,
                                           const std::set<std::string>& S) {
  std::set<std::string> out;
  for (const auto& p : S) {
    int pi = net.place_index(p);
    for (int t : net.pre_transitions(pi)) out.insert(net.transitions()[t]);
    for (int t : net.post_transitions(pi)) out.insert(net.transitions()[t]);
  }
  return out;
}

std::set<std::string> adjacent_places(const PetriNet& net,
                                      const std::set<std::string>& S) {
  std::set<std::string> out;
  for (const auto& t : S) {
    int ti = net.transition_index(t);
    for (int p : net.pre_places(ti)) out.insert(net.places()[p]);
    for (int p : net.post_places(ti)) out.insert(net.places()[p]);
  }
  return out;
}

// Exhaustive P-component enumeration by subset filtering, usable on the
// small nets only.  Serves as the oracle for the backtracking search.
std::vector<ComponentSet> brute_force_p(const PetriNet& net) {
  const auto& places = net.places();
  std::vector<ComponentSet> found;
  for (std::size_t mask = 1; mask < (std::size_t(1) << places.size()); ++mask) {
    std::set<std::string> S;
    for (std::size_t i = 0; i < places.size(); ++i)
      if (mask & (std::size_t(1) << i)) S.insert(places[i]);
    ComponentSet cand{ComponentSet::Kind::P, S, adjacent_transitions(net, S)};
    if (is_p_component(net, cand)) found.push_back(cand);
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return std::tie(a.places, a.transitions) < std::tie(b.places, b.transitions);
  });
  return found;
}

std::vector<ComponentSet> brute_force_t(const PetriNet& net) {
  const auto& trans = net.transitions();
  std::vector<ComponentSet> found;
  for (std::size_t mask = 1; mask < (std::size_t(1) << trans.size()); ++mask) {
    std::set<std::string> S;
    for (std::size_t i = 0; i < trans.size(); ++i)
      if (mask & (std::size_t(1) << i)) S.insert(trans[i]);
    std::set<std::string> P = adjacent_places(net, S);
    bool ok = true;
    for (const auto& p : P) {
      int pi = net.place_index(p);
      int in = 0, out = 0;
      for (int t : net.pre_transitions(pi)) in += S.count(trans[t]);
      for (int t : net.post_transitions(pi)) out += S.count(trans[t]);
      if (in != 1 || out != 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ComponentSet cand{ComponentSet::Kind::T, P, S};
    std::set<std::string> nodes = cand.nodes();
    if (!fragment_strongly_connected(subnet(net, nodes))) continue;
    found.push_back(cand);
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return std::tie(a.places, a.transitions) < std::tie(b.places, b.transitions);
  });
  return found;
}

bool same_components(const std::vector<ComponentSet>& a,
                     const std::vector<ComponentSet>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].places != b[i].places || a[i].transitions != b[i].transitions)
      return false;
  return true;
}

}  // namespace

TEST_SUITE("classification") {
  TEST_CASE("the two free-choice formulations agree everywhere") {
    std::vector<PetriNet> nets;
    for (const auto& e : paper_corpus()) nets.push_back(e.net);
    for (int seed = 1; seed <= 40; ++seed) {
      GenParams p;
      p.seed = std::uint64_t(seed);
      p.size = 2 + seed % 11;
      nets.push_back(gen_small_random(p).first);
    }
    for (const PetriNet& net : nets) {
      bool by_p = free_choice_by_places(net);
      bool by_t = free_choice_by_transitions(net);
      CHECK(by_p == by_t);
      CHECK(classify(net).is_free_choice == by_p);
    }
  }

  TEST_CASE("free-choice verdicts across the corpus") {
    std::set<std::string> not_fc{"fig2", "fig6"};
    for (const auto& e : paper_corpus())
      CHECK(classify(e.net).is_free_choice == (not_fc.count(e.name) == 0));
  }

  TEST_CASE("state machines and marked graphs") {
    PetriNet ring = validate_net({"ring",
                                  {"a", "b"},
                                  {"t", "u"},
                                  {{"a", "t"}, {"t", "b"}, {"b", "u"}, {"u", "a"}}});
    NetClassification c = classify(ring);
    CHECK(c.is_p_net);
    CHECK(c.is_t_net);
    CHECK(c.is_strongly_connected);

    auto fig1 = corpus_entry("fig1");
    NetClassification c1 = classify(fig1.net);
    CHECK_FALSE(c1.is_p_net);  // t1 consumes from two places
    CHECK_FALSE(c1.is_t_net);  // p1 has two consumers
    CHECK(c1.is_strongly_connected);
    CHECK_FALSE(c1.workflow.has_value());
  }

  TEST_CASE("workflow shape detection") {
    auto wf = corpus_entry("fig4_wf");
    NetClassification c = classify(wf.net);
    REQUIRE(c.workflow.has_value());
    CHECK(c.workflow->first == "start");
    CHECK(c.workflow->second == "end");
    CHECK_FALSE(c.is_strongly_connected);

    auto closed = corpus_entry("fig4");
    CHECK_FALSE(classify(closed.net).workflow.has_value());
    CHECK(classify(closed.net).is_strongly_connected);
  }
}

TEST_SUITE("siphons and traps") {
  TEST_CASE("a set that is both siphon and trap") {
    auto e = corpus_entry("fig1");
    auto s = siphon_trap_predicate(e.net, {"p1", "p4"}, SetKind::siphon);
    CHECK(s.holds);
    CHECK(s.proper);
    auto t = siphon_trap_predicate(e.net, {"p1", "p4"}, SetKind::trap);
    CHECK(t.holds);
    CHECK(t.proper);
  }

  TEST_CASE("negative cases and the empty set") {
    auto e = corpus_entry("fig1");
    CHECK_FALSE(siphon_trap_predicate(e.net, {"p3"}, SetKind::siphon).holds);
    CHECK_FALSE(siphon_trap_predicate(e.net, {"p3"}, SetKind::trap).holds);
    auto empty = siphon_trap_predicate(e.net, {}, SetKind::siphon);
    CHECK(empty.holds);
    CHECK_FALSE(empty.proper);
    CHECK(thrown_code([&] {
            siphon_trap_predicate(e.net, {"nope"}, SetKind::trap);
          }) == ErrorCode::UnknownPlace);
  }

  TEST_CASE("predicate matches its definition on random subsets") {
    SplitMix64 rng(5);
    for (const auto& e : paper_corpus()) {
      for (int rep = 0; rep < 30; ++rep) {
        std::set<std::string> R;
        for (const auto& p : e.net.places())
          if (rng.below(2) == 0) R.insert(p);
        std::set<std::string> producers, consumers;
        for (const auto& p : R) {
          int pi = e.net.place_index(p);
          for (int t : e.net.pre_transitions(pi))
            producers.insert(e.net.transitions()[t]);
          for (int t : e.net.post_transitions(pi))
            consumers.insert(e.net.transitions()[t]);
        }
        bool siphon = std::includes(consumers.begin(), consumers.end(),
                                    producers.begin(), producers.end());
        bool trap = std::includes(producers.begin(), producers.end(),
                                  consumers.begin(), consumers.end());
        CHECK(siphon_trap_predicate(e.net, R, SetKind::siphon).holds == siphon);
        CHECK(siphon_trap_predicate(e.net, R, SetKind::trap).holds == trap);
      }
    }
  }

  TEST_CASE("the siphon-and-trap structure check mirrors liveness") {
    // On bounded free-choice nets the structural criterion and the
    // graph-based decision must coincide.
    for (const auto& e : paper_corpus()) {
      if (!classify(e.net).is_free_choice) continue;
      CommonerResult c = commoner_check(e.net, e.m0);
      CHECK(c.holds == is_live(e.net, e.m0).live);
      if (!c.holds) {
        REQUIRE(c.bad_siphon.has_value());
        CHECK(siphon_trap_predicate(e.net, *c.bad_siphon, SetKind::siphon).holds);
        CHECK_FALSE(c.bad_siphon->empty());
      }
    }
  }

  TEST_CASE("an uncontained siphon really holds no marked trap") {
    auto e = corpus_entry("fig4_wf");
    CommonerResult c = commoner_check(e.net, e.m0);
    REQUIRE_FALSE(c.holds);
    REQUIRE(c.bad_siphon.has_value());
    std::vector<std::string> inside(c.bad_siphon->begin(), c.bad_siphon->end());
    REQUIRE(inside.size() <= 16);
    for (std::size_t mask = 1; mask < (std::size_t(1) << inside.size());
         ++mask) {
      std::set<std::string> sub;
      for (std::size_t i = 0; i < inside.size(); ++i)
        if (mask & (std::size_t(1) << i)) sub.insert(inside[i]);
      if (!siphon_trap_predicate(e.net, sub, SetKind::trap).holds) continue;
      int tokens = 0;
      for (const auto& p : sub) {
        auto it = e.m0.find(p);
        if (it != e.m0.end()) tokens += it->second;
      }
      CHECK(tokens == 0);
    }
  }

  TEST_CASE("the subset search refuses oversized nets") {
    auto e = corpus_entry("fig3");
    CHECK(thrown_code([&] { commoner_check(e.net, e.m0, 5); }) ==
          ErrorCode::CapExceeded);
  }
}

TEST_SUITE("component enumeration") {
  TEST_CASE("components of the first example, exactly") {
    auto e = corpus_entry("fig1");
    auto ps = p_components(e.net);
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].places == std::set<std::string>{"p1", "p4"});
    CHECK(ps[0].transitions == std::set<std::string>{"t1", "t2", "t4"});
    CHECK(ps[1].places == std::set<std::string>{"p2", "p3"});
    CHECK(ps[1].transitions == std::set<std::string>{"t1", "t2", "t3"});
    auto ts = t_components(e.net);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].places == std::set<std::string>{"p1", "p2", "p3"});
    CHECK(ts[0].transitions == std::set<std::string>{"t1", "t3"});
    CHECK(ts[1].places == std::set<std::string>{"p1", "p2", "p3", "p4"});
    CHECK(ts[1].transitions == std::set<std::string>{"t2", "t3", "t4"});
  }

  TEST_CASE("component counts across the corpus") {
    std::map<std::string, std::pair<std::size_t, std::size_t>> expected{
        {"fig1", {2, 2}}, {"fig2", {2, 2}}, {"fig3", {4, 2}},
        {"fig4", {6, 4}}, {"fig4_wf", {0, 0}}, {"fig5", {5, 1}},
        {"fig6", {2, 0}}, {"fig7", {3, 3}}, {"fig8", {3, 1}}};
    for (const auto& e : paper_corpus()) {
      CHECK(p_components(e.net).size() == expected.at(e.name).first);
      CHECK(t_components(e.net).size() == expected.at(e.name).second);
    }
  }

  TEST_CASE("enumeration equals subset filtering on the small nets") {
    for (const auto& name : {"fig1", "fig2", "fig6", "fig8"}) {
      auto e = corpus_entry(name);
      CHECK(same_components(p_components(e.net), brute_force_p(e.net)));
      CHECK(same_components(t_components(e.net), brute_force_t(e.net)));
    }
  }

  TEST_CASE("every P-component conserves its token count") {
    for (const auto& e : paper_corpus()) {
      ExplorationOutcome out = explore(e.net, e.m0);
      REQUIRE(out.verdict == ExploreVerdict::Complete);
      for (const ComponentSet& c : p_components(e.net)) {
        auto weight = [&](const Marking& m) {
          int sum = 0;
          for (const auto& p : c.places) {
            auto it = m.find(p);
            if (it != m.end()) sum += it->second;
          }
          return sum;
        };
        int at_start = weight(e.m0);
        for (const Marking& m : out.graph.nodes) CHECK(weight(m) == at_start);
      }
    }
  }

  TEST_CASE("direct membership test rejects near misses") {
    auto e = corpus_entry("fig1");
    ComponentSet good{ComponentSet::Kind::P,
                      {"p1", "p4"},
                      {"t1", "t2", "t4"}};
    CHECK(is_p_component(e.net, good));
    ComponentSet missing_adjacent{ComponentSet::Kind::P,
                                  {"p1", "p4"},
                                  {"t2", "t4"}};
    CHECK_FALSE(is_p_component(e.net, missing_adjacent));
    ComponentSet wrong_places{ComponentSet::Kind::P,
                              {"p1", "p3"},
                              adjacent_transitions(e.net, {"p1", "p3"})};
    CHECK_FALSE(is_p_component(e.net, wrong_places));
  }

  TEST_CASE("live bounded free-choice nets are covered both ways") {
    for (const auto& name : {"fig1", "fig3", "fig4", "fig5", "fig7", "fig8"}) {
      auto e = corpus_entry(name);
      CHECK(covers_net(e.net, p_components(e.net)));
      CHECK(covers_net(e.net, t_components(e.net)));
    }
  }

  TEST_CASE("cover verdicts on partial and empty families") {
    auto e = corpus_entry("fig1");
    auto ps = p_components(e.net);
    CHECK_FALSE(covers_net(e.net, {ps[0]}));  // p2 and p3 uncovered
    CHECK_FALSE(covers_net(e.net, {}));
    auto wf = corpus_entry("fig4_wf");
    CHECK(p_components(wf.net).empty());
    CHECK_FALSE(covers_net(wf.net, p_components(wf.net)));
  }

  TEST_CASE("the search honours its step budget") {
    auto e = corpus_entry("fig3");
    CHECK(thrown_code([&] { p_components(e.net, 1); }) ==
          ErrorCode::ComponentLimitExceeded);
  }
}

TEST_SUITE("component projection") {
  TEST_CASE("projecting one component of the first example") {
    auto e = corpus_entry("fig1");
    auto ps = p_components(e.net);
    QProjection q = q_projection(e.net, e.m0, {ps[0]});
    CHECK(q.projected_net.places() == std::vector<std::string>{"p1", "p4"});
    CHECK(q.projected_net.transitions() ==
          std::vector<std::string>{"t1", "t2", "t4"});
    CHECK(q.projected_net.arc_count() == 6);
    CHECK(q.projected_marking == Marking{{"p1", 1}});
  }

  TEST_CASE("projecting every component reproduces the net") {
    auto e = corpus_entry("fig1");
    QProjection q = q_projection(e.net, e.m0, p_components(e.net));
    CHECK(q.projected_net.places() == e.net.places());
    CHECK(q.projected_net.transitions() == e.net.transitions());
    CHECK(q.projected_net.arcs() == e.net.arcs());
    CHECK(q.projected_marking == e.m0);
  }

  TEST_CASE("components survive projection in both directions") {
    SplitMix64 rng(13);
    for (const auto& name : {"fig3", "fig5", "fig7"}) {
      auto e = corpus_entry(name);
      auto ps = p_components(e.net);
      REQUIRE_FALSE(ps.empty());
      for (int rep = 0; rep < 8; ++rep) {
        std::vector<ComponentSet> Q;
        for (const auto& c : ps)
          if (rng.below(2) == 0) Q.push_back(c);
        if (Q.empty()) Q.push_back(ps[rng.below(ps.size())]);
        QProjection q;
        try {
          q = q_projection(e.net, e.m0, Q);
        } catch (const NetError&) {
          continue;  // disconnected unions are rejected by contract
        }
        for (const ComponentSet& c : Q)
          CHECK(is_p_component(q.projected_net, c));
        for (const ComponentSet& c : p_components(q.projected_net)) {
          ComponentSet lifted{ComponentSet::Kind::P, c.places,
                              adjacent_transitions(e.net, c.places)};
          CHECK(is_p_component(e.net, lifted));
          CHECK(lifted.transitions == c.transitions);
        }
      }
    }
  }

  TEST_CASE("bad selections are rejected") {
    auto e = corpus_entry("fig1");
    CHECK(thrown_code([&] { q_projection(e.net, e.m0, {}); }) ==
          ErrorCode::EmptyCover);
    ComponentSet fake{ComponentSet::Kind::P, {"p1"}, {"t1"}};
    CHECK(thrown_code([&] { q_projection(e.net, e.m0, {fake}); }) ==
          ErrorCode::NotAComponent);
  }

  TEST_CASE("a union spanning no connection is rejected") {
    // Two place loops, bridged only through a place outside both
    // components, so their union falls apart.
    PetriNet net = validate_net({"bridge",
                                 {"a", "b", "c", "d", "m"},
                                 {"t", "u", "v", "w", "x", "y"},
                                 {{"a", "t"},
                                  {"t", "b"},
                                  {"b", "u"},
                                  {"u", "a"},
                                  {"c", "v"},
                                  {"v", "d"},
                                  {"d", "w"},
                                  {"w", "c"},
                                  {"a", "x"},
                                  {"x", "a"},
                                  {"x", "m"},
                                  {"m", "y"},
                                  {"c", "y"},
                                  {"y", "c"}}});
    ComponentSet left{ComponentSet::Kind::P, {"a", "b"}, {"t", "u", "x"}};
    ComponentSet right{ComponentSet::Kind::P, {"c", "d"}, {"v", "w", "y"}};
    REQUIRE(is_p_component(net, left));
    REQUIRE(is_p_component(net, right));
    CHECK(thrown_code([&] {
            q_projection(net, {{"a", 1}}, {left, right});
          }) == ErrorCode::Disconnected);
  }
}

TEST_SUITE("short circuit and soundness") {
  TEST_CASE("closing a workflow net makes it strongly connected") {
    auto e = corpus_entry("fig4_wf");
    PetriNet closed = short_circuit(e.net);
    CHECK(closed.transition_count() == e.net.transition_count() + 1);
    CHECK(closed.has_transition("t_star"));
    CHECK(classify(closed).is_strongly_connected);
    auto arcs = closed.arcs();
    CHECK(std::count(arcs.begin(), arcs.end(),
                     std::pair<std::string, std::string>{"end", "t_star"}) == 1);
    CHECK(std::count(arcs.begin(), arcs.end(),
                     std::pair<std::string, std::string>{"t_star", "start"}) ==
          1);
    CHECK_FALSE(classify(closed).workflow.has_value());
  }

  TEST_CASE("closing rejects non-workflow nets and id collisions") {
    auto e = corpus_entry("fig1");
    CHECK(thrown_code([&] { short_circuit(e.net); }) ==
          ErrorCode::NotAWorkflowNet);
    PetriNet tiny = validate_net(
        {"x", {"i", "o"}, {"t_star"}, {{"i", "t_star"}, {"t_star", "o"}}});
    CHECK(thrown_code([&] { short_circuit(tiny); }) ==
          ErrorCode::IdCollisionOnTStar);
  }

  TEST_CASE("the closed workflow example is sound") {
    auto e = corpus_entry("fig4_wf");
    SoundnessResult r = check_soundness(e.net);
    CHECK(r.sound);
    CHECK(r.bounded);
    REQUIRE(r.live.has_value());
    CHECK(*r.live);
    CHECK_FALSE(r.liveness_witness.has_value());
  }

  TEST_CASE("a mismatched choice and join is unsound but bounded") {
    PetriNet net = validate_net({"bad",
                                 {"i", "p1", "p2", "o"},
                                 {"a", "b", "c"},
                                 {{"i", "a"},
                                  {"a", "p1"},
                                  {"i", "b"},
                                  {"b", "p2"},
                                  {"p1", "c"},
                                  {"p2", "c"},
                                  {"c", "o"}}});
    SoundnessResult r = check_soundness(net);
    CHECK_FALSE(r.sound);
    CHECK(r.bounded);
    REQUIRE(r.live.has_value());
    CHECK_FALSE(*r.live);
    CHECK(r.liveness_witness.has_value());
  }

  TEST_CASE("an unbounded workflow net is unsound with liveness left open") {
    PetriNet net = validate_net({"grow",
                                 {"i", "p", "o"},
                                 {"t1", "t2"},
                                 {{"i", "t1"},
                                  {"t1", "p"},
                                  {"p", "t2"},
                                  {"t2", "p"},
                                  {"t2", "o"}}});
    SoundnessResult r = check_soundness(net);
    CHECK_FALSE(r.sound);
    CHECK_FALSE(r.bounded);
    CHECK_FALSE(r.live.has_value());
    CHECK(r.boundedness_witness.has_value());
  }

  TEST_CASE("soundness refuses nets without the workflow shape") {
    auto e = corpus_entry("fig1");
    CHECK(thrown_code([&] { check_soundness(e.net); }) ==
          ErrorCode::NotAWorkflowNet);
  }
}
