#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "pnstruct/behavior.hpp"
#include "pnstruct/corpus.hpp"
#include "pnstruct/net.hpp"
#include "pnstruct/statespace.hpp"
#include "pnstruct/structure.hpp"

using namespace pnstruct;

namespace {

std::vector<std::string> brackets(const std::vector<Marking>& ms) {
  std::vector<std::string> out;
  for (const auto& m : ms) out.push_back(to_bracket(m));
  return out;
}

bool avoids(const std::vector<std::string>& seq,
            const std::set<std::string>& banned) {
  return std::none_of(seq.begin(), seq.end(), [&](const std::string& t) {
    return banned.count(t) != 0;
  });
}

PetriNet pump_net() {
  return validate_net({"pump",
                       {"p", "q"},
                       {"t", "u"},
                       {{"p", "t"}, {"t", "p"}, {"t", "q"}, {"q", "u"}, {"u", "q"}}});
}

}  // namespace

TEST_SUITE("blocking markings") {
  TEST_CASE("one blocking marking per cluster on the first example") {
    auto e = corpus_entry("fig1");
    std::vector<Cluster> cs = clusters(e.net);
    REQUIRE(cs.size() == 3);
    std::vector<std::string> expected{"[p1,p2]", "[p1,p3]", "[p2,p4]"};
    for (std::size_t i = 0; i < cs.size(); ++i) {
      BlockingReport r = blocking_markings(e.net, e.m0, cs[i]);
      CHECK(r.cluster == cs[i]);
      CHECK(brackets(r.blocking_markings) ==
            std::vector<std::string>{expected[i]});
      REQUIRE(r.avoidance_sequences.size() == 1);
      REQUIRE(r.avoidance_sequences[0].has_value());
      CHECK(avoids(*r.avoidance_sequences[0], cs[i].transitions));
      CHECK(fire_sequence(e.net, e.m0, *r.avoidance_sequences[0]) ==
            r.blocking_markings[0]);
    }
  }

  TEST_CASE("the named clusters of the fifth example block as published") {
    auto e = corpus_entry("fig5");
    Cluster c2 = cluster_of(e.net, "p2");
    CHECK(c2 == Cluster{{"p2"}, {"t2"}});
    CHECK(brackets(blocking_markings(e.net, e.m0, c2).blocking_markings) ==
          std::vector<std::string>{"[p2,p5]"});
    Cluster c6 = cluster_of(e.net, "p6");
    CHECK(c6 == Cluster{{"p6", "p7"}, {"t6"}});
    CHECK(brackets(blocking_markings(e.net, e.m0, c6).blocking_markings) ==
          std::vector<std::string>{"[p6,p7,p8]"});
  }

  TEST_CASE("a non-free-choice net can block one cluster twice") {
    auto e = corpus_entry("fig6");
    BlockingReport top = blocking_markings(e.net, e.m0, cluster_of(e.net, "p1"));
    CHECK(brackets(top.blocking_markings) ==
          std::vector<std::string>{"[p1,p3]", "[p1,p4]"});
    BlockingReport bottom =
        blocking_markings(e.net, e.m0, cluster_of(e.net, "p5"));
    CHECK(brackets(bottom.blocking_markings) ==
          std::vector<std::string>{"[p3,p5]", "[p4,p5]"});
    BlockingReport middle =
        blocking_markings(e.net, e.m0, cluster_of(e.net, "p2"));
    CHECK(middle.blocking_markings.empty());
    CHECK(middle.avoidance_sequences.empty());
  }

  TEST_CASE("a blocking marking enables the cluster and nothing else") {
    for (const auto& e : paper_corpus()) {
      BoundednessResult b = boundedness(e.net, e.m0);
      if (!b.bounded) continue;
      for (const Cluster& c : clusters(e.net)) {
        BlockingReport r = blocking_markings(e.net, e.m0, c);
        for (const Marking& m : r.blocking_markings)
          CHECK(enabled_transitions(e.net, m) == c.transitions);
      }
    }
  }

  TEST_CASE("live bounded free-choice nets block each cluster exactly once") {
    for (const auto& name : {"fig1", "fig3", "fig4", "fig5", "fig7", "fig8"}) {
      auto e = corpus_entry(name);
      for (const Cluster& c : clusters(e.net)) {
        BlockingReport r = blocking_markings(e.net, e.m0, c);
        REQUIRE(r.blocking_markings.size() == 1);
        REQUIRE(r.avoidance_sequences[0].has_value());
        const auto& seq = *r.avoidance_sequences[0];
        CHECK(avoids(seq, c.transitions));
        CHECK(fire_sequence(e.net, e.m0, seq) == r.blocking_markings[0]);
      }
    }
  }

  TEST_CASE("graph-level and net-level overloads agree") {
    auto e = corpus_entry("fig5");
    ReachabilityGraph g = explore(e.net, e.m0).graph;
    for (const Cluster& c : clusters(e.net)) {
      BlockingReport a = blocking_markings(e.net, e.m0, c);
      BlockingReport b = blocking_markings(e.net, g, e.m0, c);
      CHECK(a.blocking_markings == b.blocking_markings);
      CHECK(a.avoidance_sequences == b.avoidance_sequences);
    }
  }

  TEST_CASE("foreign clusters are rejected") {
    auto e = corpus_entry("fig1");
    Cluster foreign{{"nope"}, {"t9"}};
    CHECK(thrown_code([&] { blocking_markings(e.net, e.m0, foreign); }) ==
          ErrorCode::UnknownCluster);
  }
}

TEST_SUITE("local safety") {
  TEST_CASE("safe example nets are locally safe without a witness") {
    for (const auto& name : {"fig1", "fig3", "fig4"}) {
      auto e = corpus_entry(name);
      LocalSafetyResult r = is_locally_safe(e.net, e.m0);
      CHECK(r.locally_safe);
      CHECK_FALSE(r.vacuous);
      CHECK_FALSE(r.witness.has_value());
    }
  }

  TEST_CASE("the fifth example concentrates two tokens on one component") {
    auto e = corpus_entry("fig5");
    LocalSafetyResult r = is_locally_safe(e.net, e.m0);
    REQUIRE_FALSE(r.locally_safe);
    REQUIRE(r.witness.has_value());
    const LocalSafetyWitness& w = *r.witness;
    CHECK(is_p_component(e.net, w.component));
    CHECK(w.token_sum >= 2);
    int sum = 0;
    for (const auto& p : w.component.places) {
      auto it = w.marking.find(p);
      if (it != w.marking.end()) sum += it->second;
    }
    CHECK(sum == w.token_sum);
    ReachabilityGraph g = explore(e.net, e.m0).graph;
    CHECK(g.find_node(w.marking) >= 0);
  }

  TEST_CASE("no components means a vacuous yes") {
    auto e = corpus_entry("fig4_wf");
    LocalSafetyResult r = is_locally_safe(e.net, e.m0);
    CHECK(r.locally_safe);
    CHECK(r.vacuous);
  }

  TEST_CASE("precomputed overload agrees") {
    auto e = corpus_entry("fig5");
    ReachabilityGraph g = explore(e.net, e.m0).graph;
    LocalSafetyResult a = is_locally_safe(e.net, e.m0);
    LocalSafetyResult b = is_locally_safe(p_components(e.net), g);
    CHECK(a.locally_safe == b.locally_safe);
    CHECK(a.vacuous == b.vacuous);
    REQUIRE(a.witness.has_value() == b.witness.has_value());
    CHECK(a.witness->marking == b.witness->marking);
  }
}

TEST_SUITE("home clusters and perpetuality") {
  TEST_CASE("home clusters across the corpus") {
    std::set<std::string> with_home{"fig1", "fig2", "fig3", "fig4", "fig4_wf"};
    for (const auto& e : paper_corpus()) {
      std::vector<Cluster> hc = home_clusters(e.net, e.m0);
      CHECK(hc.empty() == (with_home.count(e.name) == 0));
    }
    auto fig1 = corpus_entry("fig1");
    std::vector<Cluster> hc = home_clusters(fig1.net, fig1.m0);
    REQUIRE(hc.size() == 1);
    CHECK(hc[0] == Cluster{{"p1", "p2"}, {"t1", "t2"}});
  }

  TEST_CASE("a cluster is home exactly when its marking is") {
    for (const auto& name : {"fig1", "fig2", "fig5", "fig6"}) {
      auto e = corpus_entry(name);
      std::set<Marking> home = home_markings(e.net, e.m0);
      std::vector<Cluster> hc = home_clusters(e.net, e.m0);
      for (const Cluster& c : clusters(e.net)) {
        bool in = std::find(hc.begin(), hc.end(), c) != hc.end();
        CHECK(in == (home.count(cluster_marking(c)) == 1));
      }
    }
  }

  TEST_CASE("perpetual verdicts across the corpus") {
    std::set<std::string> perpetual{"fig1", "fig2", "fig3", "fig4"};
    for (const auto& e : paper_corpus()) {
      PerpetualityReport r = is_perpetual(e.net, e.m0);
      CHECK(r.perpetual == (perpetual.count(e.name) == 1));
      CHECK(r.bounded);
      REQUIRE(r.live.has_value());
      CHECK(*r.live == (e.name != "fig4_wf"));
      if (r.perpetual) CHECK_FALSE(r.home_clusters.empty());
    }
  }

  TEST_CASE("an unbounded net is never perpetual") {
    PerpetualityReport r = is_perpetual(pump_net(), {{"p", 1}});
    CHECK_FALSE(r.perpetual);
    CHECK_FALSE(r.bounded);
    CHECK_FALSE(r.live.has_value());
  }
}

TEST_SUITE("lucency") {
  TEST_CASE("published counterexample pairs, exactly") {
    struct Expect {
      const char* name;
      const char* m1;
      const char* m2;
      std::set<std::string> shared;
    };
    for (const Expect& x :
         {Expect{"fig2", "[p2,p5]", "[p2,p6]", {"t3"}},
          Expect{"fig6", "[p1,p3]", "[p1,p4]", {"t1"}},
          Expect{"fig7", "[p3,p5,p7]", "[p3,p7,p8]", {"t1", "t4"}},
          Expect{"fig8", "[p1,p3,p6]", "[p1,p4,p6]", {"t1", "t4"}}}) {
      auto e = corpus_entry(x.name);
      LucencyVerdict v = check_lucency(e.net, e.m0);
      CHECK(v.status == LucencyStatus::NotLucent);
      REQUIRE(v.m1.has_value());
      REQUIRE(v.m2.has_value());
      CHECK(to_bracket(*v.m1) == x.m1);
      CHECK(to_bracket(*v.m2) == x.m2);
      CHECK(v.shared_enabled == x.shared);
      CHECK(enabled_transitions(e.net, *v.m1) == x.shared);
      CHECK(enabled_transitions(e.net, *v.m2) == x.shared);
      CHECK_FALSE(v.pump.has_value());
    }
  }

  TEST_CASE("lucent corpus nets") {
    for (const auto& name : {"fig1", "fig3", "fig4", "fig4_wf", "fig5"}) {
      auto e = corpus_entry(name);
      LucencyVerdict v = check_lucency(e.net, e.m0);
      CHECK(v.status == LucencyStatus::Lucent);
      CHECK_FALSE(v.m1.has_value());
      CHECK_FALSE(v.m2.has_value());
    }
  }

  TEST_CASE("the graph overload settles bounded nets the same way") {
    auto e = corpus_entry("fig7");
    ReachabilityGraph g = explore(e.net, e.m0).graph;
    LucencyVerdict v = check_lucency(g);
    CHECK(v.status == LucencyStatus::NotLucent);
    CHECK(to_bracket(*v.m1) == "[p3,p5,p7]");
  }

  TEST_CASE("an unbounded net yields a materialized pumped pair") {
    PetriNet net = pump_net();
    Marking m0{{"p", 1}};
    LucencyVerdict v = check_lucency(net, m0);
    REQUIRE(v.status == LucencyStatus::NotLucentUnbounded);
    REQUIRE(v.pump.has_value());
    REQUIRE(v.m1.has_value());
    REQUIRE(v.m2.has_value());
    CHECK(*v.m1 != *v.m2);
    CHECK(enabled_transitions(net, *v.m1) == enabled_transitions(net, *v.m2));
    CHECK(enabled_transitions(net, *v.m1) == v.shared_enabled);
    // Both markings must sit on the pumped ray.
    std::set<Marking> ray;
    Marking m = fire_sequence(net, m0, v.pump->prefix);
    ray.insert(m);
    for (int k = 0; k < 8; ++k) {
      m = fire_sequence(net, m, v.pump->pump);
      ray.insert(m);
    }
    CHECK(ray.count(*v.m1) == 1);
    CHECK(ray.count(*v.m2) == 1);
  }

  TEST_CASE("a cut-off search is inconclusive") {
    auto e = corpus_entry("fig3");
    ExplorationLimits tight;
    tight.max_states = 3;
    LucencyVerdict v = check_lucency(e.net, e.m0, tight);
    CHECK(v.status == LucencyStatus::Inconclusive);
  }
}

TEST_SUITE("path realization") {
  TEST_CASE("a one-step path on the first example") {
    auto e = corpus_entry("fig1");
    ComponentSet X = p_components(e.net)[0];  // {p1,p4} with {t1,t2,t4}
    Cluster C = cluster_of(e.net, "p1");
    Marking mStart{{"p2", 1}, {"p4", 1}};
    auto seq = realize_path(e.net, e.m0, mStart, X, {"p4", "t4", "p1"}, C);
    REQUIRE(seq.has_value());
    CHECK(fire_sequence(e.net, mStart, *seq) == cluster_marking(C));
    std::vector<std::string> projected =
        project_sequence(*seq, X.transitions);
    CHECK(projected == std::vector<std::string>{"t4"});
  }

  TEST_CASE("a trivial path is realized by the empty sequence") {
    auto e = corpus_entry("fig1");
    ComponentSet X = p_components(e.net)[0];
    Cluster C = cluster_of(e.net, "p1");
    auto seq = realize_path(e.net, e.m0, e.m0, X, {"p1"}, C);
    REQUIRE(seq.has_value());
    CHECK(seq->empty());
  }

  TEST_CASE("transitions outside the component interleave freely") {
    auto e = corpus_entry("fig3");
    ComponentSet X;
    for (const ComponentSet& c : p_components(e.net))
      if (c.places == std::set<std::string>{"p1", "p3", "p5", "p7"}) X = c;
    REQUIRE_FALSE(X.places.empty());
    Cluster C = cluster_of(e.net, "p1");
    auto seq =
        realize_path(e.net, e.m0, e.m0, X, {"p3", "t3", "p7", "t7", "p1"}, C);
    REQUIRE(seq.has_value());
    CHECK(fire_sequence(e.net, e.m0, *seq) == cluster_marking(C));
    CHECK(project_sequence(*seq, X.transitions) ==
          std::vector<std::string>{"t3", "t7"});
    // t7 needs p8 as well, so some transition outside X must have run.
    CHECK(seq->size() > 2);
  }

  TEST_CASE("the home place can be fenced off between start and goal") {
    auto e = corpus_entry("fig2");
    ComponentSet X;
    for (const ComponentSet& c : p_components(e.net))
      if (c.places.count("p5")) X = c;
    REQUIRE(X.places == std::set<std::string>{"p1", "p4", "p5", "p6"});
    Cluster C = cluster_of(e.net, "p1");
    Marking mStart = fire(e.net, e.m0, "t1");  // [p2,p5]
    auto seq = realize_path(e.net, e.m0, mStart, X, {"p5", "t4", "p4", "t6", "p1"},
                            C, true);
    REQUIRE(seq.has_value());
    Marking m = mStart;
    for (std::size_t i = 0; i + 1 < seq->size(); ++i) {
      m = fire(e.net, m, (*seq)[i]);
      CHECK(m.count("p1") == 0);
    }
    CHECK(fire_sequence(e.net, mStart, *seq) == cluster_marking(C));
  }

  TEST_CASE("malformed queries are rejected in a fixed order") {
    auto e = corpus_entry("fig1");
    ComponentSet X = p_components(e.net)[0];
    Cluster C = cluster_of(e.net, "p1");
    ComponentSet fake{ComponentSet::Kind::P, {"p1"}, {"t1"}};
    CHECK(thrown_code([&] {
            realize_path(e.net, e.m0, e.m0, fake, {"p1"}, C);
          }) == ErrorCode::NotAComponent);
    CHECK(thrown_code([&] {
            realize_path(e.net, e.m0, e.m0, X, {"p1", "t1"}, C);
          }) == ErrorCode::ValidationError);
    CHECK(thrown_code([&] {
            realize_path(e.net, e.m0, e.m0, X, {"p4", "t4", "p3"}, C);
          }) == ErrorCode::PathLeavesComponent);
    CHECK(thrown_code([&] {
            realize_path(e.net, e.m0, e.m0, X,
                         {"p1", "t2", "p4", "t4", "p1"}, C);
          }) == ErrorCode::PathNotElementary);
    CHECK(thrown_code([&] {
            realize_path(e.net, e.m0, Marking{{"p2", 1}, {"p4", 1}}, X,
                         {"p1"}, C);
          }) == ErrorCode::StartUnmarked);
    CHECK(thrown_code([&] {
            realize_path(e.net, e.m0, Marking{{"p1", 1}, {"p4", 1}}, X,
                         {"p4", "t4", "p1"}, C);
          }) == ErrorCode::UnknownMarking);
  }
}
