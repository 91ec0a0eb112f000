// Compares the parallel frontier search against the serial reference on a
// family of fork-join nets whose state spaces double with every extra
// branch: one hub place s, a fork transition moving the token onto k
// branch places, one transition per branch, and a join collecting all
// branches back onto s.  Reachable markings: 1 + 2^k.
//
// Usage: pnstruct_bench [max_branches]
//
// Every row also cross-checks that both searches return identical node and
// edge lists; a mismatch aborts with exit code 1.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "pnstruct/net.hpp"
#include "pnstruct/statespace.hpp"

using namespace pnstruct;

namespace {

std::pair<PetriNet, Marking> fork_join_net(int branches) {
  RawNet raw;
  raw.name = "forkjoin_" + std::to_string(branches);
  raw.places.push_back("s");
  raw.transitions.push_back("fork");
  raw.transitions.push_back("join");
  raw.arcs.emplace_back("s", "fork");
  raw.arcs.emplace_back("join", "s");
  for (int i = 1; i <= branches; ++i) {
    const std::string a = "a" + std::to_string(i);
    const std::string b = "b" + std::to_string(i);
    const std::string t = "t" + std::to_string(i);
    raw.places.push_back(a);
    raw.places.push_back(b);
    raw.transitions.push_back(t);
    raw.arcs.emplace_back("fork", a);
    raw.arcs.emplace_back(a, t);
    raw.arcs.emplace_back(t, b);
    raw.arcs.emplace_back(b, "join");
  }
  return {validate_net(raw), Marking{{"s", 1}}};
}

double run_timed(ExplorationOutcome (*search)(const PetriNet&, const Marking&,
                                              const ExplorationLimits&),
                 const PetriNet& net, const Marking& m0,
                 ExplorationOutcome& out) {
  ExplorationLimits limits;
  limits.max_states = 4'000'000;
  limits.max_edges = 64'000'000;
  auto start = std::chrono::steady_clock::now();
  out = search(net, m0, limits);
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

bool identical(const ReachabilityGraph& a, const ReachabilityGraph& b) {
  if (a.nodes != b.nodes || a.edges.size() != b.edges.size()) return false;
  for (std::size_t i = 0; i < a.edges.size(); ++i)
    if (a.edges[i].src != b.edges[i].src ||
        a.edges[i].transition != b.edges[i].transition ||
        a.edges[i].dst != b.edges[i].dst)
      return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int max_branches = 16;
  if (argc > 1) max_branches = std::atoi(argv[1]);
  if (max_branches < 1 || max_branches > 22) {
    std::cerr << "branch count must be between 1 and 22\n";
    return 2;
  }

  std::cout << "branches     states  serial_ms  parallel_ms  speedup\n";
  std::cout.setf(std::ios::fixed);
  std::cout.precision(1);

  for (int k = 8; k <= max_branches; k += 2) {
    auto [net, m0] = fork_join_net(k);
    ExplorationOutcome serial, parallel;
    const double serial_ms = run_timed(&explore_serial, net, m0, serial);
    const double parallel_ms = run_timed(&explore, net, m0, parallel);
    if (serial.verdict != ExploreVerdict::Complete ||
        parallel.verdict != ExploreVerdict::Complete ||
        !identical(serial.graph, parallel.graph)) {
      std::cerr << "searches disagree at " << k << " branches\n";
      return 1;
    }
    std::cout.width(8);
    std::cout << k;
    std::cout.width(11);
    std::cout << serial.graph.nodes.size();
    std::cout.width(11);
    std::cout << serial_ms;
    std::cout.width(13);
    std::cout << parallel_ms;
    std::cout.width(9);
    std::cout.precision(2);
    std::cout << (parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0);
    std::cout.precision(1);
    std::cout << "\n";
  }
  return 0;
}
