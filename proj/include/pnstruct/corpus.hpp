#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pnstruct/net.hpp"

namespace pnstruct {

struct CorpusEntry {
  std::string name;
  PetriNet net;
  Marking m0;
};

/// The built-in example nets fig1 through fig8 plus fig4_wf (the workflow
/// variant of fig4 without its closing transition), each with its initial
/// marking.  These mirror the files shipped under corpus/.
std::vector<CorpusEntry> paper_corpus();

struct GenParams {
  std::uint64_t seed = 1;
  int size = 8;
  /// Relative odds of the composition operators when building workflow
  /// nets; non-negative and not all zero.
  int weight_sequence = 3;
  int weight_choice = 2;
  int weight_parallel = 2;
  int weight_loop = 1;
};

/// Self-contained 64-bit generator (the splitmix64 mixing function), used
/// by both net generators so outputs are bit-identical across platforms:
/// state advances by 0x9e3779b97f4a7c15, and each draw xor-shifts and
/// multiplies by 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform-enough draw in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

/// Builds a free-choice workflow net with `size` tasks by recursive block
/// composition: sequence, exclusive choice (split at a place), parallel
/// (split and join at transitions), and structured loops whose repeat/exit
/// decision sits at a dedicated place.  Every output is sound by
/// construction and a pure function of the params.  Source place is `i`,
/// sink is `o`; the marking puts one token on `i`.
std::pair<PetriNet, Marking> gen_block_wf(const GenParams& params);

/// Random connected bipartite net with at most 12 nodes total and a random
/// initial marking of 0 to 2 tokens per place.  No behavioural guarantees;
/// resamples until the structural validation passes, so the result is
/// deterministic in the seed.
std::pair<PetriNet, Marking> gen_small_random(const GenParams& params);

}  // namespace pnstruct
