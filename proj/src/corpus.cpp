#include "pnstruct/corpus.hpp"

#include <utility>

namespace pnstruct {

namespace {

struct NetDef {
  const char* name;
  std::vector<std::string> places;
  std::vector<std::string> transitions;
  std::vector<std::pair<std::string, std::string>> arcs;
  std::vector<std::pair<std::string, int>> tokens;
};

CorpusEntry make_entry(NetDef def) {
  RawNet raw;
  raw.name = def.name;
  raw.places = std::move(def.places);
  raw.transitions = std::move(def.transitions);
  raw.arcs = std::move(def.arcs);
  CorpusEntry entry;
  entry.name = def.name;
  entry.net = validate_net(raw);
  for (const auto& [place, count] : def.tokens) entry.m0[place] = count;
  return entry;
}

}  // namespace

std::vector<CorpusEntry> paper_corpus() {
  std::vector<CorpusEntry> out;

  out.push_back(make_entry({
      "fig1",
      {"p1", "p2", "p3", "p4"},
      {"t1", "t2", "t3", "t4"},
      {{"p1", "t1"}, {"p2", "t1"}, {"t1", "p1"}, {"t1", "p3"},
       {"p1", "t2"}, {"p2", "t2"}, {"t2", "p3"}, {"t2", "p4"},
       {"p3", "t3"}, {"t3", "p2"},
       {"p4", "t4"}, {"t4", "p1"}},
      {{"p1", 1}, {"p2", 1}},
  }));

  out.push_back(make_entry({
      "fig2",
      {"p1", "p2", "p3", "p4", "p5", "p6"},
      {"t1", "t2", "t3", "t4", "t5", "t6"},
      {{"p1", "t1"}, {"t1", "p2"}, {"t1", "p5"},
       {"p1", "t2"}, {"t2", "p2"}, {"t2", "p6"},
       {"p2", "t3"}, {"t3", "p3"},
       {"p3", "t4"}, {"p5", "t4"}, {"t4", "p4"},
       {"p3", "t5"}, {"p6", "t5"}, {"t5", "p4"},
       {"p4", "t6"}, {"t6", "p1"}},
      {{"p1", 1}},
  }));

  out.push_back(make_entry({
      "fig3",
      {"p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8"},
      {"t1", "t2", "t3", "t4", "t5", "t6", "t7"},
      {{"p1", "t1"}, {"p2", "t1"}, {"t1", "p3"}, {"t1", "p4"},
       {"p1", "t2"}, {"p2", "t2"}, {"t2", "p5"}, {"t2", "p6"},
       {"p3", "t3"}, {"t3", "p7"},
       {"p4", "t4"}, {"t4", "p8"},
       {"p5", "t5"}, {"t5", "p7"},
       {"p6", "t6"}, {"t6", "p8"},
       {"p7", "t7"}, {"p8", "t7"}, {"t7", "p1"}, {"t7", "p2"}},
      {{"p3", 1}, {"p6", 1}},
  }));

  NetDef fig4{
      "fig4",
      {"end", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8", "p9", "start"},
      {"t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8", "t_star"},
      {{"start", "t0"}, {"t0", "p1"}, {"t0", "p2"},
       {"p1", "t1"}, {"p2", "t1"}, {"t1", "p3"}, {"t1", "p4"}, {"t1", "p5"},
       {"p4", "t2"}, {"t2", "p6"},
       {"p4", "t3"}, {"t3", "p6"},
       {"p5", "t4"}, {"t4", "p7"},
       {"p7", "t5"}, {"t5", "p8"},
       {"p7", "t6"}, {"t6", "p8"},
       {"p8", "t7"}, {"t7", "p9"},
       {"p3", "t8"}, {"p6", "t8"}, {"p9", "t8"}, {"t8", "end"},
       {"end", "t_star"}, {"t_star", "start"}},
      {{"start", 1}},
  };
  out.push_back(make_entry(fig4));

  NetDef fig4_wf = fig4;
  fig4_wf.name = "fig4_wf";
  fig4_wf.transitions.pop_back();
  fig4_wf.arcs.resize(fig4_wf.arcs.size() - 2);
  out.push_back(make_entry(std::move(fig4_wf)));

  out.push_back(make_entry({
      "fig5",
      {"p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8", "p9"},
      {"t1", "t2", "t3", "t4", "t5", "t6"},
      {{"p1", "t1"}, {"t1", "p3"}, {"t1", "p9"},
       {"p2", "t2"}, {"t2", "p4"}, {"t2", "p6"},
       {"p3", "t3"}, {"t3", "p5"},
       {"p4", "t4"}, {"p5", "t4"}, {"t4", "p7"}, {"t4", "p8"},
       {"p8", "t5"}, {"p9", "t5"}, {"t5", "p2"},
       {"p6", "t6"}, {"p7", "t6"}, {"t6", "p1"}},
      {{"p1", 1}, {"p8", 1}},
  }));

  out.push_back(make_entry({
      "fig6",
      {"p1", "p2", "p3", "p4", "p5"},
      {"t1", "t2", "t3", "t4"},
      {{"p1", "t1"}, {"t1", "p5"},
       {"p2", "t2"}, {"p3", "t2"}, {"t2", "p1"}, {"t2", "p4"},
       {"p2", "t3"}, {"p4", "t3"}, {"t3", "p1"}, {"t3", "p3"},
       {"p5", "t4"}, {"t4", "p2"}},
      {{"p1", 1}, {"p3", 1}},
  }));

  out.push_back(make_entry({
      "fig7",
      {"p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8"},
      {"t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8"},
      {{"p3", "t1"}, {"t1", "p2"},
       {"p1", "t2"}, {"t2", "p3"},
       {"p2", "t3"}, {"p5", "t3"}, {"t3", "p1"}, {"t3", "p5"},
       {"p7", "t4"}, {"t4", "p4"},
       {"p2", "t5"}, {"p5", "t5"}, {"t5", "p3"}, {"t5", "p8"},
       {"p4", "t6"}, {"p8", "t6"}, {"t6", "p4"}, {"t6", "p6"},
       {"p4", "t7"}, {"p8", "t7"}, {"t7", "p5"}, {"t7", "p7"},
       {"p6", "t8"}, {"t8", "p5"}},
      {{"p3", 1}, {"p7", 1}, {"p8", 1}},
  }));

  out.push_back(make_entry({
      "fig8",
      {"p1", "p2", "p3", "p4", "p5", "p6"},
      {"t1", "t2", "t3", "t4"},
      {{"p1", "t1"}, {"t1", "p2"},
       {"p2", "t2"}, {"p3", "t2"}, {"t2", "p1"}, {"t2", "p4"},
       {"p4", "t3"}, {"p5", "t3"}, {"t3", "p3"}, {"t3", "p6"},
       {"p6", "t4"}, {"t4", "p5"}},
      {{"p1", 1}, {"p3", 1}, {"p5", 1}},
  }));

  return out;
}

namespace {

enum class BlockOp { Act, Sequence, Choice, Parallel, Loop };

struct Block {
  BlockOp op = BlockOp::Act;
  int left = -1;
  int right = -1;
};

/// Builds a block tree with exactly `leaves` Act leaves, drawing operator
/// and split choices from the generator.  Returns the index of the root in
/// `tree`.
int build_tree(std::vector<Block>& tree, SplitMix64& rng, int leaves,
               const GenParams& params) {
  if (leaves == 1) {
    tree.push_back({BlockOp::Act, -1, -1});
    return static_cast<int>(tree.size()) - 1;
  }
  const int total = params.weight_sequence + params.weight_choice +
                    params.weight_parallel + params.weight_loop;
  auto draw = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
  BlockOp op;
  if (draw < params.weight_sequence) {
    op = BlockOp::Sequence;
  } else if (draw < params.weight_sequence + params.weight_choice) {
    op = BlockOp::Choice;
  } else if (draw <
             params.weight_sequence + params.weight_choice + params.weight_parallel) {
    op = BlockOp::Parallel;
  } else {
    op = BlockOp::Loop;
  }
  const int first = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(leaves - 1)));
  const int left = build_tree(tree, rng, first, params);
  const int right = build_tree(tree, rng, leaves - first, params);
  tree.push_back({op, left, right});
  return static_cast<int>(tree.size()) - 1;
}

class WfBuilder {
 public:
  explicit WfBuilder(const std::vector<Block>& tree) : tree_(tree) {}

  RawNet compile(int root, const std::string& name) {
    raw_.name = name;
    raw_.places = {"i", "o"};
    emit(root, "i", "o");
    return std::move(raw_);
  }

 private:
  std::string fresh_place() {
    std::string id = "p" + std::to_string(++place_count_);
    raw_.places.push_back(id);
    return id;
  }

  std::string fresh_trans() {
    std::string id = "t" + std::to_string(++trans_count_);
    raw_.transitions.push_back(id);
    return id;
  }

  void arc(const std::string& from, const std::string& to) {
    raw_.arcs.emplace_back(from, to);
  }

  void emit(int node, const std::string& entry, const std::string& exit) {
    const Block& b = tree_[static_cast<std::size_t>(node)];
    switch (b.op) {
      case BlockOp::Act: {
        const std::string t = fresh_trans();
        arc(entry, t);
        arc(t, exit);
        break;
      }
      case BlockOp::Sequence: {
        const std::string mid = fresh_place();
        emit(b.left, entry, mid);
        emit(b.right, mid, exit);
        break;
      }
      case BlockOp::Choice: {
        emit(b.left, entry, exit);
        emit(b.right, entry, exit);
        break;
      }
      case BlockOp::Parallel: {
        const std::string split = fresh_trans();
        const std::string a_in = fresh_place();
        const std::string a_out = fresh_place();
        const std::string b_in = fresh_place();
        const std::string b_out = fresh_place();
        emit(b.left, a_in, a_out);
        emit(b.right, b_in, b_out);
        const std::string join = fresh_trans();
        arc(entry, split);
        arc(split, a_in);
        arc(split, b_in);
        arc(a_out, join);
        arc(b_out, join);
        arc(join, exit);
        break;
      }
      case BlockOp::Loop: {
        const std::string t_enter = fresh_trans();
        const std::string body_in = fresh_place();
        const std::string decision = fresh_place();
        const std::string t_exit = fresh_trans();
        const std::string t_redo = fresh_trans();
        const std::string redo_in = fresh_place();
        arc(entry, t_enter);
        arc(t_enter, body_in);
        arc(decision, t_exit);
        arc(t_exit, exit);
        arc(decision, t_redo);
        arc(t_redo, redo_in);
        emit(b.left, body_in, decision);
        emit(b.right, redo_in, body_in);
        break;
      }
    }
  }

  const std::vector<Block>& tree_;
  RawNet raw_;
  int place_count_ = 0;
  int trans_count_ = 0;
};

}  // namespace

std::pair<PetriNet, Marking> gen_block_wf(const GenParams& params) {
  if (params.size < 1 || params.size > 64) {
    raise(ErrorCode::SizeOutOfRange,
          "workflow generator size must be between 1 and 64, got " +
              std::to_string(params.size));
  }
  if (params.weight_sequence < 0 || params.weight_choice < 0 ||
      params.weight_parallel < 0 || params.weight_loop < 0 ||
      params.weight_sequence + params.weight_choice + params.weight_parallel +
              params.weight_loop <=
          0) {
    raise(ErrorCode::ValidationError, "operator weights must be non-negative and not all zero");
  }
  SplitMix64 rng(params.seed);
  std::vector<Block> tree;
  const int root = build_tree(tree, rng, params.size, params);
  WfBuilder builder(tree);
  RawNet raw = builder.compile(
      root, "wf_s" + std::to_string(params.seed) + "_n" + std::to_string(params.size));
  Marking m0;
  m0["i"] = 1;
  return {validate_net(raw), std::move(m0)};
}

std::pair<PetriNet, Marking> gen_small_random(const GenParams& params) {
  if (params.size < 2 || params.size > 12) {
    raise(ErrorCode::SizeOutOfRange,
          "random generator size must be between 2 and 12, got " +
              std::to_string(params.size));
  }
  SplitMix64 rng(params.seed);
  const std::string name = "rnd_s" + std::to_string(params.seed);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const int place_count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.size - 1)));
    const int trans_count = params.size - place_count;
    RawNet raw;
    raw.name = name;
    for (int p = 1; p <= place_count; ++p) raw.places.push_back("p" + std::to_string(p));
    for (int t = 1; t <= trans_count; ++t) raw.transitions.push_back("t" + std::to_string(t));
    for (const auto& place : raw.places) {
      for (const auto& trans : raw.transitions) {
        if (rng.below(3) == 0) raw.arcs.emplace_back(place, trans);
        if (rng.below(3) == 0) raw.arcs.emplace_back(trans, place);
      }
    }
    Marking m0;
    for (const auto& place : raw.places) {
      const int tokens = static_cast<int>(rng.below(3));
      if (tokens > 0) m0[place] = tokens;
    }
    try {
      PetriNet net = validate_net(raw);
      return {std::move(net), std::move(m0)};
    } catch (const NetError&) {
    }
  }
  raise(ErrorCode::ValidationError, "random net generation did not converge for seed " +
                                        std::to_string(params.seed));
}

}  // namespace pnstruct
