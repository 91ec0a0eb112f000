#include "pnstruct/net.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace pnstruct {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyPlaces: return "EmptyPlaces";
    case ErrorCode::EmptyTransitions: return "EmptyTransitions";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::DanglingArcEndpoint: return "DanglingArcEndpoint";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::PlaceToPlaceArc: return "PlaceToPlaceArc";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownPlace: return "UnknownPlace";
    case ErrorCode::UnknownTransition: return "UnknownTransition";
    case ErrorCode::MarkingPlaceUnknown: return "MarkingPlaceUnknown";
    case ErrorCode::NotEnabled: return "NotEnabled";
    case ErrorCode::NotEnabledAtStep: return "NotEnabledAtStep";
    case ErrorCode::EmptyNodeSet: return "EmptyNodeSet";
    case ErrorCode::UnknownMarking: return "UnknownMarking";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::ComponentLimitExceeded: return "ComponentLimitExceeded";
    case ErrorCode::EmptyCover: return "EmptyCover";
    case ErrorCode::NotAComponent: return "NotAComponent";
    case ErrorCode::NotAWorkflowNet: return "NotAWorkflowNet";
    case ErrorCode::IdCollisionOnTStar: return "IdCollisionOnTStar";
    case ErrorCode::UnknownCluster: return "UnknownCluster";
    case ErrorCode::UnboundedNet: return "UnboundedNet";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::PathNotElementary: return "PathNotElementary";
    case ErrorCode::PathLeavesComponent: return "PathLeavesComponent";
    case ErrorCode::StartUnmarked: return "StartUnmarked";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateDecl: return "DuplicateDecl";
    case ErrorCode::UnknownArcEndpoint: return "UnknownArcEndpoint";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::UnsupportedNetType: return "UnsupportedNetType";
    case ErrorCode::SizeOutOfRange: return "SizeOutOfRange";
  }
  return "UnknownError";
}

NetError::NetError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

void raise(ErrorCode code, const std::string& detail) {
  throw NetError(code, detail);
}

std::string to_bracket(const Marking& m) {
  std::string out = "[";
  bool first = true;
  for (const auto& [place, count] : m) {
    for (int i = 0; i < count; ++i) {
      if (!first) out += ",";
      out += place;
      first = false;
    }
  }
  out += "]";
  return out;
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(id[0]))) return false;
  return std::all_of(id.begin() + 1, id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool PetriNet::has_place(const std::string& id) const {
  return place_idx_.count(id) != 0;
}

bool PetriNet::has_transition(const std::string& id) const {
  return transition_idx_.count(id) != 0;
}

bool PetriNet::has_node(const std::string& id) const {
  return has_place(id) || has_transition(id);
}

int PetriNet::place_index(const std::string& id) const {
  auto it = place_idx_.find(id);
  return it == place_idx_.end() ? -1 : it->second;
}

int PetriNet::transition_index(const std::string& id) const {
  auto it = transition_idx_.find(id);
  return it == transition_idx_.end() ? -1 : it->second;
}

std::vector<std::pair<std::string, std::string>> PetriNet::arcs() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(arc_count_);
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    for (int p : t_pre_[t]) out.emplace_back(places_[p], transitions_[t]);
    for (int p : t_post_[t]) out.emplace_back(transitions_[t], places_[p]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PetriNet validate_net(const RawNet& raw) {
  if (raw.places.empty()) raise(ErrorCode::EmptyPlaces, "net has no places");
  if (raw.transitions.empty())
    raise(ErrorCode::EmptyTransitions, "net has no transitions");

  PetriNet net;
  net.name_ = raw.name;
  net.places_ = raw.places;
  net.transitions_ = raw.transitions;
  std::sort(net.places_.begin(), net.places_.end());
  std::sort(net.transitions_.begin(), net.transitions_.end());

  auto check_ids = [](const std::vector<std::string>& ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!valid_id(ids[i]))
        raise(ErrorCode::ValidationError, "invalid id '" + ids[i] + "'");
      if (i > 0 && ids[i] == ids[i - 1])
        raise(ErrorCode::DuplicateId, "'" + ids[i] + "' declared twice");
    }
  };
  check_ids(net.places_);
  check_ids(net.transitions_);

  for (std::size_t i = 0; i < net.places_.size(); ++i)
    net.place_idx_[net.places_[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < net.transitions_.size(); ++i) {
    if (net.place_idx_.count(net.transitions_[i]))
      raise(ErrorCode::DuplicateId,
            "'" + net.transitions_[i] + "' is both a place and a transition");
    net.transition_idx_[net.transitions_[i]] = static_cast<int>(i);
  }

  net.t_pre_.resize(net.transitions_.size());
  net.t_post_.resize(net.transitions_.size());
  net.p_pre_.resize(net.places_.size());
  net.p_post_.resize(net.places_.size());

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& [from, to] : raw.arcs) {
    bool from_p = net.place_idx_.count(from) != 0;
    bool from_t = net.transition_idx_.count(from) != 0;
    bool to_p = net.place_idx_.count(to) != 0;
    bool to_t = net.transition_idx_.count(to) != 0;
    if ((!from_p && !from_t) || (!to_p && !to_t))
      raise(ErrorCode::DanglingArcEndpoint,
            "arc " + from + " -> " + to + " uses an undeclared node");
    if (from_p == to_p)
      raise(ErrorCode::PlaceToPlaceArc,
            "arc " + from + " -> " + to + " joins two nodes of the same kind");
    if (!seen.insert({from, to}).second)
      raise(ErrorCode::DuplicateId, "arc " + from + " -> " + to + " repeated");
    if (from_p) {
      int p = net.place_idx_[from], t = net.transition_idx_[to];
      net.t_pre_[t].push_back(p);
      net.p_post_[p].push_back(t);
    } else {
      int t = net.transition_idx_[from], p = net.place_idx_[to];
      net.t_post_[t].push_back(p);
      net.p_pre_[p].push_back(t);
    }
  }
  net.arc_count_ = seen.size();

  for (auto& v : net.t_pre_) std::sort(v.begin(), v.end());
  for (auto& v : net.t_post_) std::sort(v.begin(), v.end());
  for (auto& v : net.p_pre_) std::sort(v.begin(), v.end());
  for (auto& v : net.p_post_) std::sort(v.begin(), v.end());

  // Connectedness of the underlying undirected graph.  Nodes are numbered
  // places first, then transitions.
  std::size_t n = net.places_.size() + net.transitions_.size();
  std::vector<char> reached(n, 0);
  std::deque<std::size_t> queue{0};
  reached[0] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    auto visit = [&](std::size_t w) {
      if (!reached[w]) {
        reached[w] = 1;
        ++count;
        queue.push_back(w);
      }
    };
    if (v < net.places_.size()) {
      for (int t : net.p_pre_[v]) visit(net.places_.size() + t);
      for (int t : net.p_post_[v]) visit(net.places_.size() + t);
    } else {
      std::size_t t = v - net.places_.size();
      for (int p : net.t_pre_[t]) visit(p);
      for (int p : net.t_post_[t]) visit(p);
    }
  }
  if (count != n)
    raise(ErrorCode::Disconnected, "net graph is not weakly connected");

  return net;
}

std::set<std::string> adjacency(const PetriNet& net, const std::string& node,
                                Direction dir) {
  std::set<std::string> out;
  if (int p = net.place_index(node); p >= 0) {
    const auto& ts =
        dir == Direction::pre ? net.pre_transitions(p) : net.post_transitions(p);
    for (int t : ts) out.insert(net.transitions()[t]);
    return out;
  }
  if (int t = net.transition_index(node); t >= 0) {
    const auto& ps = dir == Direction::pre ? net.pre_places(t) : net.post_places(t);
    for (int p : ps) out.insert(net.places()[p]);
    return out;
  }
  raise(ErrorCode::UnknownNode, "no node named '" + node + "'");
}

static void check_marking(const PetriNet& net, const Marking& m) {
  for (const auto& [place, count] : m) {
    if (!net.has_place(place))
      raise(ErrorCode::MarkingPlaceUnknown,
            "marking refers to unknown place '" + place + "'");
    if (count < 0)
      raise(ErrorCode::ValidationError,
            "negative token count on '" + place + "'");
  }
}

static bool enabled_at(const PetriNet& net, const Marking& m, int t) {
  for (int p : net.pre_places(t)) {
    auto it = m.find(net.places()[p]);
    if (it == m.end() || it->second < 1) return false;
  }
  return true;
}

std::set<std::string> enabled_transitions(const PetriNet& net,
                                          const Marking& m) {
  check_marking(net, m);
  std::set<std::string> out;
  for (std::size_t t = 0; t < net.transition_count(); ++t)
    if (enabled_at(net, m, static_cast<int>(t)))
      out.insert(net.transitions()[t]);
  return out;
}

Marking fire(const PetriNet& net, const Marking& m, const std::string& t) {
  check_marking(net, m);
  int ti = net.transition_index(t);
  if (ti < 0)
    raise(ErrorCode::UnknownTransition, "no transition named '" + t + "'");
  if (!enabled_at(net, m, ti))
    raise(ErrorCode::NotEnabled, "'" + t + "' is not enabled at " + to_bracket(m));
  Marking next = m;
  for (int p : net.pre_places(ti)) {
    auto it = next.find(net.places()[p]);
    if (--it->second == 0) next.erase(it);
  }
  for (int p : net.post_places(ti)) ++next[net.places()[p]];
  return next;
}

Marking fire_sequence(const PetriNet& net, const Marking& m,
                      const std::vector<std::string>& seq) {
  Marking cur = m;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    try {
      cur = fire(net, cur, seq[i]);
    } catch (const NetError& e) {
      if (e.code() == ErrorCode::NotEnabled)
        raise(ErrorCode::NotEnabledAtStep,
              "step " + std::to_string(i) + " ('" + seq[i] + "') not enabled");
      throw;
    }
  }
  return cur;
}

std::vector<Cluster> clusters(const PetriNet& net) {
  std::size_t np = net.place_count();
  std::size_t n = np + net.transition_count();
  std::vector<int> comp(n, -1);
  int next_comp = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    int c = next_comp++;
    std::deque<std::size_t> work{start};
    comp[start] = c;
    while (!work.empty()) {
      std::size_t v = work.front();
      work.pop_front();
      auto visit = [&](std::size_t w) {
        if (comp[w] < 0) {
          comp[w] = c;
          work.push_back(w);
        }
      };
      if (v < np) {
        // A place drags in every transition that consumes from it.
        for (int t : net.post_transitions(v)) visit(np + t);
      } else {
        // A transition drags in every one of its input places.
        for (int p : net.pre_places(v - np)) visit(p);
      }
    }
  }
  std::vector<Cluster> out(next_comp);
  for (std::size_t p = 0; p < np; ++p)
    out[comp[p]].places.insert(net.places()[p]);
  for (std::size_t t = 0; t < net.transition_count(); ++t)
    out[comp[np + t]].transitions.insert(net.transitions()[t]);
  std::sort(out.begin(), out.end());
  return out;
}

Cluster cluster_of(const PetriNet& net, const std::string& node) {
  if (!net.has_node(node))
    raise(ErrorCode::UnknownNode, "no node named '" + node + "'");
  for (const auto& c : clusters(net))
    if (c.places.count(node) || c.transitions.count(node)) return c;
  raise(ErrorCode::UnknownNode, "no cluster for '" + node + "'");
}

Marking cluster_marking(const Cluster& c) {
  Marking m;
  for (const auto& p : c.places) m[p] = 1;
  return m;
}

Marking project_marking(const Marking& m, const std::set<std::string>& X) {
  Marking out;
  for (const auto& [place, count] : m)
    if (X.count(place)) out[place] = count;
  return out;
}

std::vector<std::string> project_sequence(const std::vector<std::string>& seq,
                                          const std::set<std::string>& A) {
  std::vector<std::string> out;
  for (const auto& step : seq)
    if (A.count(step)) out.push_back(step);
  return out;
}

SubnetFragment subnet(const PetriNet& net, const std::set<std::string>& X) {
  if (X.empty()) raise(ErrorCode::EmptyNodeSet, "subnet of the empty set");
  SubnetFragment frag;
  for (const auto& id : X) {
    if (net.has_place(id))
      frag.places.push_back(id);
    else if (net.has_transition(id))
      frag.transitions.push_back(id);
    else
      raise(ErrorCode::UnknownNode, "no node named '" + id + "'");
  }
  std::sort(frag.places.begin(), frag.places.end());
  std::sort(frag.transitions.begin(), frag.transitions.end());
  for (const auto& t : frag.transitions) {
    int ti = net.transition_index(t);
    for (int p : net.pre_places(ti))
      if (X.count(net.places()[p])) frag.arcs.emplace_back(net.places()[p], t);
    for (int p : net.post_places(ti))
      if (X.count(net.places()[p])) frag.arcs.emplace_back(t, net.places()[p]);
  }
  std::sort(frag.arcs.begin(), frag.arcs.end());
  return frag;
}

bool fragment_strongly_connected(const SubnetFragment& frag) {
  std::vector<std::string> nodes = frag.places;
  nodes.insert(nodes.end(), frag.transitions.begin(), frag.transitions.end());
  std::sort(nodes.begin(), nodes.end());
  if (nodes.empty()) return false;
  if (nodes.size() == 1) return true;

  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < nodes.size(); ++i) idx[nodes[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> fwd(nodes.size()), rev(nodes.size());
  for (const auto& [from, to] : frag.arcs) {
    fwd[idx[from]].push_back(idx[to]);
    rev[idx[to]].push_back(idx[from]);
  }
  auto full_reach = [&](const std::vector<std::vector<int>>& g) {
    std::vector<char> seen(nodes.size(), 0);
    std::deque<int> q{0};
    seen[0] = 1;
    std::size_t cnt = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : g[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++cnt;
          q.push_back(w);
        }
    }
    return cnt == nodes.size();
  };
  return full_reach(fwd) && full_reach(rev);
}

}  // namespace pnstruct
