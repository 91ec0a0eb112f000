#include "pnstruct/formats.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace pnstruct {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void syntax_error(std::size_t line_no, const std::string& what) {
  raise(ErrorCode::SyntaxError,
        "line " + std::to_string(line_no) + ": " + what);
}

bool parse_nat(const std::string& tok, int& out) {
  if (tok.empty() || tok.size() > 9) return false;
  int value = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

PetriNet validate_wrapped(const RawNet& raw) {
  try {
    return validate_net(raw);
  } catch (const NetError& e) {
    raise(ErrorCode::ValidationError, e.what());
  }
}

}  // namespace

std::pair<PetriNet, Marking> parse_lpn(const std::string& text) {
  RawNet raw;
  Marking m0;
  std::map<std::string, int> tokens;
  std::set<std::string> declared;  // places and transitions
  std::set<std::pair<std::string, std::string>> arcs_seen;
  bool named = false;

  struct PendingArc {
    std::string from, to;
    std::size_t line_no;
  };
  std::vector<PendingArc> pending;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "net") {
      if (tok.size() != 2) syntax_error(line_no, "expected: net ID");
      if (!valid_id(tok[1])) syntax_error(line_no, "bad id '" + tok[1] + "'");
      if (named)
        raise(ErrorCode::DuplicateDecl,
              "line " + std::to_string(line_no) + ": second net line");
      raw.name = tok[1];
      named = true;
    } else if (tok[0] == "place") {
      if (tok.size() != 2 && tok.size() != 3)
        syntax_error(line_no, "expected: place ID [tokens]");
      if (!valid_id(tok[1])) syntax_error(line_no, "bad id '" + tok[1] + "'");
      int count = 0;
      if (tok.size() == 3 && !parse_nat(tok[2], count))
        syntax_error(line_no, "bad token count '" + tok[2] + "'");
      if (!declared.insert(tok[1]).second)
        raise(ErrorCode::DuplicateDecl,
              "line " + std::to_string(line_no) + ": '" + tok[1] +
                  "' already declared");
      raw.places.push_back(tok[1]);
      if (count > 0) tokens[tok[1]] = count;
    } else if (tok[0] == "trans") {
      if (tok.size() != 2) syntax_error(line_no, "expected: trans ID");
      if (!valid_id(tok[1])) syntax_error(line_no, "bad id '" + tok[1] + "'");
      if (!declared.insert(tok[1]).second)
        raise(ErrorCode::DuplicateDecl,
              "line " + std::to_string(line_no) + ": '" + tok[1] +
                  "' already declared");
      raw.transitions.push_back(tok[1]);
    } else if (tok[0] == "arc") {
      if (tok.size() != 3) syntax_error(line_no, "expected: arc FROM TO");
      if (!valid_id(tok[1])) syntax_error(line_no, "bad id '" + tok[1] + "'");
      if (!valid_id(tok[2])) syntax_error(line_no, "bad id '" + tok[2] + "'");
      if (!arcs_seen.insert({tok[1], tok[2]}).second)
        raise(ErrorCode::DuplicateDecl,
              "line " + std::to_string(line_no) + ": arc " + tok[1] + " -> " +
                  tok[2] + " already declared");
      pending.push_back({tok[1], tok[2], line_no});
    } else {
      syntax_error(line_no, "unknown keyword '" + tok[0] + "'");
    }
  }

  // Arcs may reference declarations from any line, so endpoints are only
  // resolved once the whole file is read.
  for (const auto& arc : pending) {
    if (!declared.count(arc.from))
      raise(ErrorCode::UnknownArcEndpoint,
            "line " + std::to_string(arc.line_no) + ": '" + arc.from +
                "' never declared");
    if (!declared.count(arc.to))
      raise(ErrorCode::UnknownArcEndpoint,
            "line " + std::to_string(arc.line_no) + ": '" + arc.to +
                "' never declared");
    raw.arcs.emplace_back(arc.from, arc.to);
  }

  PetriNet net = validate_wrapped(raw);
  for (const auto& [place, count] : tokens) m0[place] = count;
  return {std::move(net), std::move(m0)};
}

std::string serialize_lpn(const PetriNet& net, const Marking& m0) {
  std::string out;
  if (!net.name().empty()) out += "net " + net.name() + "\n";
  for (const auto& p : net.places()) {
    out += "place " + p;
    if (auto it = m0.find(p); it != m0.end() && it->second > 0)
      out += " " + std::to_string(it->second);
    out += "\n";
  }
  for (const auto& t : net.transitions()) out += "trans " + t + "\n";
  for (const auto& [from, to] : net.arcs())
    out += "arc " + from + " " + to + "\n";
  return out;
}

namespace {

namespace pt = boost::property_tree;

const pt::ptree& attrs(const pt::ptree& node) {
  static const pt::ptree empty;
  auto found = node.find("<xmlattr>");
  return found == node.not_found() ? empty : found->second;
}

std::string attr(const pt::ptree& node, const std::string& name) {
  return attrs(node).get<std::string>(name, "");
}

/// Text payload of a PNML annotation child, e.g. <initialMarking><text>1.
std::string annotation_text(const pt::ptree& node, const std::string& child) {
  auto found = node.find(child);
  if (found == node.not_found()) return "";
  return found->second.get<std::string>("text", "");
}

void collect_elements(const pt::ptree& container, bool inside_page,
                      RawNet& raw, Marking& m0) {
  for (const auto& [key, value] : container) {
    if (key == "page") {
      // Top-level pages are dispatched by the caller; anything deeper is
      // outside the supported subset.
      if (inside_page)
        raise(ErrorCode::UnsupportedNetType,
              "nested pages are not supported");
      continue;
    }
    if (key == "place") {
      std::string id = attr(value, "id");
      if (id.empty())
        raise(ErrorCode::UnsupportedNetType, "place without an id");
      raw.places.push_back(id);
      std::string text = annotation_text(value, "initialMarking");
      if (!text.empty()) {
        int count = 0;
        if (!parse_nat(text, count))
          raise(ErrorCode::UnsupportedNetType,
                "initial marking of '" + id + "' is not a natural number");
        if (count > 0) m0[id] = count;
      }
    } else if (key == "transition") {
      std::string id = attr(value, "id");
      if (id.empty())
        raise(ErrorCode::UnsupportedNetType, "transition without an id");
      raw.transitions.push_back(id);
    } else if (key == "arc") {
      std::string source = attr(value, "source");
      std::string target = attr(value, "target");
      if (source.empty() || target.empty())
        raise(ErrorCode::UnsupportedNetType,
              "arc without source and target");
      std::string weight = annotation_text(value, "inscription");
      if (!weight.empty() && weight != "1")
        raise(ErrorCode::UnsupportedNetType,
              "arc weight " + weight + " is not supported");
      raw.arcs.emplace_back(source, target);
    }
    // Everything else (name, graphics, toolspecific, ...) is ignored.
  }
}

}  // namespace

std::pair<PetriNet, Marking> parse_pnml(const std::string& xml) {
  pt::ptree doc;
  try {
    std::istringstream in(xml);
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    raise(ErrorCode::MalformedXml, e.what());
  }

  auto pnml = doc.find("pnml");
  if (pnml == doc.not_found())
    raise(ErrorCode::MalformedXml, "no pnml root element");

  const pt::ptree* net_node = nullptr;
  for (const auto& [key, value] : pnml->second) {
    if (key != "net") continue;
    if (net_node)
      raise(ErrorCode::UnsupportedNetType,
            "documents with several nets are not supported");
    net_node = &value;
  }
  if (!net_node) raise(ErrorCode::MalformedXml, "no net element");

  std::string type = attr(*net_node, "type");
  if (!type.empty() &&
      type != "http://www.pnml.org/version-2009/grammar/ptnet")
    raise(ErrorCode::UnsupportedNetType, "net type " + type);

  RawNet raw;
  Marking m0;
  raw.name = attr(*net_node, "id");

  const pt::ptree* page = nullptr;
  for (const auto& [key, value] : *net_node) {
    if (key != "page") continue;
    if (page)
      raise(ErrorCode::UnsupportedNetType,
            "multi-page documents are not supported");
    page = &value;
  }
  collect_elements(*net_node, false, raw, m0);
  if (page) collect_elements(*page, true, raw, m0);

  PetriNet net = validate_wrapped(raw);
  return {std::move(net), std::move(m0)};
}

std::pair<PetriNet, Marking> load_net_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    raise(ErrorCode::ValidationError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();

  std::filesystem::path p(path);
  std::string ext = p.extension().string();
  std::pair<PetriNet, Marking> result;
  if (ext == ".lpn")
    result = parse_lpn(buffer.str());
  else if (ext == ".pnml")
    result = parse_pnml(buffer.str());
  else
    raise(ErrorCode::ValidationError,
          "unsupported file extension '" + ext + "'");

  if (result.first.name().empty()) {
    RawNet raw;
    raw.name = p.stem().string();
    raw.places = result.first.places();
    raw.transitions = result.first.transitions();
    raw.arcs = result.first.arcs();
    result.first = validate_net(raw);
  }
  return result;
}

}  // namespace pnstruct
