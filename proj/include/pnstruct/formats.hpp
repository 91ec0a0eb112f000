#pragma once

#include <string>
#include <utility>

#include "pnstruct/net.hpp"

namespace pnstruct {

/// Parses the line-oriented net format:
///
///   net ID            optional, at most once
///   place ID [NAT]    NAT = initial tokens, default 0
///   trans ID
///   arc ID ID         directed, must join a place and a transition
///
/// Lines are UTF-8; `#` starts a comment; ids match
/// [A-Za-z][A-Za-z0-9_]*.  Redeclaring a place, transition, or arc is an
/// error, as is an arc endpoint never declared.  The assembled net runs
/// through the full structural validation; its diagnostics surface as
/// ValidationError.
std::pair<PetriNet, Marking> parse_lpn(const std::string& text);

/// Canonical rendering: the `net` line (when the name is nonempty), then
/// place, trans, and arc declarations, each group sorted by id.  Token
/// counts are emitted only when positive, so parse_lpn(serialize_lpn(n, m))
/// reproduces net and marking exactly.
std::string serialize_lpn(const PetriNet& net, const Marking& m0);

/// Parses a single-page place/transition PNML document.  Initial markings
/// come from initialMarking texts; arc inscriptions other than 1 are
/// rejected (UnsupportedNetType), as are multi-page or multi-net documents.
/// Graphics, names on nodes, and tool-specific annotations are ignored.
std::pair<PetriNet, Marking> parse_pnml(const std::string& xml);

/// Loads a net by file extension: .lpn or .pnml.  An empty net name is
/// replaced by the file stem so that reports carry a usable identifier.
std::pair<PetriNet, Marking> load_net_file(const std::string& path);

}  // namespace pnstruct
