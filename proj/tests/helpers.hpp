#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "pnstruct/corpus.hpp"
#include "pnstruct/net.hpp"

// Shared plumbing for the test binary: locating the checked-in corpus files
// and inspecting NetError codes without try/catch noise in every test.

inline std::string corpus_file(const std::string& name) {
  return std::string(PNSTRUCT_SOURCE_DIR) + "/corpus/" + name;
}

inline pnstruct::CorpusEntry corpus_entry(const std::string& name) {
  for (auto& e : pnstruct::paper_corpus())
    if (e.name == name) return e;
  throw std::runtime_error("no corpus entry named " + name);
}

/// Runs fn and returns the NetError code it threw, or nothing if it ran
/// through.  Non-NetError exceptions propagate.
template <typename Fn>
std::optional<pnstruct::ErrorCode> thrown_code(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const pnstruct::NetError& e) {
    return e.code();
  }
  return std::nullopt;
}
