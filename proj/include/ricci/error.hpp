#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

/// Machine-checkable reason attached to every library exception.
enum class Errc {
  NonPositiveLength,
  SelfLoop,
  DuplicateEdge,
  DisconnectedGraph,
  NotATree,
  UnknownNode,
  SameNode,
  IsolatedNode,
  Unbalanced,
  CannotConnect,
  SizeMismatch,
  UnknownKind,
  AllEdgesCollapsed,
  InvalidArgument,
  IoError,
};

inline const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::NonPositiveLength: return "NonPositiveLength";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::NotATree: return "NotATree";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::SameNode: return "SameNode";
    case Errc::IsolatedNode: return "IsolatedNode";
    case Errc::Unbalanced: return "Unbalanced";
    case Errc::CannotConnect: return "CannotConnect";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::UnknownKind: return "UnknownKind";
    case Errc::AllEdgesCollapsed: return "AllEdgesCollapsed";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ricci
