// Structured diagnostics shared by the whole pipeline: a stable error code,
// a human-readable message, and the source position it refers to.
#pragma once

#include <stdexcept>
#include <string>

#include "gpm/ast.hpp"

namespace gpm {

enum class Errc {
  ParseError,
  DuplicateDecl,
  UnknownName,
  UnboundTypeVar,
  UnguardedMu,
  UnboundVar,
  VarUsedTwice,
  VarUnused,
  LatencyMismatch,
  TypeMismatch,
  ClauseContextMismatch,
  DepthMismatch,
  OverlappingPatterns,
  NotAnIsoType,
  InvalidPattern,
  NonClassicalIso,
  StuckMatch,
  ShapeStabilizationFailure,
  IncompatibleError,
  Undefined,
};

const char* errc_name(Errc c);

struct Diag {
  Errc code;
  std::string msg;
  Pos pos;
};

std::string format_diag(const Diag& d);  // "line:col: CODE: message"

// Thrown by any stage of the pipeline; the CLI and tests catch it and render
// the contained record.
class CheckError : public std::runtime_error {
 public:
  explicit CheckError(Diag d) : std::runtime_error(format_diag(d)), diag(std::move(d)) {}
  CheckError(Errc code, std::string msg, Pos pos = {})
      : CheckError(Diag{code, std::move(msg), pos}) {}
  Diag diag;
};

}  // namespace gpm
