#include "gpm/diagnostics.hpp"

#include <sstream>

namespace gpm {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateDecl: return "DuplicateDecl";
    case Errc::UnknownName: return "UnknownName";
    case Errc::UnboundTypeVar: return "UnboundTypeVar";
    case Errc::UnguardedMu: return "UnguardedMu";
    case Errc::UnboundVar: return "UnboundVar";
    case Errc::VarUsedTwice: return "VarUsedTwice";
    case Errc::VarUnused: return "VarUnused";
    case Errc::LatencyMismatch: return "LatencyMismatch";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::ClauseContextMismatch: return "ClauseContextMismatch";
    case Errc::DepthMismatch: return "DepthMismatch";
    case Errc::OverlappingPatterns: return "OverlappingPatterns";
    case Errc::NotAnIsoType: return "NotAnIsoType";
    case Errc::InvalidPattern: return "InvalidPattern";
    case Errc::NonClassicalIso: return "NonClassicalIso";
    case Errc::StuckMatch: return "StuckMatch";
    case Errc::ShapeStabilizationFailure: return "ShapeStabilizationFailure";
    case Errc::IncompatibleError: return "IncompatibleError";
    case Errc::Undefined: return "Undefined";
  }
  return "Unknown";
}

std::string format_diag(const Diag& d) {
  std::ostringstream os;
  os << d.pos.line << ":" << d.pos.col << ": " << errc_name(d.code) << ": " << d.msg;
  return os.str();
}

}  // namespace gpm
