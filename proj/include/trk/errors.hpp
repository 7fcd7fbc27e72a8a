#pragma once

#include <stdexcept>
#include <string>

namespace trk {

// Error taxonomy. Every failure carries a kind tag plus a human-readable
// detail string naming the offending object (cell id, generator index, ...).
enum class ErrKind {
  MalformedElement,
  ForeignElement,
  DepthExceeded,
  UnsupportedOracle,
  NotAFreeDecomposition,
  BadCertificate,
  ResolutionObstruction,
  SlendernessViolation,
  BadMarking,
  InvariantViolation,
  ParseError,
  DanglingReference,
  Internal,
};

inline const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::MalformedElement: return "MalformedElement";
    case ErrKind::ForeignElement: return "ForeignElement";
    case ErrKind::DepthExceeded: return "DepthExceeded";
    case ErrKind::UnsupportedOracle: return "UnsupportedOracle";
    case ErrKind::NotAFreeDecomposition: return "NotAFreeDecomposition";
    case ErrKind::BadCertificate: return "BadCertificate";
    case ErrKind::ResolutionObstruction: return "ResolutionObstruction";
    case ErrKind::SlendernessViolation: return "SlendernessViolation";
    case ErrKind::BadMarking: return "BadMarking";
    case ErrKind::InvariantViolation: return "InvariantViolation";
    case ErrKind::ParseError: return "ParseError";
    case ErrKind::DanglingReference: return "DanglingReference";
    case ErrKind::Internal: return "Internal";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, std::string detail)
      : std::runtime_error(std::string(err_kind_name(kind)) + ": " + detail),
        kind_(kind),
        detail_(std::move(detail)) {}

  ErrKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrKind k, const std::string& detail) {
  throw Error(k, detail);
}

}  // namespace trk
