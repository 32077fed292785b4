#pragma once

#include <stdexcept>
#include <string>

namespace cdt {

enum class ErrorCode {
  DimensionMismatch,
  AsymmetricInput,
  BoundaryOrOutsideDomain,
  UnsupportedForKind,
  NotInX0,
  NotInYcol,
  NotNegativeDefinite,
  NotGammaSC2,
  NotCritical,
  PreconditionFailed,
  StencilLeftDomain,
  EmptySearchRegion,
  ParseError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::BoundaryOrOutsideDomain: return "BoundaryOrOutsideDomain";
    case ErrorCode::UnsupportedForKind: return "UnsupportedForKind";
    case ErrorCode::NotInX0: return "NotInX0";
    case ErrorCode::NotInYcol: return "NotInYcol";
    case ErrorCode::NotNegativeDefinite: return "NotNegativeDefinite";
    case ErrorCode::NotGammaSC2: return "NotGammaSC2";
    case ErrorCode::NotCritical: return "NotCritical";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::StencilLeftDomain: return "StencilLeftDomain";
    case ErrorCode::EmptySearchRegion: return "EmptySearchRegion";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace cdt
