#pragma once

#include <stdexcept>
#include <string>

namespace formlab {

enum class ErrorCode {
  DimensionMismatch,
  DegreeOverflow,
  DegreeUnderflow,
  DegreeMismatch,
  TopDegree,
  DegreeZero,
  BadExponent,
  BadDegree,
  GridMismatch,
  FrequencyVsResolution,
  BoundaryTrace,
  InadmissibleExponents,
  IllConditioned,
  SolverDiverged,
  NotCoercive,
  MaxIterations,
  EvalError,
  ParseError,
  InvalidArgument,
};

inline const char* errorCodeName(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::DegreeUnderflow: return "DegreeUnderflow";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::TopDegree: return "TopDegree";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::BadDegree: return "BadDegree";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::FrequencyVsResolution: return "FrequencyVsResolution";
    case ErrorCode::BoundaryTrace: return "BoundaryTrace";
    case ErrorCode::InadmissibleExponents: return "InadmissibleExponents";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::NotCoercive: return "NotCoercive";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::EvalError: return "EvalError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace formlab
