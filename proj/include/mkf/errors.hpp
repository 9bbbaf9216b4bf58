#pragma once

#include <stdexcept>
#include <string>

namespace mkf {

enum class Err {
  ZeroPoint,
  AntipodalPoint,
  InvalidOffset,
  OffsetOverflow,
  EmptySet,
  EmptySlice,
  EmptyRange,
  NonSpherical,
  TubeViolation,
  SelfIntersection,
  AntipodalOrEqual,
  DegenerateGeodesic,
  DegeneratePlane,
  NoSimpleWindow,
  GlueMismatch,
  Disconnected,
  DisconnectedLink,
  GenericityFailure,
  OpenCurve,
  TooManyCrossings,
  ConfigInvalid,
  MissingArtifact,
  UnknownFormat,
  IoError,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::ZeroPoint: return "ZeroPoint";
    case Err::AntipodalPoint: return "AntipodalPoint";
    case Err::InvalidOffset: return "InvalidOffset";
    case Err::OffsetOverflow: return "OffsetOverflow";
    case Err::EmptySet: return "EmptySet";
    case Err::EmptySlice: return "EmptySlice";
    case Err::EmptyRange: return "EmptyRange";
    case Err::NonSpherical: return "NonSpherical";
    case Err::TubeViolation: return "TubeViolation";
    case Err::SelfIntersection: return "SelfIntersection";
    case Err::AntipodalOrEqual: return "AntipodalOrEqual";
    case Err::DegenerateGeodesic: return "DegenerateGeodesic";
    case Err::DegeneratePlane: return "DegeneratePlane";
    case Err::NoSimpleWindow: return "NoSimpleWindow";
    case Err::GlueMismatch: return "GlueMismatch";
    case Err::Disconnected: return "Disconnected";
    case Err::DisconnectedLink: return "DisconnectedLink";
    case Err::GenericityFailure: return "GenericityFailure";
    case Err::OpenCurve: return "OpenCurve";
    case Err::TooManyCrossings: return "TooManyCrossings";
    case Err::ConfigInvalid: return "ConfigInvalid";
    case Err::MissingArtifact: return "MissingArtifact";
    case Err::UnknownFormat: return "UnknownFormat";
    case Err::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

}  // namespace mkf
