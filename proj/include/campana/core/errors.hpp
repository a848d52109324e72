#pragma once

#include <stdexcept>
#include <string>

namespace campana {

enum class ErrorKind {
  ConfigError,
  IoError,
  MalformedFan,
  NonSmoothCone,
  IncompleteFan,
  NonPrimitiveRay,
  NonSquarefree,
  ZeroCoordinate,
  BoundTooLarge,
  ExplosionGuard,
  NotAmple,
  UnboundedPolytope,
  Infeasible,
  DegenerateProjection,
  InvalidArgument,
  Internal,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::MalformedFan: return "MalformedFan";
    case ErrorKind::NonSmoothCone: return "NonSmoothCone";
    case ErrorKind::IncompleteFan: return "IncompleteFan";
    case ErrorKind::NonPrimitiveRay: return "NonPrimitiveRay";
    case ErrorKind::NonSquarefree: return "NonSquarefree";
    case ErrorKind::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorKind::BoundTooLarge: return "BoundTooLarge";
    case ErrorKind::ExplosionGuard: return "ExplosionGuard";
    case ErrorKind::NotAmple: return "NotAmple";
    case ErrorKind::UnboundedPolytope: return "UnboundedPolytope";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::DegenerateProjection: return "DegenerateProjection";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

/// Process exit code: 1-9 configuration, 10-19 validation, 20-29 resource
/// caps, 30-39 mathematical preconditions.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError: return 1;
    case ErrorKind::IoError: return 2;
    case ErrorKind::MalformedFan: return 10;
    case ErrorKind::NonSmoothCone: return 11;
    case ErrorKind::IncompleteFan: return 12;
    case ErrorKind::NonPrimitiveRay: return 13;
    case ErrorKind::NonSquarefree: return 14;
    case ErrorKind::ZeroCoordinate: return 15;
    case ErrorKind::BoundTooLarge: return 20;
    case ErrorKind::ExplosionGuard: return 21;
    case ErrorKind::NotAmple: return 30;
    case ErrorKind::UnboundedPolytope: return 31;
    case ErrorKind::Infeasible: return 32;
    case ErrorKind::DegenerateProjection: return 33;
    case ErrorKind::InvalidArgument: return 34;
    case ErrorKind::Internal: return 39;
  }
  return 39;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace campana
