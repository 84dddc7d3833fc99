#pragma once

#include <stdexcept>
#include <string>

namespace chainent {

enum class ErrorKind {
  DegenerateModel,
  CriticalSymbol,
  UnsupportedLayout,
  ConvergenceFailure,
  DomainError,
  TailTooLarge,
  PairingFailure,
  QuadratureFailure,
  IllConditioned,
  OnBranchCut,
  PathRoutingFailure,
  ZeroOnPath,
  TruncationOverflow,
  NoDegeneratePairs,
  GenusMismatch,
  ZeroMode,
  ConfigError
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateModel: return "DegenerateModel";
    case ErrorKind::CriticalSymbol: return "CriticalSymbol";
    case ErrorKind::UnsupportedLayout: return "UnsupportedLayout";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::TailTooLarge: return "TailTooLarge";
    case ErrorKind::PairingFailure: return "PairingFailure";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::OnBranchCut: return "OnBranchCut";
    case ErrorKind::PathRoutingFailure: return "PathRoutingFailure";
    case ErrorKind::ZeroOnPath: return "ZeroOnPath";
    case ErrorKind::TruncationOverflow: return "TruncationOverflow";
    case ErrorKind::NoDegeneratePairs: return "NoDegeneratePairs";
    case ErrorKind::GenusMismatch: return "GenusMismatch";
    case ErrorKind::ZeroMode: return "ZeroMode";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

// Messages carry the originating module, e.g. "symbol: CriticalSymbol: ...".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& module, const std::string& what)
      : std::runtime_error(module + ": " + kind_name(kind) + ": " + what),
        kind_(kind),
        module_(module) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

// Process exit status for the CLI.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError: return 2;
    case ErrorKind::CriticalSymbol:
    case ErrorKind::UnsupportedLayout:
    case ErrorKind::NoDegeneratePairs: return 4;
    default: return 3;
  }
}

}  // namespace chainent
