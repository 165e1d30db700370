#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmod {

enum class ErrorKind {
  ParseError,
  DuplicateEdge,
  SelfLoop,
  NegativeWeight,
  ZeroVolume,
  ZeroDegree,
  Disconnected,
  EigenFailure,
  BadK,
  TooLarge,
  NoSeparation,
  WeightsNotProbabilities,
  NoGap,
  BadSize,
  BadModel,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::ZeroVolume: return "ZeroVolume";
    case ErrorKind::ZeroDegree: return "ZeroDegree";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::BadK: return "BadK";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NoSeparation: return "NoSeparation";
    case ErrorKind::WeightsNotProbabilities: return "WeightsNotProbabilities";
    case ErrorKind::NoGap: return "NoGap";
    case ErrorKind::BadSize: return "BadSize";
    case ErrorKind::BadModel: return "BadModel";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the ErrorKind tags; the
/// message always starts with the tag name so the CLI can print it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nmod
