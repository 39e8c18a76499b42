#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcis {

enum class ErrorCode {
  BandwidthSplit,
  OddInterfaces,
  NonSquareBs,
  ChannelSplit,
  BadBeamwidth,
  BadField,
  ConfigSyntax,
  UnknownKey,
  DegenerateScale,
  EmptyCell,
  HopBudgetExceeded,
  ClusterMismatch,
  ScheduleInvalid,
  HorizonTooShort,
  NoPackets,
  DegenerateFit,
  MissingColumn,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::BandwidthSplit: return "BandwidthSplit";
    case ErrorCode::OddInterfaces: return "OddInterfaces";
    case ErrorCode::NonSquareBs: return "NonSquareBs";
    case ErrorCode::ChannelSplit: return "ChannelSplit";
    case ErrorCode::BadBeamwidth: return "BadBeamwidth";
    case ErrorCode::BadField: return "BadField";
    case ErrorCode::ConfigSyntax: return "ConfigSyntax";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::HopBudgetExceeded: return "HopBudgetExceeded";
    case ErrorCode::ClusterMismatch: return "ClusterMismatch";
    case ErrorCode::ScheduleInvalid: return "ScheduleInvalid";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::NoPackets: return "NoPackets";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::MissingColumn: return "MissingColumn";
  }
  return "Unknown";
}

// Config-class errors map to CLI exit code 1, the rest to 2.
inline bool is_config_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::BandwidthSplit:
    case ErrorCode::OddInterfaces:
    case ErrorCode::NonSquareBs:
    case ErrorCode::ChannelSplit:
    case ErrorCode::BadBeamwidth:
    case ErrorCode::BadField:
    case ErrorCode::ConfigSyntax:
    case ErrorCode::UnknownKey:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mcis
