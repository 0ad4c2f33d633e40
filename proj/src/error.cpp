#include "seqprint/error.hpp"

namespace seqprint {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::EmptyWindow: return "empty-window";
    case ErrorKind::IncompatibleProfile: return "incompatible-profile";
    case ErrorKind::IncompatibleFingerprint: return "incompatible-fingerprint";
    case ErrorKind::IncompatibleAnalysis: return "incompatible-analysis";
    case ErrorKind::Format: return "format";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace seqprint
