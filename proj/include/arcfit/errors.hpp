#pragma once

#include <stdexcept>
#include <string>

namespace arcfit {

enum class FitErrorKind {
  CollinearOrDegenerate,
  DegeneratePencil,
  NoArcExists,
  NonConvergence,
};

inline const char* to_string(FitErrorKind kind) {
  switch (kind) {
    case FitErrorKind::CollinearOrDegenerate: return "CollinearOrDegenerate";
    case FitErrorKind::DegeneratePencil: return "DegeneratePencil";
    case FitErrorKind::NoArcExists: return "NoArcExists";
    case FitErrorKind::NonConvergence: return "NonConvergence";
  }
  return "Unknown";
}

/// A fit that is well-posed as input but has no usable circle answer.
/// Malformed input is reported with std::invalid_argument instead.
class FitError : public std::runtime_error {
 public:
  FitError(FitErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  FitErrorKind kind() const { return kind_; }

 private:
  FitErrorKind kind_;
};

}  // namespace arcfit
