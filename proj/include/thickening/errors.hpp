#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thk {

enum class ErrorKind {
  NotSquare,
  EmptySpace,
  AsymmetricMatrix,
  NonZeroDiagonal,
  NegativeDistance,
  ZeroOffDiagonal,
  TriangleViolation,
  DimensionMismatch,
  EmptySubset,
  InvalidCorrespondence,
  InvalidExponent,
  NegativeWeight,
  NotNormalized,
  NotOnUnitSphere,
  EmbeddingMismatch,
  SpaceMismatch,
  NotANet,
  InvalidSimplex,
  FaceTooLarge,
  NonMonotoneComplex,
  SupportTooLarge,
  InvalidArgument,
  InputNotFound,
  ParseError,
  CertificationFailure,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::EmptySpace: return "EmptySpace";
    case ErrorKind::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorKind::NonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorKind::NegativeDistance: return "NegativeDistance";
    case ErrorKind::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case ErrorKind::TriangleViolation: return "TriangleViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::InvalidCorrespondence: return "InvalidCorrespondence";
    case ErrorKind::InvalidExponent: return "InvalidExponent";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotOnUnitSphere: return "NotOnUnitSphere";
    case ErrorKind::EmbeddingMismatch: return "EmbeddingMismatch";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::NotANet: return "NotANet";
    case ErrorKind::InvalidSimplex: return "InvalidSimplex";
    case ErrorKind::FaceTooLarge: return "FaceTooLarge";
    case ErrorKind::NonMonotoneComplex: return "NonMonotoneComplex";
    case ErrorKind::SupportTooLarge: return "SupportTooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InputNotFound: return "InputNotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::CertificationFailure: return "CertificationFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library. `kind()` is stable and is what the
/// command-line front-end prints on standard error.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace thk
