#include "incompat/error.hpp"

namespace incompat {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::NonUnitBloch: return "NonUnitBloch";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonPrimeDimension: return "NonPrimeDimension";
    case ErrorKind::TooManyBases: return "TooManyBases";
    case ErrorKind::InvalidSubspaceDim: return "InvalidSubspaceDim";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidPovm: return "InvalidPovm";
    case ErrorKind::AscentDiverged: return "AscentDiverged";
    case ErrorKind::SolverStalled: return "SolverStalled";
    case ErrorKind::ProblemTooLarge: return "ProblemTooLarge";
    case ErrorKind::MissingReconstruction: return "MissingReconstruction";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnknownFigure: return "UnknownFigure";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace incompat
