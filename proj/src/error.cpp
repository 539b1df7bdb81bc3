#include "ohlc/error.hpp"

namespace ohlc {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NonPositiveLow: return "NonPositiveLow";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::OutOfRangeOpenClose: return "OutOfRangeOpenClose";
    case Errc::NegativePrice: return "NegativePrice";
    case Errc::InconsistentBounds: return "InconsistentBounds";
    case Errc::DegenerateLambda: return "DegenerateLambda";
    case Errc::NonFinite: return "NonFinite";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ComponentsOutOfRange: return "ComponentsOutOfRange";
    case Errc::LabelMismatch: return "LabelMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotUnitNorm: return "NotUnitNorm";
    case Errc::MissingHeader: return "MissingHeader";
    case Errc::BadNumeric: return "BadNumeric";
    case Errc::DuplicateKey: return "DuplicateKey";
    case Errc::RaggedPivot: return "RaggedPivot";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace ohlc
