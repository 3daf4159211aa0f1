#include "htdet/error.hpp"

namespace htdet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateDriver: return "DuplicateDriver";
    case ErrorCode::UndeclaredWire: return "UndeclaredWire";
    case ErrorCode::CombinationalLoop: return "CombinationalLoop";
    case ErrorCode::UnsupportedGateKind: return "UnsupportedGateKind";
    case ErrorCode::InvalidNetlist: return "InvalidNetlist";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::CyclesTooSmall: return "CyclesTooSmall";
    case ErrorCode::TooManyInputs: return "TooManyInputs";
    case ErrorCode::SequentialNotSupported: return "SequentialNotSupported";
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::VcdSyntaxError: return "VcdSyntaxError";
    case ErrorCode::NoMatchingSignals: return "NoMatchingSignals";
    case ErrorCode::VectorUnsupported: return "VectorUnsupported";
    case ErrorCode::BadStoreFile: return "BadStoreFile";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoClusters: return "NoClusters";
    case ErrorCode::MissingWire: return "MissingWire";
    case ErrorCode::NothingToCover: return "NothingToCover";
    case ErrorCode::CycleMismatch: return "CycleMismatch";
    case ErrorCode::LabelOutsideUniverse: return "LabelOutsideUniverse";
    case ErrorCode::EmptyLabels: return "EmptyLabels";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

ParseError::ParseError(ErrorCode code, std::size_t line, std::size_t column,
                       const std::string& token, const std::string& message)
    : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " +
                      message + (token.empty() ? "" : " near '" + token + "'")),
      line_(line),
      column_(column),
      token_(token) {}

}  // namespace htdet
