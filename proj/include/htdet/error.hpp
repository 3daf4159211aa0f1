// Error types shared by every htdet module.

#ifndef HTDET_ERROR_HPP
#define HTDET_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace htdet {

enum class ErrorCode {
  // netlist
  SyntaxError,
  DuplicateDriver,
  UndeclaredWire,
  CombinationalLoop,
  UnsupportedGateKind,
  InvalidNetlist,
  // simulator
  InvalidSpec,
  CyclesTooSmall,
  TooManyInputs,
  SequentialNotSupported,
  // waveform / store io
  SequenceTooShort,
  VcdSyntaxError,
  NoMatchingSignals,
  VectorUnsupported,
  BadStoreFile,
  // infotheory
  EmptySequence,
  LengthMismatch,
  // cluster
  NoClusters,
  // testgen
  MissingWire,
  NothingToCover,
  CycleMismatch,
  // eval
  LabelOutsideUniverse,
  EmptyLabels,
  // generic
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column,
             const std::string& token, const std::string& message);

  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }
  [[nodiscard]] const std::string& token() const noexcept { return token_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

}  // namespace htdet

#endif  // HTDET_ERROR_HPP
