#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xconv {

enum class ErrorCode {
  UnknownWorld,
  UnknownAtom,
  NodeNotDerived,
  InvalidExplanation,
  MalformedFeedback,
  UntruthfulFeedback,
  EmptyUpdate,
  TraceMismatch,
  Parse,
  InvalidModel,
  InvalidAgent,
  UnknownSession,
  StaleRound,
  Internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error with a 0-based byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::Parse, "at column " + std::to_string(offset + 1) + ": " + message),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace xconv
