#include "xconv/error.hpp"

namespace xconv {

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownWorld: return "UnknownWorld";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::NodeNotDerived: return "NodeNotDerived";
    case ErrorCode::InvalidExplanation: return "InvalidExplanation";
    case ErrorCode::MalformedFeedback: return "MalformedFeedback";
    case ErrorCode::UntruthfulFeedback: return "UntruthfulFeedback";
    case ErrorCode::EmptyUpdate: return "EmptyUpdate";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::InvalidAgent: return "InvalidAgent";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::StaleRound: return "StaleRound";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace xconv
