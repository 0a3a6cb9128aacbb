#include "gq/errors.hpp"

namespace gq {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::TargetTooLarge: return "TargetTooLarge";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::ConstructionFailure: return "ConstructionFailure";
    case ErrorCode::DegenerateCell: return "DegenerateCell";
    case ErrorCode::InfiniteZadorConstant: return "InfiniteZadorConstant";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace gq
