#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gq {

enum class ErrorCode {
    InvalidInterval,
    QuadratureFailure,
    EmptyCell,
    TargetTooLarge,
    InvalidTarget,
    ConstructionFailure,
    DegenerateCell,
    InfiniteZadorConstant,
    InvalidParameter,
    ParseError,
    IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class QuadratureFailure : public Error {
public:
    QuadratureFailure(const std::string& what, double achieved_error)
        : Error(ErrorCode::QuadratureFailure, what), achieved_error_(achieved_error) {}

    /// Error estimate reached when the subdivision budget ran out.
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

class DegenerateCell : public Error {
public:
    DegenerateCell(const std::string& what, std::size_t index)
        : Error(ErrorCode::DegenerateCell, what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

} // namespace gq
