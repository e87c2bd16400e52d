#pragma once

#include <stdexcept>
#include <string>

namespace klein {

enum class ErrorCode {
    NotSquarefree,
    DegenerateD,
    ImaginaryField,
    ZeroIdeal,
    SearchCapExceeded,
    NotIntegral,
    Obstructed,
    CoverNotFound,
    InconsistentCount,
    RamifiedFiber,
    BoundTooLow,
    UnknownGeneratorName,
    BadInput,
    Internal,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotSquarefree: return "NotSquarefree";
        case ErrorCode::DegenerateD: return "DegenerateD";
        case ErrorCode::ImaginaryField: return "ImaginaryField";
        case ErrorCode::ZeroIdeal: return "ZeroIdeal";
        case ErrorCode::SearchCapExceeded: return "SearchCapExceeded";
        case ErrorCode::NotIntegral: return "NotIntegral";
        case ErrorCode::Obstructed: return "Obstructed";
        case ErrorCode::CoverNotFound: return "CoverNotFound";
        case ErrorCode::InconsistentCount: return "InconsistentCount";
        case ErrorCode::RamifiedFiber: return "RamifiedFiber";
        case ErrorCode::BoundTooLow: return "BoundTooLow";
        case ErrorCode::UnknownGeneratorName: return "UnknownGeneratorName";
        case ErrorCode::BadInput: return "BadInput";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

/// Resource-limit errors map to CLI exit code 2, domain errors to 1.
inline bool is_resource_error(ErrorCode c) {
    return c == ErrorCode::SearchCapExceeded || c == ErrorCode::CoverNotFound ||
           c == ErrorCode::BoundTooLow;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string detail = {})
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code),
          message_(std::move(message)),
          detail_(std::move(detail)) {}

    ErrorCode code() const { return code_; }
    const std::string& message() const { return message_; }
    const std::string& detail() const { return detail_; }

private:
    ErrorCode code_;
    std::string message_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message,
                              const std::string& detail = {}) {
    throw Error(code, message, detail);
}

} // namespace klein
