#pragma once

#include <stdexcept>
#include <string>

namespace fivol {

// Error categories, aligned with the CLI / C API status codes.
enum class ErrorCode {
    Tolerance = 1,   // a requested tolerance check failed
    Parse = 2,       // malformed input (JSON, arguments)
    Class = 3,       // Hadwiger-class or domain precondition violated
    Numeric = 4,     // quadrature/fit/singularity failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_tolerance(const std::string& msg) { throw Error(ErrorCode::Tolerance, msg); }
[[noreturn]] inline void throw_parse(const std::string& msg)   { throw Error(ErrorCode::Parse, msg); }
[[noreturn]] inline void throw_class(const std::string& msg)   { throw Error(ErrorCode::Class, msg); }
[[noreturn]] inline void throw_numeric(const std::string& msg) { throw Error(ErrorCode::Numeric, msg); }

}  // namespace fivol
