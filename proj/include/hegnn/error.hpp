#ifndef HEGNN_ERROR_HPP
#define HEGNN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hegnn {

enum class ErrorCode {
    invalid_argument,
    domain,
    io,
    verification,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

} // namespace hegnn

#endif
