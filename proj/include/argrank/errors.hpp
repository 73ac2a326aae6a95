#pragma once

#include <stdexcept>
#include <string>

namespace argrank {

// Error categories map 1:1 onto CLI exit codes (see tools/).
// ValidationError/ConfigError -> 1, JudgeError -> 2, IoError -> 3.

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad domain data: dangling references, schema violations, invariant breaks.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Bad configuration: out-of-range parameters, unknown flags, missing stages.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Judge-side failures: transport errors and unparseable model output.
class JudgeError : public Error {
public:
    explicit JudgeError(const std::string& what, std::string last_response = "")
        : Error(what), last_raw_response(std::move(last_response)) {}

    // Verbatim text of the final attempt, for post-mortems.
    std::string last_raw_response;
};

// Filesystem and serialization failures.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace argrank
