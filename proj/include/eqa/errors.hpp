#pragma once
#include <stdexcept>
#include <string>

namespace eqa {

// Bad input: missing/malformed files, invariant violations, bad config.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Oracle-side failure (transport exhausted, uninformative responses).
struct OracleError : std::runtime_error {
    explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

// Response arrived but does not match the wire schema. Never retried.
struct OracleSchemaError : OracleError {
    explicit OracleSchemaError(const std::string& what) : OracleError(what) {}
};

}  // namespace eqa
