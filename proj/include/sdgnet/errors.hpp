#pragma once

#include <stdexcept>
#include <string>

namespace sdgnet {

// Argument or configuration value outside its documented domain.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data violates the schema contract: duplicate keys, out-of-range
// scores, inconsistent goal tags, unusable countries.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text. Messages carry the 1-based line number.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sdgnet
