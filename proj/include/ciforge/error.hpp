#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ciforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed concept, axiom or interpretation text.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Structurally well-formed input that violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A configured size cap (product vertices, tree nodes, attributes, ...) was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Mining produced an axiom that the source interpretation does not satisfy.
class SoundnessError : public Error {
public:
    using Error::Error;
};

} // namespace ciforge
