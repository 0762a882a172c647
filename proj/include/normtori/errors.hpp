#pragma once

#include <stdexcept>
#include <string>

namespace normtori {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A configured size bound (group order, subgroup order, rank) was exceeded.
class CapExceeded : public Error {
public:
    CapExceeded(const std::string& what_cap, std::size_t limit, std::size_t needed)
        : Error(what_cap + " cap exceeded: limit " + std::to_string(limit) + ", needed " + std::to_string(needed)),
          limit_(limit),
          needed_(needed) {}
    [[nodiscard]] std::size_t limit() const noexcept { return limit_; }
    [[nodiscard]] std::size_t needed() const noexcept { return needed_; }

private:
    std::size_t limit_;
    std::size_t needed_;
};

class NotASubgroup : public Error {
public:
    using Error::Error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed; indicates a bug rather than bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace normtori
