#pragma once

#include <stdexcept>
#include <string>

namespace snrd {

/// Invalid argument or violated precondition on an input value.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A model-level hypothesis required by an operation does not hold
/// (e.g. the absorbing-set or fixed-point parameter conditions).
class ConditionViolated : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A noise path window does not cover the times an evaluation needs.
class WindowExhausted : public ParameterError {
public:
    using ParameterError::ParameterError;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ParameterError(what);
    }
}

}  // namespace detail
}  // namespace snrd
