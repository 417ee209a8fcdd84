// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sagin {

// Precondition violated by the caller (bad argument, out-of-range parameter).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An iterative method failed to converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario files: malformed line, unknown key or invalid value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sagin
