#pragma once

#include <stdexcept>

namespace mricls {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data: malformed files, out-of-range metadata, inconsistent
// arguments. The CLI maps this to exit code 1.
struct DataError : Error {
    using Error::Error;
};

} // namespace mricls
