#pragma once

#include <stdexcept>
#include <string>

namespace pmlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A pivot or membership decision landed within the precision margin and
// could not be settled even after raising the working precision.
class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

class LevelOverflow : public Error {
public:
    using Error::Error;
};

class InsufficientDegree : public Error {
public:
    using Error::Error;
};

class NotZpFinite : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace pmlab
