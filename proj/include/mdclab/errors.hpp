#pragma once

#include <stdexcept>
#include <string>

namespace mdc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateParams : public Error {
public:
    using Error::Error;
};

class OutOfRegime : public Error {
public:
    using Error::Error;
};

class NearCaustic : public Error {
public:
    using Error::Error;
};

class CausticError : public Error {
public:
    using Error::Error;
};

class VariableMismatch : public Error {
public:
    using Error::Error;
};

class DeltaConstraintError : public Error {
public:
    using Error::Error;
};

class MissingVertex : public Error {
public:
    using Error::Error;
};

class DegenerateCoeffs : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace mdc
