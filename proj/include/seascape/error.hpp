#pragma once

#include <stdexcept>
#include <string>

namespace seascape {

// Base class for every error the library raises. CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments or violated preconditions supplied by the caller.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Problems with input data (files, axes, variables).
class DataError : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

class MaskedRegion : public Error {
public:
    using Error::Error;
};

class DegenerateAxis : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class MissingVariable : public DataError {
public:
    using DataError::DataError;
};

class DimensionMismatch : public DataError {
public:
    using DataError::DataError;
};

class UnsortedAxis : public DataError {
public:
    using DataError::DataError;
};

class FormatError : public DataError {
public:
    using DataError::DataError;
};

class TimestepOutOfRange : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Operations whose result would be empty.
class EmptyResult : public Error {
public:
    using Error::Error;
};

class EmptySubset : public EmptyResult {
public:
    using EmptyResult::EmptyResult;
};

class AllZeroWeights : public EmptyResult {
public:
    using EmptyResult::EmptyResult;
};

class EmptySelection : public EmptyResult {
public:
    using EmptyResult::EmptyResult;
};

class NoClosedStreamline : public EmptyResult {
public:
    using EmptyResult::EmptyResult;
};

}  // namespace seascape
