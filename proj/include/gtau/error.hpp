#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gtau {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct DegenerateFit : Error {
    using Error::Error;
};

struct DepthExceeded : Error {
    using Error::Error;
};

// grid cannot resolve a feature (mollifier lobe, spectral band, tail)
struct Unresolved : Error {
    using Error::Error;
};

struct Unsupported : Error {
    using Error::Error;
};

struct MomentFailure : Error {
    MomentFailure(int k, double value, const std::string& what)
        : Error(what), first_failing_k(k), moment(value) {}
    int first_failing_k;
    double moment;
};

struct ParseError : Error {
    ParseError(std::size_t pos, const std::string& msg)
        : Error("parse error at " + std::to_string(pos) + ": " + msg), position(pos) {}
    std::size_t position;
};

} // namespace gtau
