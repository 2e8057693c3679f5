#pragma once

#include <stdexcept>
#include <string>

namespace evgrid {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
    using Error::Error;
};

// Clamped demand cannot be met inside the box bounds. Reaching this from the
// coordinator means demand clamping is broken upstream.
struct InfeasibleDemand : Error {
    using Error::Error;
};

struct NoData : Error {
    using Error::Error;
};

struct SingularModel : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& path, long row, const std::string& what)
        : Error(path + ":" + std::to_string(row) + ": " + what),
          path(path),
          row(row) {}
    std::string path;
    long row;
};

}  // namespace evgrid
