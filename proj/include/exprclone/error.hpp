#pragma once

#include <stdexcept>
#include <string>

namespace exprclone {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text or files (points files, configs, image headers).
class ParseError : public Error {
public:
    using Error::Error;
};

// Point sets that disagree in count or id->organ mapping.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Degenerate or inconsistent geometry (collinear input, collapsed
// triangles or organ boxes, unknown vertex ids).
class GeometryError : public Error {
public:
    using Error::Error;
};

// Image dimension or channel mismatches and i/o failures.
class ImageError : public Error {
public:
    using Error::Error;
};

// PCA basis training failures.
class TrainingError : public Error {
public:
    using Error::Error;
};

} // namespace exprclone
