#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace restcov {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- spec loading ---

class ParseError : public Error {
public:
    using Error::Error;
};

class UnsupportedVersion : public Error {
public:
    using Error::Error;
};

class UnresolvableRef : public Error {
public:
    using Error::Error;
};

class ExternalRef : public Error {
public:
    using Error::Error;
};

// --- traffic logs ---

class NotHar : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    SchemaError(std::size_t line, std::string field, const std::string& what)
        : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

// --- capture proxy ---

class BindError : public Error {
public:
    using Error::Error;
};

class LogWriteError : public Error {
public:
    using Error::Error;
};

}  // namespace restcov
