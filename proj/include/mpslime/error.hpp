#pragma once

#include <stdexcept>
#include <string>

namespace mpslime {

// Base of every error raised by the library. `kind()` is a short stable tag
// used by the CLI for its machine-readable error line.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& m) : Error("shape", m) {}
};

class ImageTooSmallError : public Error {
public:
    explicit ImageTooSmallError(const std::string& m) : Error("image_too_small", m) {}
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& m) : Error("parameter", m) {}
};

class IndexError : public Error {
public:
    explicit IndexError(const std::string& m) : Error("index", m) {}
};

class UndefinedMetricError : public Error {
public:
    explicit UndefinedMetricError(const std::string& m) : Error("undefined_metric", m) {}
};

class TransportError : public Error {
public:
    explicit TransportError(const std::string& m) : Error("transport", m) {}
};

class ProtocolError : public Error {
public:
    ProtocolError(std::string field, const std::string& m)
        : Error("protocol", m), field_(std::move(field)) {}

    // Name of the offending response field ("status", "probabilities", ...).
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& m) : Error("io", m) {}
};

} // namespace mpslime
