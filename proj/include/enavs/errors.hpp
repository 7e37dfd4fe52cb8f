#pragma once

#include <stdexcept>
#include <string>

namespace enavs {

// Error categories surfaced by the CLI as machine-readable JSON.
struct Error : std::runtime_error {
    Error(std::string type, const std::string& msg)
        : std::runtime_error(msg), type(std::move(type)) {}
    std::string type;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse", msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("domain", msg) {}
};

struct CalibrationError : Error {
    explicit CalibrationError(const std::string& msg) : Error("calibration", msg) {}
};

struct TrainError : Error {
    explicit TrainError(const std::string& msg) : Error("train", msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("io", msg) {}
};

}  // namespace enavs
