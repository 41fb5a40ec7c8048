#pragma once

#include <stdexcept>
#include <string>

namespace mehpp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluation outside the model's physical domain (at or past a singularity).
struct DomainError : Error {
    using Error::Error;
};

/// Invalid parameters, configuration or file contents. `locus` names the
/// offending field and, for parsed text, the line.
struct ConfigError : Error {
    ConfigError(std::string locus, const std::string& what)
        : Error(locus.empty() ? what : locus + ": " + what), locus_(std::move(locus)) {}
    const std::string& locus() const noexcept { return locus_; }

private:
    std::string locus_;
};

/// A numerical procedure failed to converge.
struct NumericError : Error {
    NumericError(const std::string& what, double time, double residual)
        : Error(what + " (t=" + std::to_string(time) + ", residual=" + std::to_string(residual) + ")"),
          time_(time), residual_(residual) {}
    double time() const noexcept { return time_; }
    double residual() const noexcept { return residual_; }

private:
    double time_;
    double residual_;
};

struct InvalidStateError : Error {
    using Error::Error;
};

/// File system failure; the message carries the path.
struct IoError : Error {
    IoError(const std::string& path, const std::string& what) : Error(path + ": " + what) {}
};

} // namespace mehpp
