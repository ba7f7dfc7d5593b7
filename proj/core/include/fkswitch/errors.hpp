#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fkswitch {

/// Exit-code buckets used by the CLI: Config errors are caller mistakes
/// (bad files, bad parameters, failed validation), Numeric errors are
/// failures detected while computing.
enum class ErrorKind { Config, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), kind_(kind), name_(std::move(name)) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Stable machine-readable identifier, e.g. "RowSumNonZero".
    const std::string& name() const noexcept { return name_; }

private:
    ErrorKind kind_;
    std::string name_;
};

[[noreturn]] inline void throw_config(std::string name, const std::string& message) {
    throw Error(ErrorKind::Config, std::move(name), message);
}

[[noreturn]] inline void throw_numeric(std::string name, const std::string& message) {
    throw Error(ErrorKind::Numeric, std::move(name), message);
}

}  // namespace fkswitch
