#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace itoquad {

// Process exit codes used by the CLI. Each error family maps to one code.
enum class exit_code : int {
    ok = 0,
    failure = 1,
    config = 2,
    resource = 3,
    io = 4,
};

/// Argument outside the mathematical domain of an operation (n = 0, T <= 0, log of 0, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A requested time is not a point of the fine grid.
class alignment_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Violated size/shape contract between inputs.
class contract_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Memory or grid-size cap exceeded.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A worker failed while processing one Monte Carlo replicate.
class replicate_error : public std::runtime_error {
public:
    replicate_error(std::size_t replicate, const std::string& what)
        : std::runtime_error("replicate " + std::to_string(replicate) + ": " + what),
          replicate_(replicate) {}

    std::size_t replicate() const noexcept { return replicate_; }

private:
    std::size_t replicate_;
};

}  // namespace itoquad
