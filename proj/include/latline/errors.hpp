#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace latline {

// Error taxonomy shared by the library and the command-line tool.
// The kind decides the process exit status (2 / 3 / 4); the name is the
// stable machine-readable identifier printed on stderr.
enum class ErrorKind {
    parse,         // malformed input text
    domain,        // well-formed input, no defined result (divergence, out of domain, ...)
    precondition,  // caller violated a stated precondition
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), kind_(kind), name_(std::move(name)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

    static int exit_status(ErrorKind kind) noexcept {
        switch (kind) {
            case ErrorKind::parse: return 2;
            case ErrorKind::domain: return 3;
            case ErrorKind::precondition: return 4;
        }
        return 1;
    }

private:
    ErrorKind kind_;
    std::string name_;
};

[[noreturn]] inline void throw_parse(const std::string& message) {
    throw Error(ErrorKind::parse, "ParseError", message);
}

[[noreturn]] inline void throw_domain(std::string name, const std::string& message) {
    throw Error(ErrorKind::domain, std::move(name), message);
}

[[noreturn]] inline void throw_precondition(std::string name, const std::string& message) {
    throw Error(ErrorKind::precondition, std::move(name), message);
}

}  // namespace latline
