#pragma once

#include <stdexcept>
#include <string>

namespace palab {

// Input: malformed or out-of-contract user data. Contract: a caller violated a
// documented precondition. Resource: a configured budget ran out; partial
// results may still be meaningful to the caller.
enum class ErrKind { Input, Contract, Resource };

struct PalabError : std::runtime_error {
    ErrKind kind;
    PalabError(ErrKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void input_error(const std::string& msg) {
    throw PalabError(ErrKind::Input, msg);
}
[[noreturn]] inline void contract_error(const std::string& msg) {
    throw PalabError(ErrKind::Contract, msg);
}
[[noreturn]] inline void resource_error(const std::string& msg) {
    throw PalabError(ErrKind::Resource, msg);
}

} // namespace palab
