#pragma once

#include <stdexcept>
#include <string>

namespace ebsum {

enum class Errc {
    invalid_argument,
    contract_violation,
    budget_exhausted,
    unsupported,
    undefined,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

namespace detail {

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const char* what) {
    if (!cond) fail(code, what);
}

} // namespace detail
} // namespace ebsum
