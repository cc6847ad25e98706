#ifndef FLPAA_ERRORS_HPP
#define FLPAA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flpaa {

// Error categories, each mapped to a distinct CLI exit code.
enum class errc {
    schema = 2,            // malformed config / JSON input
    parity = 3,            // operation restricted to odd (or even) n
    regime = 4,            // mechanism called outside its regime (e.g. POM with n_r > c)
    domain = 5,            // argument outside the mathematical domain (p <= 0, empty vector, ...)
    dimension = 6,         // vector length mismatch
    infeasible = 7,        // outcome violates a capacity constraint
    invalid_family = 8,    // concentration family cannot be realized
    unsupported_plan = 9,  // quantile plan outside what the mechanism supports
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }
    int exit_code() const { return static_cast<int>(code_); }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace flpaa

#endif
