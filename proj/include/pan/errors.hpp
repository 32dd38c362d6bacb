#pragma once

#include <stdexcept>
#include <string>

namespace pan {

// Invalid parameters, bad configs, out-of-range inputs.  CLI exit code 1.
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// A queried cell / evaluation ball sticks out of the sampled window, so the
// answer would be censored.  Always an error, never silently truncated.
class out_of_window_error : public domain_error {
public:
    explicit out_of_window_error(const std::string& what) : domain_error(what) {}
};

// Solver / quadrature failed to converge.  CLI exit code 2.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pan
