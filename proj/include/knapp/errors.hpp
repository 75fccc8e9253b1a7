#pragma once

#include <stdexcept>
#include <string>

namespace knapp {

/// A parameter is outside its documented domain.
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A symbol was evaluated at the zero frequency.
class singular_frequency : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The lambda window for (eps, rho, k) is empty. Carries the supremum of the
/// rho values for which the window is nonempty at this (eps, k).
class window_empty : public invalid_parameter {
public:
    window_empty(const std::string& what, double max_rho)
        : invalid_parameter(what), max_rho_(max_rho) {}

    double max_rho() const noexcept { return max_rho_; }

private:
    double max_rho_;
};

}  // namespace knapp
