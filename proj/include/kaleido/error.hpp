#pragma once

// Exception hierarchy shared by every kaleido module. The CLI maps each
// category onto a process exit code.

#include <stdexcept>
#include <string>

namespace kaleido {

/// Base of all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside the operation's domain
/// (n = 0, k >= n, unsafe identity parameters, bad grid shape, ...).
class invalid_argument : public error {
public:
    using error::error;
};

class invalid_modulus : public invalid_argument {
public:
    using invalid_argument::invalid_argument;
};

class index_error : public invalid_argument {
public:
    using invalid_argument::invalid_argument;
};

/// Parameters outside the range where a numerical certification is meaningful.
class unsafe_parameters : public invalid_argument {
public:
    using invalid_argument::invalid_argument;
};

/// A closed formula is not valid for the requested modulus.
class unsupported_formula : public invalid_argument {
public:
    using invalid_argument::invalid_argument;
};

/// Numerical failure: the computation itself could not produce a trustworthy value.
class numerical_error : public error {
public:
    using error::error;
};

class non_convergence : public numerical_error {
public:
    non_convergence(const std::string& what, double last_term)
        : numerical_error(what + " (last term magnitude " + std::to_string(last_term) + ")"),
          last_term_(last_term) {}

    double last_term() const noexcept { return last_term_; }

private:
    double last_term_;
};

/// A function handed to a mod-n projection returned inf/nan.
class evaluation_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

/// Normalization constant vanishes (alpha = 0 with k >= 1, ...).
class degenerate_normalization : public numerical_error {
public:
    using numerical_error::numerical_error;
};

/// The truncated Fock space is too small for the requested state.
class truncation_error : public numerical_error {
public:
    truncation_error(const std::string& what, double tail_mass)
        : numerical_error(what), tail_mass_(tail_mass) {}

    double tail_mass() const noexcept { return tail_mass_; }

private:
    double tail_mass_;
};

class range_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

} // namespace kaleido
