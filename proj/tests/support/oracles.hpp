#pragma once

// Test-only reference computations. None of these call into the code paths
// they are used to check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using complex_t = std::complex<double>;

/// _s e^z (mod n) for rational z = num/den, summed exactly over `terms` terms
/// of the residue class and rounded once at the end.
inline double exact_modn_exp(std::size_t n, std::size_t s, long num, long den, std::size_t terms = 200) {
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;
    const cpp_rational z{cpp_int(num), cpp_int(den)};
    cpp_rational sum = 0;
    cpp_rational power = 1; // z^m
    cpp_int factorial = 1;  // m!
    std::size_t taken = 0;
    for (std::size_t m = 0; taken < terms; ++m) {
        if (m > 0) {
            power *= z;
            factorial *= m;
        }
        if (m % n == s) {
            sum += power / cpp_rational(factorial);
            ++taken;
        }
    }
    return static_cast<double>(sum);
}

/// The same series at a complex argument in 50-digit binary floating point.
inline complex_t extended_modn_exp(std::size_t n, std::size_t s, complex_t z, std::size_t terms = 400) {
    using real = boost::multiprecision::cpp_bin_float_50;
    real re = 0, im = 0;
    real pr = 1, pi = 0; // z^m / m!
    const real zr = z.real(), zi = z.imag();
    for (std::size_t m = 0; m < terms * n; ++m) {
        if (m > 0) {
            const real nr = (pr * zr - pi * zi) / m;
            const real ni = (pr * zi + pi * zr) / m;
            pr = nr;
            pi = ni;
        }
        if (m % n == s) {
            re += pr;
            im += pi;
        }
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

/// Normalized Hermite functions phi_m(x) = H_m(x) e^(-x^2/2) / (pi^(1/4) sqrt(2^m m!)),
/// by their own stable recurrence.
inline std::vector<double> hermite_functions(std::size_t count, double x) {
    std::vector<double> phi(count, 0.0);
    if (count == 0) return phi;
    phi[0] = std::exp(-0.5 * x * x) / std::pow(std::numbers::pi, 0.25);
    if (count > 1) phi[1] = std::sqrt(2.0) * x * phi[0];
    for (std::size_t m = 1; m + 1 < count; ++m)
        phi[m + 1] = std::sqrt(2.0 / static_cast<double>(m + 1)) * x * phi[m] -
                     std::sqrt(static_cast<double>(m) / static_cast<double>(m + 1)) * phi[m - 1];
    return phi;
}

/// psi(x) = sum_m amp_m phi_m(x).
inline complex_t fock_expansion(const Eigen::VectorXcd& amps, double x) {
    const auto phi = hermite_functions(static_cast<std::size_t>(amps.size()), x);
    complex_t psi{0.0, 0.0};
    for (Eigen::Index m = 0; m < amps.size(); ++m) psi += amps(m) * phi[static_cast<std::size_t>(m)];
    return psi;
}

/// e^M from Eigen's Pade-based scaling and squaring.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m) { return m.exp(); }

/// Uniform point in the disk |z| <= r.
inline complex_t random_in_disk(std::mt19937_64& rng, double r) {
    std::uniform_real_distribution<double> radius(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    return std::polar(r * std::sqrt(radius(rng)), angle(rng));
}

/// mod-4 exponentials expanded analytically: (cosh z + cos z)/2, (sinh z + sin z)/2, ...
inline complex_t mod4_exp(std::size_t s, complex_t z) {
    switch (s) {
    case 0: return 0.5 * (std::cosh(z) + std::cos(z));
    case 1: return 0.5 * (std::sinh(z) + std::sin(z));
    case 2: return 0.5 * (std::cosh(z) - std::cos(z));
    default: return 0.5 * (std::sinh(z) - std::sin(z));
    }
}

} // namespace oracle
