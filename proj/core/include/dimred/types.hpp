#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimred {

using cplx = std::complex<double>;
using index_t = std::ptrdiff_t;

/// Base class for all numerical failures raised by the toolkit.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct singular_matrix_error : numerical_error {
    using numerical_error::numerical_error;
};

struct convergence_error : numerical_error {
    using numerical_error::numerical_error;
};

/// Tubular condition eps*|t|*max|kappa| < 1 violated.
struct tubular_error : numerical_error {
    using numerical_error::numerical_error;
};

/// Certificate hypothesis 1 - eta1*R - eta2 > 0 violated.
struct gate_error : numerical_error {
    using numerical_error::numerical_error;
};

/// Spectral-window precondition violated (z outside the admissible set).
struct window_error : numerical_error {
    using numerical_error::numerical_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double sqr(double x) { return x * x; }

// Scalar-generic conjugation so templates work for double and cplx alike.
inline double conj_scalar(double x) { return x; }
inline cplx conj_scalar(const cplx& x) { return std::conj(x); }

template <class T>
double abs2(const T& x) {
    return std::norm(std::complex<double>(x));
}

} // namespace dimred
