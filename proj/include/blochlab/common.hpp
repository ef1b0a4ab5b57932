// Shared scalar/vector aliases, Hermitian inner product, and the error
// vocabulary used across the library.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace blochlab {

using Cplx = std::complex<double>;
using CVec = std::vector<Cplx>;

// Base for all library failures; concrete kinds below distinguish whether a
// caller passed bad data, a computation left its admissible domain, or an
// internal tolerance could not be met.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (point outside the
// ball, negative radius, wrong dimension).
struct DomainError : Error {
    using Error::Error;
};

// A value left its admissible range: a self-map escaping the unit ball, an
// inverse target outside the attained range of a weight.
struct RangeError : Error {
    using Error::Error;
};

// A requested tolerance could not be met; carries the tolerance achieved.
struct AccuracyError : Error {
    double achieved;
    AccuracyError(const std::string& what, double achieved_)
        : Error(what), achieved(achieved_) {}
};

// A structural invariant failed to verify (non-orthonormal system,
// weighted-integral bound exceeded).
struct ConsistencyError : Error {
    using Error::Error;
};

// A polynomial operation would exceed the supported degree cap.
struct TruncationError : Error {
    using Error::Error;
};

// Malformed experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Hermitian inner product, linear in the first slot: sum_k z_k * conj(w_k).
inline Cplx inner(const CVec& z, const CVec& w) {
    Cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < z.size(); ++k) s += z[k] * std::conj(w[k]);
    return s;
}

inline double norm_sq(const CVec& z) {
    double s = 0.0;
    for (const Cplx& c : z) s += std::norm(c);
    return s;
}

inline double norm(const CVec& z) { return std::sqrt(norm_sq(z)); }

inline double dist(const CVec& z, const CVec& w) {
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) s += std::norm(z[k] - w[k]);
    return std::sqrt(s);
}

inline CVec scaled(const CVec& z, Cplx c) {
    CVec r(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) r[k] = c * z[k];
    return r;
}

}  // namespace blochlab
