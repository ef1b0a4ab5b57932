#include "blochlab/moebius.hpp"

#include <cmath>
#include <string>

namespace blochlab::moebius {

MoebiusMap::MoebiusMap(CVec center) : a_(std::move(center)) {
    if (a_.empty()) throw DomainError("moebius: center must be non-empty");
    norm_a_sq_ = norm_sq(a_);
    if (norm_a_sq_ >= 1.0)
        throw DomainError("moebius: center norm " + std::to_string(std::sqrt(norm_a_sq_)) +
                          " is not inside the ball");
    s_ = std::sqrt(1.0 - norm_a_sq_);
}

CVec MoebiusMap::apply(const CVec& z) const {
    if (static_cast<int>(z.size()) != dim())
        throw ConsistencyError("moebius: point dimension mismatch");
    const double zn = norm_sq(z);
    if (zn >= 1.0) throw DomainError("moebius: point is not inside the ball");
    if (norm_a_sq_ == 0.0) {
        CVec out(z.size());
        for (std::size_t k = 0; k < z.size(); ++k) out[k] = -z[k];
        return out;
    }
    const Cplx za = inner(z, a_);
    const Cplx den = 1.0 - za;
    if (std::abs(den) < 1e-14)
        throw ConsistencyError("moebius: denominator vanished; inputs drifted onto "
                               "the singular set");
    const Cplx proj = za / norm_a_sq_;  // P_a z = proj * a
    CVec out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        const Cplx p = proj * a_[k];
        const Cplx q = z[k] - p;
        out[k] = (a_[k] - p - s_ * q) / den;
    }
    return out;
}

double invariant_gradient(const holo::Function& f, const CVec& z) {
    if (static_cast<int>(z.size()) != f.dim())
        throw ConsistencyError("invariant_gradient: dimension mismatch");
    const MoebiusMap phi(z);
    const auto g = [&](const CVec& u) { return f.value(phi.apply(u)); };
    const double h = 1e-5;
    double acc = 0.0;
    CVec u(z.size(), Cplx{0.0, 0.0});
    for (std::size_t k = 0; k < z.size(); ++k) {
        // Central difference along the real axis of coordinate k; values are
        // holomorphic, so this is the full complex partial derivative.
        const auto central = [&](double step) {
            u[k] = Cplx{step, 0.0};
            const Cplx plus = g(u);
            u[k] = Cplx{-step, 0.0};
            const Cplx minus = g(u);
            u[k] = Cplx{0.0, 0.0};
            return (plus - minus) / (2.0 * step);
        };
        const Cplx d_h = central(h);
        const Cplx d_h2 = central(h / 2.0);
        const Cplx d = (4.0 * d_h2 - d_h) / 3.0;
        acc += std::norm(d);
    }
    return std::sqrt(acc);
}

double pseudohyperbolic(const CVec& z, const CVec& w) {
    if (z.size() != w.size())
        throw ConsistencyError("pseudohyperbolic: dimension mismatch");
    const double zn = norm_sq(z), wn = norm_sq(w);
    if (zn >= 1.0 || wn >= 1.0)
        throw DomainError("pseudohyperbolic: points must be inside the ball");
    const Cplx den = 1.0 - inner(z, w);
    const double ratio = (1.0 - zn) * (1.0 - wn) / std::norm(den);
    // Roundoff can push the radicand a hair outside [0,1]; clamp.
    const double radicand = std::min(1.0, std::max(0.0, 1.0 - ratio));
    return std::sqrt(radicand);
}

}  // namespace blochlab::moebius
