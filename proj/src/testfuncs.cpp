#include "blochlab/testfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace blochlab::testfuncs {

namespace {

constexpr double kTailBudget = 1e-9;
constexpr int kExtraTerms = 16;
constexpr double kInvPhi = 0.6180339887498949;

double golden_extremum(const std::function<double(double)>& f, double lo,
                       double hi, bool maximize) {
    const double sign = maximize ? 1.0 : -1.0;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = sign * f(x1), f2 = sign * f(x2);
    double best = std::max(f1, f2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = sign * f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = sign * f(x1);
        }
        best = std::max(best, std::max(f1, f2));
    }
    return sign * best;
}

// z^n for large integer n; underflows cleanly to 0 for |z| < 1 and huge n.
Cplx cpow(Cplx z, std::uint64_t n) {
    return std::pow(z, static_cast<double>(n));
}

double rpow(double t, std::uint64_t n) {
    return std::pow(t, static_cast<double>(n));
}

}  // namespace

GSeries build_g(const weights::NormalWeight& nu, int k_max,
                double eval_radius_max) {
    if (k_max < 8 || k_max > 256)
        throw DomainError("build_g: k_max must lie in [8, 256]");
    if (!(eval_radius_max > 0.0) || eval_radius_max > 1.0 - weights::kEdgeGuard)
        throw DomainError("build_g: eval_radius_max must lie in (0, 1 - 1e-6]");
    if (!weights::check_normality(nu).all())
        throw DomainError("build_g: weight fails the normality check");

    GSeries g;
    g.nu_ = nu;
    g.k_max_ = k_max;
    g.radius_ = eval_radius_max;
    g.k0_ = static_cast<int>(std::floor(std::log2(1.0 / nu(nu.delta()))));

    // Resolve the gaps 1 - r_k with r_k = nu^{-1}(2^-k) as far as double
    // precision allows; beyond that point the terms are covered by the
    // analytic remainder below. The exponent floor(1 / (1 - r_k)) needs the
    // gap itself: for deep k the rounded radius 1 - gap carries too few bits,
    // so the power family takes a closed-form cancellation-free path and only
    // table weights fall back to the generic inverse (their domain ends well
    // before the cancellation regime).
    struct Raw {
        int k;
        std::uint64_t n;
        double gap;
    };
    const auto desc = nu.describe();
    const bool closed_form = desc.at("family") == "power";
    const double alpha = closed_form ? desc.at("alpha").get<double>() : 0.0;
    std::vector<Raw> raw;
    for (int k = g.k0_ + 1; k <= k_max + kExtraTerms; ++k) {
        const double y = std::ldexp(1.0, -k);
        double gap;
        if (closed_form) {
            // (1 - t^2)^alpha = y gives 1 - t = u / (1 + sqrt(1 - u)) with
            // u = y^{1/alpha}; stop where the generic inverse would, at the
            // resolution of the double grid in t.
            const double u = std::exp2(-static_cast<double>(k) / alpha);
            if (u < 1e-15) break;
            gap = u / (1.0 + std::sqrt(std::max(0.0, 1.0 - u)));
        } else {
            double rk;
            try {
                rk = weights::weight_inverse(nu, y);
            } catch (const RangeError&) {
                break;
            }
            if (rk >= 1.0) break;
            gap = 1.0 - rk;
        }
        raw.push_back(Raw{k, static_cast<std::uint64_t>(std::floor(1.0 / gap)), gap});
    }
    if (raw.empty())
        throw TruncationError("build_g: no series terms are resolvable for this weight");

    // Merge equal exponents (the formal series sums every k) and keep the
    // stored part at k <= k_max.
    for (const Raw& t : raw) {
        if (t.k > k_max) break;
        if (!g.terms_.empty() && g.terms_.back().n == t.n) {
            g.terms_.back().coeff += std::ldexp(1.0, t.k);
        } else {
            g.terms_.push_back(GTerm{t.k, t.n, std::ldexp(1.0, t.k)});
        }
    }

    // Certified bound on every term not stored: the directly computed ones
    // past k_max, plus a geometric remainder anchored at the last resolvable
    // term. The exponent condition nu(t) / (1-t)^b nondecreasing gives
    // 1 - r_{k+1} <= (1 - r_k) 2^{-1/b}, hence consecutive exponents grow by
    // at least D = (2^{1/b} - 1) / (1 - r_last) - 1 and consecutive terms
    // shrink by at least q = 2 r^D.
    const double log_r = std::log(eval_radius_max);
    const double ln2 = std::log(2.0);
    double bound = 0.0;
    for (const Raw& t : raw) {
        if (t.k <= k_max) continue;
        bound += std::exp(t.k * ln2 + static_cast<double>(t.n) * log_r) *
                     (1.0 + 1e-10) +
                 1e-300;
    }
    const Raw& last = raw.back();
    const double growth = std::exp2(1.0 / nu.exponent_b()) - 1.0;
    const double gap_floor = growth / last.gap - 1.0;
    const double q = gap_floor > 0.0 ? 2.0 * std::exp(gap_floor * log_r) : 2.0;
    if (q > 0.5) {
        std::ostringstream msg;
        msg << "build_g: tail bound not achievable at eval_radius_max "
            << eval_radius_max << " (term ratio " << q
            << "); reduce the radius or raise k_max";
        throw TruncationError(msg.str());
    }
    const double anchor =
        std::exp(last.k * ln2 + static_cast<double>(last.n) * log_r);
    bound += anchor * q / (1.0 - q) * (1.0 + 1e-10) + 1e-300;
    if (bound >= kTailBudget) {
        std::ostringstream msg;
        msg << "build_g: certified tail " << bound << " exceeds " << kTailBudget
            << " at eval_radius_max " << eval_radius_max
            << "; reduce the radius or raise k_max";
        throw TruncationError(msg.str());
    }
    g.tail_bound_ = bound;

    for (std::size_t i = 1; i < g.terms_.size(); ++i)
        if (g.terms_[i].n <= g.terms_[i - 1].n)
            throw ConsistencyError("build_g: exponents failed to increase after merging");
    return g;
}

nlohmann::ordered_json GSeries::summary() const {
    nlohmann::ordered_json j;
    j["k0"] = k0_;
    j["k_max"] = k_max_;
    j["eval_radius_max"] = radius_;
    j["tail_bound"] = tail_bound_;
    j["term_count"] = terms_.size();
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < terms_.size() && i < 10; ++i) {
        nlohmann::ordered_json t;
        t["k"] = terms_[i].k;
        t["n"] = terms_[i].n;
        t["coeff"] = terms_[i].coeff;
        arr.push_back(std::move(t));
    }
    j["leading_terms"] = std::move(arr);
    return j;
}

namespace {

void require_radius(const GSeries& g, double magnitude) {
    if (magnitude > g.eval_radius_max() * (1.0 + 1e-12))
        throw DomainError("series argument lies outside the certified radius");
}

}  // namespace

Cplx g_eval(const GSeries& g, Cplx z) {
    require_radius(g, std::abs(z));
    Cplx acc{1.0, 0.0};
    for (const GTerm& t : g.terms()) acc += t.coeff * cpow(z, t.n);
    return acc;
}

double g_eval_real(const GSeries& g, double t) {
    require_radius(g, std::abs(t));
    double acc = 1.0;
    for (const GTerm& term : g.terms()) acc += term.coeff * rpow(t, term.n);
    return acc;
}

Cplx g_antiderivative(const GSeries& g, Cplx eta) {
    require_radius(g, std::abs(eta));
    Cplx acc = eta;
    for (const GTerm& t : g.terms())
        acc += t.coeff * cpow(eta, t.n + 1) / static_cast<double>(t.n + 1);
    return acc;
}

double g_antiderivative_real(const GSeries& g, double r) {
    require_radius(g, std::abs(r));
    double acc = r;
    for (const GTerm& t : g.terms())
        acc += t.coeff * rpow(r, t.n + 1) / static_cast<double>(t.n + 1);
    return acc;
}

TestConstants constants(const GSeries& g, int grid_points) {
    if (grid_points < 16)
        throw DomainError("constants: grid_points must be at least 16");
    const double hi = g.eval_radius_max();
    const auto& nu = g.nu();
    const auto weighted = [&](double t) { return nu(t) * g_eval_real(g, t); };

    // Grid extrema of nu * g, polished over the bracketing intervals.
    double c1 = weighted(0.0), c2 = c1;
    double arg_min = 0.0, arg_max = 0.0;
    for (int i = 1; i <= grid_points; ++i) {
        const double t = hi * static_cast<double>(i) / grid_points;
        const double v = weighted(t);
        if (v < c1) { c1 = v; arg_min = t; }
        if (v > c2) { c2 = v; arg_max = t; }
    }
    const double h = hi / grid_points;
    c1 = std::min(c1, golden_extremum(weighted, std::max(0.0, arg_min - h),
                                      std::min(hi, arg_min + h), false));
    c2 = std::max(c2, golden_extremum(weighted, std::max(0.0, arg_max - h),
                                      std::min(hi, arg_max + h), true));

    TestConstants out;
    out.C1 = c1;
    out.C2 = c2;
    if (!(out.C1 > 0.0) || out.C1 > out.C2)
        throw ConsistencyError("constants: expected 0 < C1 <= C2");

    // Unit-integral radius by bisection; the antiderivative is strictly
    // increasing in r.
    if (g_antiderivative_real(g, hi) < 1.0)
        throw RangeError("constants: the integral of g stays below 1 inside "
                         "the certified radius");
    double lo_r = 0.0, hi_r = hi;
    for (int it = 0; it < 200 && hi_r - lo_r > 1e-16; ++it) {
        const double mid = 0.5 * (lo_r + hi_r);
        (g_antiderivative_real(g, mid) < 1.0 ? lo_r : hi_r) = mid;
    }
    out.r1_unit_integral = 0.5 * (lo_r + hi_r);
    if (std::abs(g_antiderivative_real(g, out.r1_unit_integral) - 1.0) > 1e-9)
        throw AccuracyError("constants: unit-integral radius did not converge",
                            std::abs(g_antiderivative_real(g, out.r1_unit_integral) - 1.0));

    out.r1_half_weight = weights::weight_inverse(nu, 0.5);

    // C3 = sup of int_0^r g / int_0^{r^2} g over [r1, eval_radius_max].
    const auto ratio = [&](double r) {
        const double den = g_antiderivative_real(g, r * r);
        if (den < 1e-300)
            throw ConsistencyError("constants: vanishing denominator in the "
                                   "integral ratio at r = " + std::to_string(r));
        return g_antiderivative_real(g, r) / den;
    };
    double c3 = 0.0, arg3 = out.r1_unit_integral;
    for (int i = 0; i <= grid_points; ++i) {
        const double r = out.r1_unit_integral +
                         (hi - out.r1_unit_integral) * static_cast<double>(i) /
                             grid_points;
        const double v = ratio(r);
        if (v > c3) { c3 = v; arg3 = r; }
    }
    const double h3 = (hi - out.r1_unit_integral) / grid_points;
    out.C3 = std::max(
        c3, golden_extremum(ratio, std::max(out.r1_unit_integral, arg3 - h3),
                            std::min(hi, arg3 + h3), true));
    return out;
}

Cplx beta(const GSeries& g, const CVec& w, const CVec& z) {
    if (w.size() != z.size()) throw ConsistencyError("beta: dimension mismatch");
    return g_antiderivative(g, inner(z, w));
}

Cplx gamma(const GSeries& g, const CVec& w, const CVec& z) {
    if (w.size() != z.size()) throw ConsistencyError("gamma: dimension mismatch");
    const double wn = norm_sq(w);
    if (wn == 0.0) throw DomainError("gamma: w must be nonzero");
    const Cplx num = g_antiderivative(g, inner(z, w));
    return num * num / g_antiderivative(g, Cplx{wn, 0.0});
}

BetaFunction::BetaFunction(GSeries g, CVec w) : g_(std::move(g)), w_(std::move(w)) {
    if (w_.empty()) throw DomainError("BetaFunction: empty direction");
    if (norm(w_) > g_.eval_radius_max())
        throw DomainError("BetaFunction: ||w|| must stay within the certified radius");
}

int BetaFunction::dim() const { return static_cast<int>(w_.size()); }

Cplx BetaFunction::value(const CVec& z) const {
    return g_antiderivative(g_, inner(z, w_));
}

CVec BetaFunction::gradient(const CVec& z) const {
    const Cplx gv = g_eval(g_, inner(z, w_));
    CVec out(w_.size());
    for (std::size_t j = 0; j < w_.size(); ++j) out[j] = gv * std::conj(w_[j]);
    return out;
}

Cplx BetaFunction::radial(const CVec& z) const {
    const Cplx eta = inner(z, w_);
    return g_eval(g_, eta) * eta;
}

GammaFunction::GammaFunction(GSeries g, CVec w)
    : g_(std::move(g)), w_(std::move(w)) {
    if (w_.empty()) throw DomainError("GammaFunction: empty direction");
    const double wn = norm(w_);
    if (wn == 0.0) throw DomainError("GammaFunction: w must be nonzero");
    if (wn > g_.eval_radius_max())
        throw DomainError("GammaFunction: ||w|| must stay within the certified radius");
    denom_ = g_antiderivative(g_, Cplx{wn * wn, 0.0});
}

int GammaFunction::dim() const { return static_cast<int>(w_.size()); }

Cplx GammaFunction::value(const CVec& z) const {
    const Cplx num = g_antiderivative(g_, inner(z, w_));
    return num * num / denom_;
}

CVec GammaFunction::gradient(const CVec& z) const {
    const Cplx eta = inner(z, w_);
    const Cplx scale = 2.0 * g_antiderivative(g_, eta) * g_eval(g_, eta) / denom_;
    CVec out(w_.size());
    for (std::size_t j = 0; j < w_.size(); ++j) out[j] = scale * std::conj(w_[j]);
    return out;
}

Cplx GammaFunction::radial(const CVec& z) const {
    const Cplx eta = inner(z, w_);
    return 2.0 * g_antiderivative(g_, eta) * g_eval(g_, eta) * eta / denom_;
}

}  // namespace blochlab::testfuncs
