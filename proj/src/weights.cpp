#include "blochlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "blochlab/quadrature.hpp"

namespace blochlab::weights {

namespace {

// Maximizes a scalar function on [lo, hi] by golden-section search; assumes
// the caller already bracketed the peak roughly (used to sharpen grid maxima).
template <typename F>
double golden_max(const F& f, double lo, double hi, int iters = 80) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && b - a > 1e-14; ++i) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    return std::max({f(a), f1, f2, f(b)});
}

// Shape-preserving cubic Hermite slopes (Fritsch-Carlson).
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n == 2) {
        d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
        return d;
    }
    std::vector<double> h(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        slope[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    const auto endpoint = [](double h0, double h1, double s0, double s1) {
        double d0 = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d0 * s0 <= 0.0) {
            d0 = 0.0;
        } else if (s0 * s1 <= 0.0 && std::abs(d0) > 3.0 * std::abs(s0)) {
            d0 = 3.0 * s0;
        }
        return d0;
    };
    d[0] = endpoint(h[0], h[1], slope[0], slope[1]);
    d[n - 1] = endpoint(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
    return d;
}

}  // namespace

struct NormalWeight::Impl {
    enum class Family { power, table } family = Family::power;
    double alpha = 1.0;
    // Table data.
    std::vector<double> knot_t, knot_v, knot_d;

    double eval(double t) const {
        if (family == Family::power) return std::pow(1.0 - t * t, alpha);
        const auto& x = knot_t;
        if (t >= x.back()) {
            return knot_v.back() + knot_d.back() * (t - x.back());
        }
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t i = (it == x.begin()) ? 0 : (it - x.begin() - 1);
        const double h = x[i + 1] - x[i];
        const double s = (t - x[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        return h00 * knot_v[i] + h * h10 * knot_d[i] + h01 * knot_v[i + 1] +
               h * h11 * knot_d[i + 1];
    }
};

NormalWeight NormalWeight::power(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("power weight: alpha must be positive");
    NormalWeight w;
    auto impl = std::make_shared<Impl>();
    impl->family = Impl::Family::power;
    impl->alpha = alpha;
    w.impl_ = std::move(impl);
    // The ratio mu_alpha(t)/(1-t)^{alpha/2} = (1+t)^alpha (1-t)^{alpha/2}
    // peaks at t = 1/3 for every alpha, so monotone decay starts there.
    w.delta_ = 1.0 / 3.0;
    w.a_ = alpha / 2.0;
    w.b_ = alpha + 0.5;
    w.tail_from_ = 0.0;
    w.integral_divergent_ = alpha >= 1.0;
    return w;
}

NormalWeight NormalWeight::table(std::vector<std::pair<double, double>> knots,
                                 double delta, double a, double b,
                                 bool integral_divergent,
                                 double tail_monotone_from) {
    if (knots.size() < 2) throw DomainError("table weight: need at least two knots");
    std::sort(knots.begin(), knots.end());
    if (knots.front().first != 0.0)
        throw DomainError("table weight: knots must start at t = 0");
    auto impl = std::make_shared<Impl>();
    impl->family = Impl::Family::table;
    for (const auto& [t, v] : knots) {
        if (!impl->knot_t.empty() && t <= impl->knot_t.back())
            throw DomainError("table weight: knot positions must be strictly increasing");
        if (t < 0.0 || t >= 1.0)
            throw DomainError("table weight: knot positions must lie in [0, 1)");
        if (!(v > 0.0)) throw DomainError("table weight: knot values must be positive");
        impl->knot_t.push_back(t);
        impl->knot_v.push_back(v);
    }
    impl->knot_d = pchip_slopes(impl->knot_t, impl->knot_v);
    if (!(a >= 0.0) || !(b > a))
        throw DomainError("table weight: need exponents 0 <= a < b");
    if (delta < 0.0 || delta >= 1.0 || tail_monotone_from < 0.0 ||
        tail_monotone_from >= 1.0)
        throw DomainError("table weight: delta and tail start must lie in [0, 1)");
    NormalWeight w;
    w.impl_ = std::move(impl);
    w.delta_ = delta;
    w.a_ = a;
    w.b_ = b;
    w.tail_from_ = tail_monotone_from;
    w.integral_divergent_ = integral_divergent;
    return w;
}

double NormalWeight::operator()(double t) const {
    if (!(t >= 0.0) || t >= 1.0)
        throw DomainError("weight evaluation requires 0 <= t < 1");
    return impl_->eval(t);
}

nlohmann::ordered_json NormalWeight::describe() const {
    nlohmann::ordered_json j;
    if (impl_->family == Impl::Family::power) {
        j["family"] = "power";
        j["alpha"] = impl_->alpha;
    } else {
        j["family"] = "table";
        auto knots = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < impl_->knot_t.size(); ++i)
            knots.push_back({impl_->knot_t[i], impl_->knot_v[i]});
        j["knots"] = std::move(knots);
        j["delta"] = delta_;
        j["a"] = a_;
        j["b"] = b_;
        j["integral_divergent"] = integral_divergent_;
        j["tail_monotone_from"] = tail_from_;
    }
    return j;
}

NormalWeight NormalWeight::from_json(const nlohmann::json& j) {
    try {
        const std::string family = j.at("family").get<std::string>();
        if (family == "power") {
            return power(j.at("alpha").get<double>());
        }
        if (family == "table") {
            std::vector<std::pair<double, double>> knots;
            for (const auto& k : j.at("knots")) {
                if (!k.is_array() || k.size() != 2)
                    throw ConfigError("weight: each knot must be a [t, value] pair");
                knots.emplace_back(k[0].get<double>(), k[1].get<double>());
            }
            return table(std::move(knots), j.value("delta", 0.0),
                         j.at("a").get<double>(), j.at("b").get<double>(),
                         j.at("integral_divergent").get<bool>(),
                         j.value("tail_monotone_from", 0.0));
        }
        throw ConfigError("weight: unknown family '" + family + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("weight: malformed config: ") + e.what());
    }
}

NormalityReport check_normality(const NormalWeight& w, int grid_points) {
    if (grid_points < 8) throw DomainError("check_normality: grid too coarse");
    const double delta = w.delta();
    const double span = 1.0 - delta - kEdgeGuard;
    if (span <= 0.0) throw DomainError("check_normality: delta too close to 1");

    const int n = grid_points;
    std::vector<double> ts(n + 1), r1(n + 1), r2(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = delta + span * static_cast<double>(k) / n;
        const double v = w(t);
        if (!(v > 0.0)) {
            std::ostringstream msg;
            msg << "weight is not positive at t = " << t << " (value " << v << ")";
            throw DomainError(msg.str());
        }
        ts[k] = t;
        r1[k] = v / std::pow(1.0 - t, w.exponent_a());
        r2[k] = v / std::pow(1.0 - t, w.exponent_b());
    }

    NormalityReport rep;
    rep.positive = true;
    constexpr double kSlack = 1e-9;
    double worst1 = 0.0, worst2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double inc = (r1[k + 1] - r1[k]) / std::max(r1[k], 1e-300);
        if (inc > worst1) {
            worst1 = inc;
            rep.t_worst_w1 = ts[k + 1];
        }
        const double dec = (r2[k] - r2[k + 1]) / std::max(r2[k], 1e-300);
        if (dec > worst2) {
            worst2 = dec;
            rep.t_worst_w2 = ts[k + 1];
        }
    }
    rep.worst_w1_violation = worst1;
    rep.worst_w2_violation = worst2;
    rep.w1_monotone = worst1 <= kSlack;
    rep.w2_monotone = worst2 <= kSlack;

    // Decay towards 0: the ratio must end at its grid minimum, well below its
    // peak. Divergence: it must end at its grid maximum, well above its start.
    const double max1 = *std::max_element(r1.begin(), r1.end());
    const double min1 = *std::min_element(r1.begin(), r1.end());
    rep.w1_limit = r1.back() <= 0.5 * max1 && r1.back() <= min1 * (1.0 + kSlack);
    const double max2 = *std::max_element(r2.begin(), r2.end());
    rep.w2_divergent =
        r2.back() >= 10.0 * r2.front() && r2.back() >= max2 * (1.0 - kSlack);
    return rep;
}

double integral_reciprocal(const NormalWeight& w, double r) {
    if (!(r >= 0.0) || r >= 1.0)
        throw DomainError("integral_reciprocal requires 0 <= r < 1");
    if (r == 0.0) return 0.0;
    // (1 - r) / w(r) estimates the last-slice contribution, which sets the
    // scale of the whole integral for steep weights near the boundary; the
    // tolerance switches from absolute to relative there, since 1e-9 absolute
    // is below double resolution once the value reaches ~1e8.
    const double scale = std::max(1.0, (1.0 - r) / w(r));
    return integrate_real([&w](double t) { return 1.0 / w(t); }, 0.0, r,
                          1e-9 * scale);
}

double weight_inverse(const NormalWeight& w, double y) {
    const double lo0 = w.tail_monotone_from();
    const double hi0 = 1.0 - 5e-16;
    const double top = w(lo0), bottom = w(hi0);
    if (!(y <= top) || !(y >= bottom)) {
        std::ostringstream msg;
        msg << "weight_inverse: y = " << y << " outside attained tail range ["
            << bottom << ", " << top << "]";
        throw RangeError(msg.str());
    }
    double lo = lo0, hi = hi0;
    for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (w(mid) >= y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double t = 0.5 * (lo + hi);
    const double err = std::abs(w(t) - y);
    if (err > 1e-12)
        throw AccuracyError("weight_inverse: could not match target value", err);
    return t;
}

RMuDetails r_mu_details(const NormalWeight& w) {
    RMuDetails d;
    const double delta = w.delta();

    if (delta == 0.0) {
        d.m_mu = w(0.0);
    } else {
        double mn = w(0.0);
        for (int k = 1; k <= 512; ++k)
            mn = std::min(mn, w(delta * static_cast<double>(k) / 512.0));
        d.m_mu = mn;
    }

    const double hi = 1.0 - kEdgeGuard;
    double mx = 0.0, arg = 0.0;
    for (int k = 0; k <= 2048; ++k) {
        const double t = hi * static_cast<double>(k) / 2048.0;
        const double v = w(t);
        if (v > mx) {
            mx = v;
            arg = t;
        }
    }
    const double lo_b = std::max(0.0, arg - hi / 2048.0);
    const double hi_b = std::min(hi, arg + hi / 2048.0);
    d.big_m_mu = std::max(mx, golden_max([&w](double t) { return w(t); }, lo_b, hi_b));

    d.r_mu = delta * d.big_m_mu / d.m_mu + 1.0 - delta;

    // The product mu(r) * I(r) decays towards the boundary for both exponent
    // conditions, so the verification sweep stops at 0.999 where the integral
    // is still resolvable at absolute tolerance.
    double worst = 0.0;
    const double sweep_hi = 0.999;
    const auto probe = [&](double r) {
        if (r <= 0.0 || r > sweep_hi) return;
        worst = std::max(worst, w(r) * integral_reciprocal(w, r));
    };
    for (int k = 1; k <= 128; ++k) probe(sweep_hi * static_cast<double>(k) / 128.0);
    for (int j = 1; j <= 10; ++j) probe(1.0 - std::pow(2.0, -j));
    d.max_weighted_integral = worst;
    if (worst >= d.r_mu) {
        std::ostringstream msg;
        msg << "weighted integral bound violated: observed " << worst
            << " but R_mu = " << d.r_mu;
        throw ConsistencyError(msg.str());
    }
    return d;
}

double r_mu_constant(const NormalWeight& w) { return r_mu_details(w).r_mu; }

}  // namespace blochlab::weights
