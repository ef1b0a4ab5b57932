#include <algorithm>
#include <sstream>

#include "blochlab/holo.hpp"

namespace blochlab::holo {

namespace {

// Power tables z_j^e for e up to maxexp[j]; shared by the evaluation paths.
std::vector<std::vector<Cplx>> power_table(const CVec& z,
                                           const std::vector<unsigned>& maxexp) {
    std::vector<std::vector<Cplx>> pows(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        pows[j].resize(maxexp[j] + 1);
        pows[j][0] = Cplx{1.0, 0.0};
        for (unsigned e = 1; e <= maxexp[j]; ++e) pows[j][e] = pows[j][e - 1] * z[j];
    }
    return pows;
}

void require_dim(const CVec& z, int dim, const char* who) {
    if (static_cast<int>(z.size()) != dim) {
        std::ostringstream msg;
        msg << who << ": point has dimension " << z.size() << ", expected " << dim;
        throw DomainError(msg.str());
    }
}

}  // namespace

unsigned total_degree(const MultiIndex& a) {
    unsigned s = 0;
    for (unsigned e : a) s += e;
    return s;
}

Cplx Function::radial(const CVec& z) const {
    const CVec g = gradient(z);
    Cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < z.size(); ++k) s += z[k] * g[k];
    return s;
}

PolyFunction::PolyFunction(int dim) : dim_(dim) {
    if (dim < 1) throw DomainError("PolyFunction: dimension must be positive");
}

PolyFunction PolyFunction::constant(int dim, Cplx c) {
    PolyFunction p(dim);
    p.set_coefficient(MultiIndex(dim, 0), c);
    return p;
}

PolyFunction PolyFunction::coordinate(int dim, int k) {
    if (k < 0 || k >= dim) throw DomainError("coordinate: index out of range");
    MultiIndex a(dim, 0);
    a[k] = 1;
    return monomial(dim, std::move(a), Cplx{1.0, 0.0});
}

PolyFunction PolyFunction::monomial(int dim, MultiIndex a, Cplx c) {
    PolyFunction p(dim);
    p.set_coefficient(a, c);
    return p;
}

unsigned PolyFunction::degree() const {
    unsigned d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, total_degree(a));
    return d;
}

Cplx PolyFunction::coefficient(const MultiIndex& a) const {
    const auto it = terms_.find(a);
    return it == terms_.end() ? Cplx{0.0, 0.0} : it->second;
}

void PolyFunction::set_coefficient(const MultiIndex& a, Cplx c) {
    if (static_cast<int>(a.size()) != dim_)
        throw DomainError("set_coefficient: multi-index has wrong length");
    if (c == Cplx{0.0, 0.0}) {
        terms_.erase(a);
    } else {
        terms_[a] = c;
    }
}

void PolyFunction::max_exponents(std::vector<unsigned>& out) const {
    out.assign(dim_, 0);
    for (const auto& [a, c] : terms_)
        for (int j = 0; j < dim_; ++j) out[j] = std::max(out[j], a[j]);
}

Cplx PolyFunction::evaluate(const CVec& z) const {
    require_dim(z, dim_, "evaluate");
    std::vector<unsigned> maxexp;
    max_exponents(maxexp);
    const auto pows = power_table(z, maxexp);
    Cplx s{0.0, 0.0};
    for (const auto& [a, c] : terms_) {
        Cplx m = c;
        for (int j = 0; j < dim_; ++j)
            if (a[j]) m *= pows[j][a[j]];
        s += m;
    }
    return s;
}

CVec PolyFunction::gradient(const CVec& z) const {
    require_dim(z, dim_, "gradient");
    std::vector<unsigned> maxexp;
    max_exponents(maxexp);
    const auto pows = power_table(z, maxexp);
    CVec g(dim_, Cplx{0.0, 0.0});
    for (const auto& [a, c] : terms_) {
        for (int k = 0; k < dim_; ++k) {
            if (!a[k]) continue;
            Cplx m = c * static_cast<double>(a[k]);
            for (int j = 0; j < dim_; ++j) {
                const unsigned e = (j == k) ? a[j] - 1 : a[j];
                if (e) m *= pows[j][e];
            }
            g[k] += m;
        }
    }
    return g;
}

Cplx PolyFunction::radial(const CVec& z) const {
    require_dim(z, dim_, "radial");
    std::vector<unsigned> maxexp;
    max_exponents(maxexp);
    const auto pows = power_table(z, maxexp);
    Cplx s{0.0, 0.0};
    for (const auto& [a, c] : terms_) {
        const unsigned deg = total_degree(a);
        if (!deg) continue;
        Cplx m = c * static_cast<double>(deg);
        for (int j = 0; j < dim_; ++j)
            if (a[j]) m *= pows[j][a[j]];
        s += m;
    }
    return s;
}

PolyFunction PolyFunction::partial(int k) const {
    if (k < 0 || k >= dim_) throw DomainError("partial: index out of range");
    PolyFunction p(dim_);
    for (const auto& [a, c] : terms_) {
        if (!a[k]) continue;
        MultiIndex b = a;
        --b[k];
        p.set_coefficient(b, p.coefficient(b) + c * static_cast<double>(a[k]));
    }
    return p;
}

PolyFunction PolyFunction::radial_derivative() const {
    PolyFunction p(dim_);
    for (const auto& [a, c] : terms_) {
        const unsigned deg = total_degree(a);
        if (deg) p.set_coefficient(a, c * static_cast<double>(deg));
    }
    return p;
}

std::map<unsigned, PolyFunction> PolyFunction::homogeneous_parts() const {
    std::map<unsigned, PolyFunction> parts;
    for (const auto& [a, c] : terms_) {
        const unsigned deg = total_degree(a);
        auto it = parts.find(deg);
        if (it == parts.end()) it = parts.emplace(deg, PolyFunction(dim_)).first;
        it->second.set_coefficient(a, c);
    }
    return parts;
}

PolyFunction PolyFunction::operator+(const PolyFunction& o) const {
    if (o.dim_ != dim_) throw DomainError("polynomial sum: dimension mismatch");
    PolyFunction p = *this;
    for (const auto& [a, c] : o.terms_) p.set_coefficient(a, p.coefficient(a) + c);
    return p;
}

PolyFunction PolyFunction::operator-(const PolyFunction& o) const {
    if (o.dim_ != dim_) throw DomainError("polynomial difference: dimension mismatch");
    PolyFunction p = *this;
    for (const auto& [a, c] : o.terms_) p.set_coefficient(a, p.coefficient(a) - c);
    return p;
}

PolyFunction PolyFunction::operator*(const PolyFunction& o) const {
    if (o.dim_ != dim_) throw DomainError("polynomial product: dimension mismatch");
    PolyFunction p(dim_);
    MultiIndex ab(dim_);
    for (const auto& [a, ca] : terms_) {
        for (const auto& [b, cb] : o.terms_) {
            for (int j = 0; j < dim_; ++j) ab[j] = a[j] + b[j];
            p.set_coefficient(ab, p.coefficient(ab) + ca * cb);
        }
    }
    return p;
}

PolyFunction PolyFunction::operator*(Cplx s) const {
    PolyFunction p(dim_);
    if (s == Cplx{0.0, 0.0}) return p;
    for (const auto& [a, c] : terms_) p.terms_[a] = c * s;
    return p;
}

nlohmann::ordered_json PolyFunction::to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [a, c] : terms_) {
        nlohmann::ordered_json t;
        t["exponents"] = a;
        t["re"] = c.real();
        t["im"] = c.imag();
        arr.push_back(std::move(t));
    }
    return arr;
}

PolyFunction PolyFunction::from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw ConfigError("polynomial: expected a non-empty array of terms");
    int dim = -1;
    PolyFunction p(1);
    try {
        for (const auto& t : j) {
            const auto& ex = t.at("exponents");
            if (!ex.is_array() || ex.empty())
                throw ConfigError("polynomial: exponents must be a non-empty array");
            MultiIndex a;
            for (const auto& e : ex) {
                if (!e.is_number_integer() || e.get<long long>() < 0)
                    throw ConfigError("polynomial: exponents must be non-negative integers");
                a.push_back(e.get<unsigned>());
            }
            if (dim < 0) {
                dim = static_cast<int>(a.size());
                p = PolyFunction(dim);
            } else if (static_cast<int>(a.size()) != dim) {
                throw ConfigError("polynomial: inconsistent exponent lengths");
            }
            const Cplx c{t.at("re").get<double>(), t.value("im", 0.0)};
            p.set_coefficient(a, p.coefficient(a) + c);  // duplicates merge
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("polynomial: malformed term: ") + e.what());
    }
    return p;
}

PolyFunction compose(const PolyFunction& f,
                     const std::vector<PolyFunction>& components,
                     unsigned degree_cap) {
    if (static_cast<int>(components.size()) != f.dim())
        throw DomainError("compose: need one component per coordinate of f");
    const int d = components.front().dim();
    unsigned cdeg = 0;
    for (const auto& c : components) {
        if (c.dim() != d) throw DomainError("compose: components have mixed dimensions");
        cdeg = std::max(cdeg, c.degree());
    }
    const unsigned bound = f.degree() * cdeg;
    if (bound > degree_cap) {
        std::ostringstream msg;
        msg << "compose: degree bound " << bound << " exceeds cap " << degree_cap;
        throw TruncationError(msg.str());
    }

    std::vector<unsigned> maxexp;
    f.max_exponents(maxexp);
    std::vector<std::vector<PolyFunction>> pows(components.size());
    for (std::size_t j = 0; j < components.size(); ++j) {
        pows[j].reserve(maxexp[j] + 1);
        pows[j].push_back(PolyFunction::constant(d, Cplx{1.0, 0.0}));
        for (unsigned e = 1; e <= maxexp[j]; ++e)
            pows[j].push_back(pows[j].back() * components[j]);
    }

    PolyFunction out(d);
    for (const auto& [a, c] : f.terms()) {
        PolyFunction m = PolyFunction::constant(d, c);
        for (std::size_t j = 0; j < components.size(); ++j)
            if (a[j]) m = m * pows[j][a[j]];
        out = out + m;
    }
    return out;
}

OrthonormalSystem::OrthonormalSystem(int ambient_dim, std::vector<CVec> vectors)
    : ambient_dim_(ambient_dim), vectors_(std::move(vectors)) {
    if (ambient_dim_ < 1 || vectors_.empty() ||
        static_cast<int>(vectors_.size()) > ambient_dim_)
        throw DomainError("orthonormal system: need 1..ambient_dim vectors");
    for (const auto& v : vectors_)
        if (static_cast<int>(v.size()) != ambient_dim_)
            throw DomainError("orthonormal system: vector has wrong dimension");
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        for (std::size_t j = i; j < vectors_.size(); ++j) {
            const Cplx g = inner(vectors_[i], vectors_[j]);
            const Cplx expect = (i == j) ? Cplx{1.0, 0.0} : Cplx{0.0, 0.0};
            if (std::abs(g - expect) > 1e-12) {
                std::ostringstream msg;
                msg << "orthonormal system: Gram entry (" << i << "," << j
                    << ") off by " << std::abs(g - expect);
                throw ConsistencyError(msg.str());
            }
        }
    }
}

OrthonormalSystem OrthonormalSystem::coordinate_axes(int ambient_dim,
                                                     const std::vector<int>& which) {
    std::vector<CVec> vecs;
    for (int k : which) {
        if (k < 0 || k >= ambient_dim)
            throw DomainError("coordinate_axes: index out of range");
        CVec e(ambient_dim, Cplx{0.0, 0.0});
        e[k] = Cplx{1.0, 0.0};
        vecs.push_back(std::move(e));
    }
    return {ambient_dim, std::move(vecs)};
}

OrthonormalSystem OrthonormalSystem::random(int ambient_dim, int count, Rng& rng) {
    if (count < 1 || count > ambient_dim)
        throw DomainError("random orthonormal system: bad count");
    std::vector<CVec> vecs;
    while (static_cast<int>(vecs.size()) < count) {
        CVec v(ambient_dim);
        for (auto& c : v) c = rng.complex_normal();
        // Gram-Schmidt against the accepted vectors; retry on near-collapse.
        for (const auto& u : vecs) {
            const Cplx p = inner(v, u);
            for (int k = 0; k < ambient_dim; ++k) v[k] -= p * u[k];
        }
        const double n = norm(v);
        if (n < 1e-6) continue;
        for (auto& c : v) c /= n;
        vecs.push_back(std::move(v));
    }
    return {ambient_dim, std::move(vecs)};
}

CVec OrthonormalSystem::embed(const CVec& u) const {
    if (u.size() != vectors_.size())
        throw DomainError("embed: point dimension must match system size");
    CVec z(ambient_dim_, Cplx{0.0, 0.0});
    for (std::size_t j = 0; j < vectors_.size(); ++j)
        for (int k = 0; k < ambient_dim_; ++k) z[k] += u[j] * vectors_[j][k];
    return z;
}

PolyFunction restrict(const PolyFunction& f, const OrthonormalSystem& x) {
    if (x.ambient_dim() != f.dim())
        throw DomainError("restrict: system ambient dimension must match f");
    const int q = x.count();
    std::vector<PolyFunction> ambient_coords;
    ambient_coords.reserve(f.dim());
    for (int k = 0; k < f.dim(); ++k) {
        PolyFunction lin(q);
        for (int j = 0; j < q; ++j) {
            MultiIndex a(q, 0);
            a[j] = 1;
            const Cplx c = x.vec(j)[k];
            if (c != Cplx{0.0, 0.0}) lin.set_coefficient(a, c);
        }
        ambient_coords.push_back(std::move(lin));
    }
    return compose(f, ambient_coords);
}

nlohmann::ordered_json cvec_to_json(const CVec& z) {
    auto arr = nlohmann::ordered_json::array();
    for (const Cplx& c : z) arr.push_back({c.real(), c.imag()});
    return arr;
}

CVec cvec_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("vector: expected array of [re, im] pairs");
    CVec z;
    for (const auto& c : j) {
        if (c.is_number()) {
            z.emplace_back(c.get<double>(), 0.0);
        } else if (c.is_array() && c.size() == 2) {
            z.emplace_back(c[0].get<double>(), c[1].get<double>());
        } else {
            throw ConfigError("vector: entries must be numbers or [re, im] pairs");
        }
    }
    return z;
}

}  // namespace blochlab::holo
