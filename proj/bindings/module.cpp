// Python bindings for the core operations. Structured results cross the
// boundary as JSON strings; the package __init__ decodes them into dicts so
// the binding layer stays free of container conversions.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blochlab/bloch.hpp"
#include "blochlab/cesaro.hpp"
#include "blochlab/experiment.hpp"
#include "blochlab/holo.hpp"
#include "blochlab/moebius.hpp"
#include "blochlab/testfuncs.hpp"
#include "blochlab/weights.hpp"

namespace py = pybind11;
using namespace blochlab;

namespace {

bloch::SamplerConfig sampler_from(int shells, int directions,
                                  int refine_passes, int refine_top,
                                  std::uint64_t seed) {
    bloch::SamplerConfig cfg;
    cfg.shells = shells;
    cfg.directions = directions;
    cfg.refine_passes = refine_passes;
    cfg.refine_top = refine_top;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical toolkit for Bloch-type norms and integral-type "
              "composition operators on the complex unit ball";

    py::register_exception<Error>(m, "BlochError");

    py::class_<weights::NormalWeight>(m, "Weight")
        .def_static("power", &weights::NormalWeight::power, py::arg("alpha"))
        .def_static(
            "from_json",
            [](const std::string& spec) {
                return weights::NormalWeight::from_json(
                    nlohmann::json::parse(spec));
            },
            py::arg("spec"))
        .def("__call__", &weights::NormalWeight::operator(), py::arg("t"))
        .def("integral_divergent", &weights::NormalWeight::integral_divergent)
        .def("describe_json",
             [](const weights::NormalWeight& w) { return w.describe().dump(); })
        .def(
            "integral_reciprocal",
            [](const weights::NormalWeight& w, double r) {
                return weights::integral_reciprocal(w, r);
            },
            py::arg("r"));

    py::class_<holo::PolyFunction>(m, "Poly")
        .def(py::init<int>(), py::arg("dim"))
        .def_static("constant", &holo::PolyFunction::constant, py::arg("dim"),
                    py::arg("c"))
        .def_static("coordinate", &holo::PolyFunction::coordinate,
                    py::arg("dim"), py::arg("k"))
        .def_static(
            "monomial",
            [](int dim, const std::vector<unsigned>& exponents, Cplx c) {
                return holo::PolyFunction::monomial(dim, exponents, c);
            },
            py::arg("dim"), py::arg("exponents"), py::arg("c"))
        .def("dim", &holo::PolyFunction::dim)
        .def("degree", &holo::PolyFunction::degree)
        .def("term_count", &holo::PolyFunction::term_count)
        .def(
            "set_coefficient",
            [](holo::PolyFunction& f, const std::vector<unsigned>& exponents,
               Cplx c) { f.set_coefficient(exponents, c); },
            py::arg("exponents"), py::arg("c"))
        .def(
            "coefficient",
            [](const holo::PolyFunction& f,
               const std::vector<unsigned>& exponents) {
                return f.coefficient(exponents);
            },
            py::arg("exponents"))
        .def("evaluate", &holo::PolyFunction::evaluate, py::arg("z"))
        .def("gradient", &holo::PolyFunction::gradient, py::arg("z"))
        .def("radial", &holo::PolyFunction::radial, py::arg("z"))
        .def("radial_derivative", &holo::PolyFunction::radial_derivative)
        .def("__add__", &holo::PolyFunction::operator+)
        .def("__sub__", &holo::PolyFunction::operator-)
        .def("__mul__",
             py::overload_cast<const holo::PolyFunction&>(
                 &holo::PolyFunction::operator*, py::const_))
        .def("to_json",
             [](const holo::PolyFunction& f) { return f.to_json().dump(); })
        .def_static("from_json", [](const std::string& s) {
            return holo::PolyFunction::from_json(nlohmann::json::parse(s));
        });

    py::class_<holo::SelfMap>(m, "SelfMap")
        .def(py::init([](std::vector<holo::PolyFunction> components) {
                 return holo::SelfMap(std::move(components));
             }),
             py::arg("components"))
        .def_static("identity",
                    [](int dim) {
                        std::vector<holo::PolyFunction> comps;
                        for (int k = 0; k < dim; ++k)
                            comps.push_back(
                                holo::PolyFunction::coordinate(dim, k));
                        return holo::SelfMap(std::move(comps));
                    },
                    py::arg("dim"))
        .def("dim", &holo::SelfMap::dim)
        .def("apply", &holo::SelfMap::apply, py::arg("z"))
        .def("range_sup", &holo::SelfMap::range_sup)
        .def("fixes_origin", &holo::SelfMap::fixes_origin);

    m.def(
        "seminorm",
        [](const holo::PolyFunction& f, const weights::NormalWeight& mu,
           const std::string& variant, int shells, int directions,
           int refine_passes, int refine_top, std::uint64_t seed) {
            const auto est = bloch::seminorm(
                f, mu, bloch::variant_from_string(variant),
                sampler_from(shells, directions, refine_passes, refine_top,
                             seed));
            return py::make_tuple(est.value, est.witness);
        },
        py::arg("f"), py::arg("mu"), py::arg("variant") = "gradient",
        py::arg("shells") = 14, py::arg("directions") = 512,
        py::arg("refine_passes") = 3, py::arg("refine_top") = 8,
        py::arg("seed") = 0xB10C5EEDULL);

    m.def(
        "bloch_norm",
        [](const holo::PolyFunction& f, const weights::NormalWeight& mu,
           const std::string& variant, int shells, int directions,
           int refine_passes, int refine_top, std::uint64_t seed) {
            return bloch::bloch_norm(
                f, mu, bloch::variant_from_string(variant),
                sampler_from(shells, directions, refine_passes, refine_top,
                             seed));
        },
        py::arg("f"), py::arg("mu"), py::arg("variant") = "gradient",
        py::arg("shells") = 14, py::arg("directions") = 512,
        py::arg("refine_passes") = 3, py::arg("refine_top") = 8,
        py::arg("seed") = 0xB10C5EEDULL);

    py::class_<cesaro::OperatorSpec>(m, "Operator")
        .def(py::init<holo::PolyFunction, holo::SelfMap,
                      weights::NormalWeight, weights::NormalWeight>(),
             py::arg("psi"), py::arg("phi"), py::arg("nu"), py::arg("mu"))
        .def("dim", &cesaro::OperatorSpec::dim)
        .def(
            "apply_exact",
            [](const cesaro::OperatorSpec& spec, const holo::PolyFunction& f) {
                return cesaro::apply_exact(spec, f);
            },
            py::arg("f"))
        .def(
            "apply_quadrature",
            [](const cesaro::OperatorSpec& spec, const holo::PolyFunction& f,
               const CVec& z, double abs_tol) {
                return cesaro::apply_quadrature(spec, f, z, abs_tol);
            },
            py::arg("f"), py::arg("z"), py::arg("abs_tol") = 1e-9)
        .def("classify_boundedness_json",
             [](const cesaro::OperatorSpec& spec) {
                 return cesaro::classify_boundedness(spec).to_json().dump();
             })
        .def("classify_compactness_json",
             [](const cesaro::OperatorSpec& spec) {
                 return cesaro::classify_compactness(spec).to_json().dump();
             });

    m.def(
        "epsnet_json",
        [](const holo::SelfMap& phi, double r, double eps, int random_samples,
           std::uint64_t seed) {
            return cesaro::epsnet_probe(phi, r, eps, random_samples, seed)
                .to_json()
                .dump();
        },
        py::arg("phi"), py::arg("r"), py::arg("eps"),
        py::arg("random_samples") = 512, py::arg("seed") = 0xE7A09EBULL);

    m.def(
        "test_series_constants_json",
        [](const weights::NormalWeight& nu, int k_max) {
            const auto g = testfuncs::build_g(nu, k_max);
            const auto c = testfuncs::constants(g);
            nlohmann::ordered_json j;
            j["C1"] = c.C1;
            j["C2"] = c.C2;
            j["C3"] = c.C3;
            j["r1_unit_integral"] = c.r1_unit_integral;
            j["r1_half_weight"] = c.r1_half_weight;
            return j.dump();
        },
        py::arg("nu"), py::arg("k_max") = 34);

    m.def("pseudohyperbolic", &moebius::pseudohyperbolic, py::arg("z"),
          py::arg("w"));

    m.def(
        "run_experiment_json",
        [](const std::string& config) {
            const auto cfg =
                experiment::parse_config(nlohmann::json::parse(config));
            const auto bundle = experiment::run(cfg);
            return py::make_tuple(bundle.report.dump(), bundle.files,
                                  bundle.exit_code);
        },
        py::arg("config"));
}
