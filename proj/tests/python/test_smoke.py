import math

import blochlab as bl


def test_power_weight_values():
    mu = bl.Weight.power(1.0)
    assert mu(0.5) == 0.75
    assert mu.integral_divergent()
    info = bl.describe_weight(mu)
    assert info["family"] == "power"
    assert info["alpha"] == 1.0


def test_poly_evaluate_and_gradient():
    f = bl.Poly.monomial(2, [1, 1], 1.0)
    val = f.evaluate([0.5, 0.25j])
    assert abs(val - 0.125j) < 1e-15
    g = f.gradient([0.5, 0.25j])
    assert abs(g[0] - 0.25j) < 1e-15
    assert abs(g[1] - 0.5) < 1e-15


def test_operator_integrates_monomials():
    # psi = z with trivial composition sends 2 z^2 to (2/3) z^3.
    psi = bl.Poly.coordinate(1, 0)
    phi = bl.SelfMap.identity(1)
    mu = bl.Weight.power(1.0)
    op = bl.Operator(psi, phi, mu, mu)
    f = bl.Poly.monomial(1, [2], 2.0)
    out = op.apply_exact(f)
    assert abs(out.coefficient([3]) - 2.0 / 3.0) < 1e-15
    assert out.term_count() == 1
    direct = op.apply_quadrature(f, [0.5])
    assert abs(direct - out.evaluate([0.5])) < 1e-8


def test_seminorm_of_coordinate_function():
    f = bl.Poly.coordinate(2, 0)
    mu = bl.Weight.power(1.0)
    value, witness = bl.seminorm(f, mu, "gradient")
    assert abs(value - 1.0) < 1e-6
    assert len(witness) == 2
    norm = bl.bloch_norm(f, mu, "gradient")
    assert abs(norm - value) < 1e-12


def test_classification_reports_are_dicts():
    psi = bl.Poly.coordinate(2, 0)
    phi = bl.SelfMap.identity(2)
    mu = bl.Weight.power(1.0)
    op = bl.Operator(psi, phi, mu, mu)
    bounded = bl.classify_boundedness(op)
    assert "verdict" in bounded
    assert bounded["sandwich_ratio"] >= 1.0 - 1e-9


def test_pseudohyperbolic_distance():
    rho = bl.pseudohyperbolic([0.5], [0.0])
    assert abs(rho - 0.5) < 1e-15
    assert bl.pseudohyperbolic([0.3, 0.1], [0.3, 0.1]) < 1e-15


def test_epsnet_counts_distinct_directions():
    comps = [bl.Poly.monomial(3, [1 if j == k else 0 for j in range(3)], 0.5)
             for k in range(3)]
    phi = bl.SelfMap(comps)
    net = bl.epsnet(phi, 0.5, 0.2, 256, 7)
    assert net["net_size"] >= 3


def test_test_series_constants_are_ordered():
    c = bl.test_series_constants(bl.Weight.power(1.0))
    assert 0.0 < c["C1"] < c["C2"] < c["C3"]
    assert 0.0 < c["r1_unit_integral"] < 1.0


def test_run_experiment_is_deterministic():
    config = {
        "seed": 99,
        "dimension": 2,
        "psi": [{"exponents": [1, 0], "re": 1.0, "im": 0.0}],
        "phi": "identity",
        "function": [{"exponents": [0, 1], "re": 1.0, "im": 0.0}],
        "domain_weight": {"family": "power", "alpha": 1.0},
        "codomain_weight": {"family": "power", "alpha": 1.0},
        "sampler": {"shells": 8, "directions": 48, "refine_passes": 2,
                    "refine_top": 4},
        "classify": {"decay_shells": 14, "decay_directions": 8},
        "tasks": ["norms"],
    }
    report_a, files_a, code_a = bl.run_experiment(config)
    report_b, files_b, code_b = bl.run_experiment(config)
    assert code_a == 0 and code_b == 0
    assert report_a == report_b
    assert files_a == files_b
    assert files_a[0][0] == "norms_decay.csv"
    assert report_a["results"]["norms"]["gradient"]["seminorm"] > 0.9


def test_errors_surface_as_bloch_error():
    try:
        bl.Weight.power(-0.5)
    except bl.BlochError:
        pass
    else:
        raise AssertionError("expected BlochError for alpha <= 0")
