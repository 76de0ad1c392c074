import math
import random

import pytest

from lstorus.localmodel import (
    CornerHypothesisError,
    FaceDiffeo,
    LocalModelError,
    ModelPoint,
    OrbitPoint,
    Polynomial,
    SmoothMapSpec,
    StepUnderflowError,
    TorusMap,
    XScaleLayer,
    YScaleLayer,
    YShearLayer,
    angle_distance,
    corner_quotient,
    even_substitution,
    lift_diffeo,
    model_point_distance,
    orbit_map,
    orbit_point_distance,
    random_model_point,
    random_orbit_point,
    random_spec,
    run_local_checks,
    section_compat_check,
    smoothness_probe,
    standard_section,
    torus_act,
)


def test_orbit_map_values():
    p = ModelPoint([complex(3, 4)], [], [0.5])
    q = orbit_map(p)
    assert q.x == (25.0,)
    assert q.y == (0.5,)
    zero = ModelPoint([0j, 0j], [0.1], [])
    assert orbit_map(zero).x == (0.0, 0.0)


def test_orbit_map_torus_invariant():
    rng = random.Random(1)
    for _ in range(100):
        p = random_model_point(rng, 2, 3, 1)
        g = [rng.uniform(0, 2 * math.pi) for _ in range(3)]
        moved = torus_act(g, p, 2)
        assert orbit_point_distance(orbit_map(moved), orbit_map(p)) < 1e-12


def test_standard_section_values():
    s = standard_section(OrbitPoint([4.0, 9.0], []), 1)
    assert s.z == (complex(2, 0), complex(3, 0))
    assert s.t == (0.0,)
    s0 = standard_section(OrbitPoint([0.0], [1.0]), 0)
    assert s0.z == (0j,)


def test_standard_section_roundtrip():
    rng = random.Random(2)
    for _ in range(1000):
        q = random_orbit_point(rng, 3, 2)
        back = orbit_map(standard_section(q, 1))
        assert orbit_point_distance(back, q) < 1e-12


def test_orbit_point_rejects_negative():
    with pytest.raises(LocalModelError):
        OrbitPoint([-0.1], [])


def test_model_point_angle_reduction():
    p = ModelPoint([], [7.0, -1.0], [])
    assert all(0 <= a < 2 * math.pi for a in p.t)
    assert angle_distance(p.t[1], -1.0) < 1e-12


def test_corner_quotient_polynomial():
    f = lambda x, y: x * (2.0 + x)
    assert corner_quotient(f, 0.5) == pytest.approx(2.5, abs=1e-12)
    assert corner_quotient(f, 0.0) == pytest.approx(2.0, abs=1e-10)


def test_corner_quotient_sin():
    f = lambda x, y: math.sin(x)
    assert corner_quotient(f, 0.0) == pytest.approx(1.0, abs=1e-10)


def test_corner_quotient_exact_derivative_path():
    f = lambda x, y: x * math.exp(x + y[0])
    got = corner_quotient(f, 0.0, (0.3,), exact_derivative=lambda y: math.exp(y[0]))
    assert got == math.exp(0.3)


def test_corner_quotient_matches_product_identity():
    f = lambda x, y: x * math.exp(x + y[0])
    rng = random.Random(3)
    for _ in range(200):
        x = rng.uniform(1e-6, 2.0)
        y = (rng.uniform(-1, 1),)
        g = corner_quotient(f, x, y, check=False)
        assert abs(g * x - f(x, y)) <= 1e-12 * max(1.0, abs(f(x, y)))


def test_corner_quotient_hypothesis_violations():
    with pytest.raises(CornerHypothesisError):
        corner_quotient(lambda x, y: x + 1.0, 0.5)  # f(0) != 0
    with pytest.raises(CornerHypothesisError):
        corner_quotient(lambda x, y: -x, 0.5)  # derivative negative
    with pytest.raises(CornerHypothesisError):
        corner_quotient(lambda x, y: x * (1.0 - x), 0.5)  # vanishes at x=1


def test_corner_quotient_rejects_negative_x():
    with pytest.raises(LocalModelError):
        corner_quotient(lambda x, y: x, -1.0)


def test_corner_quotient_derivative_probe_matches_symbolic():
    # g(x, y) = e^{x+y} exactly, so dg/dx(0, y) = e^y; the probe estimate
    # must agree with half the second x-derivative of f at the boundary.
    for y0 in (-0.5, 0.0, 0.7):
        f = lambda x, y: x * math.exp(x + y0)
        g = lambda s: corner_quotient(f, s, (), check=False)
        report = smoothness_probe(g, 0.0, 1)
        assert report.estimate(1).right == pytest.approx(math.exp(y0), abs=1e-4)


def test_even_substitution():
    f = lambda u, y: u[0]
    F = even_substitution(f)
    assert F([3.0], []) == 9.0
    root = even_substitution(lambda u, y: math.sqrt(u[0]))
    assert root([-2.0], []) == pytest.approx(2.0)
    rng = random.Random(4)
    g = even_substitution(lambda u, y: u[0] * 2 + u[1] + y[0])
    for _ in range(100):
        x = [rng.uniform(-2, 2), rng.uniform(-2, 2)]
        y = [rng.uniform(-1, 1)]
        assert g(x, y) == pytest.approx(g([-x[0], x[1]], y))
        assert g(x, y) == pytest.approx(g([x[0], -x[1]], y))


def test_smoothness_probe_flags_abs():
    F = even_substitution(lambda u, y: math.sqrt(u[0]))
    report = smoothness_probe(lambda s: F([s], []), 0.0, 2)
    assert not report.stable
    assert any("mismatch" in flag for flag in report.flags)


def test_smoothness_probe_passes_smooth_corner_quotient():
    f = lambda x, y: x * math.exp(x + y[0])
    g = lambda s: corner_quotient(f, s, (0.25,), check=False)
    report = smoothness_probe(g, 0.0, 3)
    assert report.stable, report.flags
    assert report.estimate(1).right == pytest.approx(math.exp(0.25), abs=1e-4)


def test_smoothness_probe_flags_fractional_power():
    report = smoothness_probe(lambda s: abs(s) ** 2.5, 0.0, 3)
    assert any("order-3" in flag for flag in report.flags)


def test_smoothness_probe_order_bound_and_underflow():
    with pytest.raises(LocalModelError):
        smoothness_probe(math.sin, 0.0, 5)
    with pytest.raises(StepUnderflowError):
        smoothness_probe(lambda s: 0.0, 1e300, 1)


def test_lift_identity_is_exact():
    spec = SmoothMapSpec.identity(2, 3, 1)
    rng = random.Random(5)
    for _ in range(200):
        p = random_model_point(rng, 2, 3, 1)
        assert model_point_distance(lift_diffeo(spec, p), p) == 0.0


def test_lift_pure_scaling():
    # Phi(x, y) = (2 x, y) lifts to z -> sqrt(2) z.
    phi = FaceDiffeo(1, 1, [XScaleLayer(0, Polynomial.constant(2, math.log(2.0)))])
    spec = SmoothMapSpec(
        1, 1, 1, phi, TorusMap.identity(1, 1, 1), TorusMap.identity(1, 1, 1)
    )
    p = ModelPoint([complex(1.0, 1.0)], [], [0.5])
    out = lift_diffeo(spec, p)
    assert abs(out.z[0] - math.sqrt(2) * complex(1, 1)) < 1e-12
    zero = lift_diffeo(spec, ModelPoint([0j], [], [0.5]))
    assert zero.z[0] == 0j


def test_lift_keeps_boundary_exact():
    rng = random.Random(6)
    for _ in range(50):
        spec = random_spec(rng, 2, 3, 1)
        p = random_model_point(rng, 2, 3, 1, boundary_prob=1.0)
        out = lift_diffeo(spec, p)
        assert out.z == (0j, 0j)


def test_lift_equivariance_and_covering():
    rng = random.Random(7)
    for _ in range(20):
        n, k, m = 2, 3, 1
        spec = random_spec(rng, n, k, m)
        for _ in range(50):
            p = random_model_point(rng, n, k, m)
            g = [rng.uniform(0, 2 * math.pi) for _ in range(k)]
            lhs = lift_diffeo(spec, torus_act(g, p, n))
            rhs = torus_act(g, lift_diffeo(spec, p), n)
            assert model_point_distance(lhs, rhs) < 1e-9
            cov = orbit_point_distance(
                orbit_map(lift_diffeo(spec, p)), spec.phi.apply(orbit_map(p))
            )
            assert cov < 1e-9


def test_spec_composition_law():
    rng = random.Random(8)
    for _ in range(10):
        s1 = random_spec(rng, 2, 2, 1)
        s2 = random_spec(rng, 2, 2, 1)
        comp = s2.compose_after(s1)
        for _ in range(40):
            p = random_model_point(rng, 2, 2, 1)
            two = lift_diffeo(s2, lift_diffeo(s1, p))
            one = lift_diffeo(comp, p)
            assert model_point_distance(two, one) < 1e-8


def test_spec_inverse_roundtrip():
    rng = random.Random(9)
    for _ in range(10):
        spec = random_spec(rng, 2, 3, 2)
        inv = spec.inverse()
        for _ in range(40):
            p = random_model_point(rng, 2, 3, 2)
            back = lift_diffeo(inv, lift_diffeo(spec, p))
            assert model_point_distance(back, p) < 1e-7


def test_face_diffeo_inverse_exact_on_orbit():
    rng = random.Random(10)
    for _ in range(50):
        spec = random_spec(rng, 3, 3, 2)
        phi = spec.phi
        inv = phi.inverse()
        q = random_orbit_point(rng, 3, 2)
        back = inv.apply(phi.apply(q))
        assert orbit_point_distance(back, q) < 1e-10


def test_section_compat_trivial_and_random():
    trivial = SmoothMapSpec.identity(2, 3, 1)
    assert section_compat_check(trivial, 100, seed=0)["max_discrepancy"] == 0.0
    rng = random.Random(11)
    for _ in range(10):
        spec = random_spec(rng, 2, 3, 1)
        rep = section_compat_check(spec, 100, seed=rng.randrange(10 ** 6))
        assert rep["max_discrepancy"] < 1e-9


def test_layer_validation():
    with pytest.raises(LocalModelError):
        # q depends on its own coordinate.
        FaceDiffeo(1, 0, [XScaleLayer(0, Polynomial(1, {(1,): 1.0}))])
    with pytest.raises(LocalModelError):
        FaceDiffeo(1, 1, [YShearLayer(0, Polynomial(2, {(0, 1): 1.0}))])
    with pytest.raises(LocalModelError):
        FaceDiffeo(1, 1, [YScaleLayer(0, 0.0)])
    with pytest.raises(LocalModelError):
        FaceDiffeo(1, 0, [XScaleLayer(1, Polynomial.zero(1))])


def test_spec_validation():
    with pytest.raises(LocalModelError):
        SmoothMapSpec(
            2,
            1,
            0,
            FaceDiffeo.identity(2, 0),
            TorusMap.identity(1, 2, 0),
            TorusMap.identity(1, 2, 0),
        )


def test_run_local_checks_passes():
    report = run_local_checks(2, 3, 1, samples=60, seed=12345, spec_count=3)
    assert report["passed"], report
    assert report["checks"]["trivial_spec"]["max_discrepancy"] == 0.0
    assert report["checks"]["boundary_zeros"]["max_discrepancy"] == 0.0


def test_run_local_checks_deterministic():
    a = run_local_checks(1, 2, 1, samples=30, seed=7, spec_count=2)
    b = run_local_checks(1, 2, 1, samples=30, seed=7, spec_count=2)
    assert a == b


def test_run_local_checks_validates_dims():
    with pytest.raises(LocalModelError):
        run_local_checks(3, 2, 0, samples=10, seed=0)
