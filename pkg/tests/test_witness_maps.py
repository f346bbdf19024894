"""The families f_n and g_n, the image band, and containment certificates."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tubehyp.geometry import contains, contains_many
from tubehyp.interval import Interval
from tubehyp.witness_maps import (
    ContainmentOutcome,
    Matrix2,
    WitnessFamily,
    cr_residuals,
    dg,
    eval_f,
    eval_g,
    frobenius_norm,
    harmonicity_bound,
    harmonicity_residual,
    harmonicity_residuals,
    image_band,
    image_curve,
    jac_f,
    op_norm,
    op_norm_at_origin,
    recheck_containment,
    verify_containment,
)


def sech(n):
    return 1.0 / math.cosh(n)


# -- evaluation -----------------------------------------------------------------


def test_eval_f_examples():
    for n in (1, 7, 1000, 10_000):
        p = eval_f(n, 0j)
        assert (p.x1, p.x2) == (0.0, 2.0)
        g = eval_g(n, 0j)
        assert g == (0j, 2 + 0j)
    p = eval_f(2, 0.5)
    assert p.x1 == 1.0
    assert p.x2 == pytest.approx(math.sin(1) / math.cosh(2) + 2, rel=1e-15)
    assert p.x2 == pytest.approx(2.2236649, abs=1e-7)
    q = eval_f(1, 1j)
    assert (q.x1, q.x2) == (0.0, 2.0)


def test_eval_f_second_component_bounds():
    rng = np.random.default_rng(1)
    for n in (1, 4, 30):
        for x, y in rng.uniform(-1, 1, size=(500, 2)):
            v = eval_f(n, complex(x, y)).x2 - 2
            assert abs(v) <= math.cosh(n * abs(y)) / math.cosh(n) * (1 + 1e-14)


def test_eval_g_examples():
    w1, w2 = eval_g(1, 0.7j)
    assert w1 == 0.7j
    assert w2.real == pytest.approx(2.0, abs=1e-15)
    assert w2.imag == pytest.approx(math.sinh(0.7) / math.cosh(1), rel=1e-14)
    for n in (1, 5, 20):
        d1, d2 = dg(n)
        h = 1e-6
        fd = (eval_g(n, h, mid=0.0)[1] - eval_g(n, -h, mid=0.0)[1]) / (2 * h)
        assert d1 == n
        assert d2 == pytest.approx(n / math.cosh(n), rel=1e-8)
        assert fd == pytest.approx(d2, rel=1e-6)


@pytest.mark.parametrize("n", [1, 5, 20])
def test_real_part_of_g_is_f(n):
    xs = np.linspace(-1, 1, 100)
    worst = 0.0
    for x in xs:
        for y in xs:
            z = complex(x, y)
            f, g = eval_f(n, z), eval_g(n, z)
            worst = max(worst, abs(g[0].real - f.x1), abs(g[1].real - f.x2))
    assert worst <= 1e-12


def test_witness_family():
    fam = WitnessFamily(4)
    assert fam.base.as_tuple() == (0.0, 2.0)
    assert fam.dg0() == dg(4)
    with pytest.raises(ValueError):
        WitnessFamily(0)


# -- derivatives and norms ------------------------------------------------------


def test_jacobian_at_origin():
    for n in (1, 3, 12):
        m = jac_f(n, 0j)
        assert [v for row in m.rows() for v in row] == pytest.approx([n, 0.0, n / math.cosh(n), 0.0], rel=1e-14)


@pytest.mark.parametrize("n", [1, 5, 20])
def test_jacobian_matches_central_differences(n):
    rng = np.random.default_rng(n)
    h = 1e-6
    for x, y in rng.uniform(-1, 1, size=(100, 2)):
        z = complex(x, y)
        fx = [(a - b) / (2 * h) for a, b in zip(eval_f(n, z + h).as_tuple(), eval_f(n, z - h).as_tuple())]
        fy = [(a - b) / (2 * h) for a, b in zip(eval_f(n, z + 1j * h).as_tuple(), eval_f(n, z - 1j * h).as_tuple())]
        fd = np.array([[fx[0], fy[0]], [fx[1], fy[1]]])
        exact = jac_f(n, z).to_numpy()
        assert np.linalg.norm(exact - fd) <= 1e-6 * np.linalg.norm(exact)


def test_op_norm_examples():
    assert op_norm(Matrix2(1, 0, 0, 1)) == 1.0
    assert op_norm(Matrix2(0, 0, 0, 0)) == 0.0
    assert op_norm(jac_f(1, 0j)) == pytest.approx(math.sqrt(1 + sech(1) ** 2), rel=1e-15)
    assert op_norm(jac_f(1, 0j)) == pytest.approx(1.1916268, abs=1e-7)
    rng = np.random.default_rng(9)
    for entries in rng.normal(size=(200, 4)) * 10:
        m = Matrix2(*map(float, entries))
        assert op_norm(m) == pytest.approx(np.linalg.svd(m.to_numpy(), compute_uv=False)[0], rel=1e-12)
        assert frobenius_norm(m) == pytest.approx(np.linalg.norm(m.to_numpy()), rel=1e-14)


def test_op_norm_growth():
    prev = 0.0
    for n in range(1, 201):
        v = op_norm(jac_f(n, 0j))
        assert v >= n and v > prev
        assert v == pytest.approx(n * math.sqrt(1 + sech(n) ** 2), rel=1e-14)
        assert v == pytest.approx(op_norm_at_origin(n), rel=1e-15)
        if n >= 20:
            assert abs(v / n - 1) <= 1e-6
        prev = v


# -- band and curves ------------------------------------------------------------


def test_band_examples():
    for n in (2, 5, 9):
        b = image_band(n, math.pi / 2)
        assert b.lo == pytest.approx(2 + sech(n), rel=1e-14) and b.hi == pytest.approx(3.0, rel=1e-15)
        assert b.lo > 2.0
    z = image_band(4, 0.0)
    assert z.lo == z.hi == 2.0
    for n in (5, 8):
        b = image_band(n, 3 * math.pi / 2)
        assert b.hi < 2.0 and b.lo == pytest.approx(1.0, rel=1e-14)
        assert b.hi == pytest.approx(2 - sech(n), rel=1e-14)
    with pytest.raises(ValueError):
        image_band(1, 1.5)


def test_band_contains_image_of_square():
    rng = np.random.default_rng(4)
    for n in (1, 3, 10):
        for x, y in rng.uniform(-1, 1, size=(10_000 // 3, 2)):
            p = eval_f(n, complex(x, y))
            assert image_band(n, n * x).contains(p.x2)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 60), st.floats(-1, 1), st.floats(-1, 1))
def test_curve_lies_in_band(n, x, y0):
    c = image_curve(n, y0)
    t = n * x
    assert image_band(n, t).contains(c.value(t))
    assert (c.deviation(Interval.point(t)) + 2.0).contains(eval_f(n, complex(x, y0)).x2)


def test_curve_examples():
    top, bottom = image_curve(6, 1.0), image_curve(6, 0.0)
    for t in np.linspace(-6, 6, 41):
        assert top.value(t) == pytest.approx(math.sin(t) + 2, abs=1e-15)
        assert bottom.value(t) == pytest.approx(math.sin(t) / math.cosh(6) + 2, abs=1e-15)
    with pytest.raises(ValueError):
        image_curve(2, 1.5)


# -- containment ----------------------------------------------------------------


def test_fig1_contained_for_n_up_to_50(fig1):
    for n in range(1, 51):
        cert = verify_containment(n, fig1)
        assert cert.outcome is ContainmentOutcome.CONTAINED, n
        assert recheck_containment(cert, fig1)[0]
        # every slit abscissa inside [-n, n] carries a record
        expected = sum(1 for s in fig1.slits() if abs(s.abscissa.value) <= n)
        assert len(cert.checked_obstacles) == expected


def test_n1_only_strip_check(fig1):
    cert = verify_containment(1, fig1)
    assert cert.contained and cert.strip_ok and cert.checked_obstacles == []


def test_mutated_slit_not_contained(fig1_mut):
    cert = verify_containment(3, fig1_mut)
    assert cert.outcome is ContainmentOutcome.NOT_CONTAINED
    x, y = cert.witness["point"]
    assert x == pytest.approx(math.pi / 2, abs=1e-9)
    assert 2 + sech(3) <= y <= 2.6
    assert not contains(fig1_mut, (x, y))
    assert recheck_containment(cert, fig1_mut)[0]


@pytest.mark.parametrize("n", [1, 3, 10, 50])
def test_certificate_spot_check(fig1, fig2, n):
    rng = np.random.default_rng(100 + n)
    r = np.sqrt(rng.uniform(0, 1, 10_000)) * 0.999999
    th = rng.uniform(0, 2 * math.pi, r.size)
    x, y = r * np.cos(th), r * np.sin(th)
    xs = n * x
    ys = np.sin(n * x) * (np.exp(n * (np.abs(y) - 1)) + np.exp(-n * (np.abs(y) + 1))) / (1 + math.exp(-2 * n)) + 2
    for dom in (fig1, fig2):
        assert verify_containment(n, dom).contained
        assert contains_many(dom, xs, ys).all()


def test_n_cap(fig1):
    with pytest.raises(ValueError):
        verify_containment(1001, fig1)
    # sech(1000) underflows; the sweep cannot separate the band from the mid-line
    assert verify_containment(1000, fig1, depth=20).outcome is ContainmentOutcome.UNKNOWN


# -- residuals ------------------------------------------------------------------


def test_harmonicity_residual():
    assert harmonicity_residual(1, 1e-2) <= 1e-3
    assert harmonicity_residual(1, 1e-2) <= harmonicity_bound(1, 1e-2)
    first, _ = harmonicity_residuals(3, 0.02)
    assert first == 0.0
    for n in (1, 2):
        r1, r2 = harmonicity_residual(n, 0.02), harmonicity_residual(n, 0.01)
        assert r1 / r2 == pytest.approx(4.0, rel=0.1)


def test_cr_residual():
    first, second = cr_residuals(1, 1e-2)
    assert first == 0.0 and second <= 1e-3
    for n in (1, 2):
        r1, r2 = cr_residuals(n, 0.02)[1], cr_residuals(n, 0.01)[1]
        assert r1 / r2 == pytest.approx(4.0, rel=0.1)
    with pytest.raises(ValueError):
        cr_residuals(1, 0.5)


def test_holomorphic_derivative_complex_step():
    rng = np.random.default_rng(12)
    for n in (1, 5):
        for x, y in rng.uniform(-0.9, 0.9, size=(50, 2)):
            z = complex(x, y)
            h = 1e-6
            fd = (eval_g(n, z + h, mid=0.0)[1] - eval_g(n, z - h, mid=0.0)[1]) / (2 * h)
            exact = n * cmath.cos(n * z) / math.cosh(n)
            assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))
