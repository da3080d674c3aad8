"""Quasimodular forms, the Bol splitting, and the independence criterion."""

import random

import pytest

from qmforms.rational import QQ
from qmforms.polyq import Poly
from qmforms.modular import (
    DELTA_FORM,
    E4_FORM,
    E6_FORM,
    J_FORM,
    MeroModForm,
    Point,
    u_for_point,
)
from qmforms.quasi import (
    QMForm,
    QuotientClass,
    bol_split,
    coefficient_functions,
    decompose_complement,
    delta_power_bol,
    depth_reduce,
    dim_tildeM,
    independence_check,
    qm_delta,
    qm_expand,
    serre_derivative,
    tilde_membership,
)
from qmforms.errors import (
    NotHomogeneous,
    WeightMismatch,
)

E2 = QMForm.e2()
QM_E4 = QMForm([E4_FORM])
QM_E6 = QMForm([E6_FORM])


def random_mero(rng, k):
    """A weight-k form (k even) with small poles at the standard points."""
    f = MeroModForm(QQ(rng.randrange(1, 6)) * rng.choice([-1, 1]))
    points = [Point.INF, Point.I, Point.RHO, Point.rational_j(QQ(2))]
    for _ in range(rng.randrange(0, 4)):
        f = f / u_for_point(rng.choice(points))
    need = k - f.weight
    while need % 4:
        f = f * E6_FORM if need > 0 else f / E6_FORM
        need = k - f.weight
    if need >= 0:
        return f * E4_FORM ** (need // 4)
    return f / E4_FORM ** (-need // 4)


def delta_series_oracle(s):
    """q d/dq on a series, as plain coefficient arithmetic."""
    from qmforms.series import TruncatedLaurent
    return TruncatedLaurent.from_terms(
        [(m, c * m) for m, c in s.support()], s.order)


def test_qm_form_shape():
    f = E2 * E2
    assert f.weight == 4 and f.depth == 2
    assert f.coefficient(2) == MeroModForm(1)
    assert f.coefficient(5) == MeroModForm(0)
    assert (E2 * E2 + QM_E4).text() == "E2^2 + E4"
    assert (E2 * E2).text() == "E2^2"
    assert QMForm.zero().weight is None
    with pytest.raises(NotHomogeneous):
        QMForm([E4_FORM, E4_FORM])
    with pytest.raises(NotHomogeneous):
        E2 + QM_E6
    assert E2 ** 3 == E2 * E2 * E2
    assert qm_expand(E2, 5) == qm_expand(QMForm.e2(), 5)


def test_ramanujan_derivatives():
    # 12 delta(E2) = E2^2 - E4, 3 delta(E4) = E2 E4 - E6,
    # 2 delta(E6) = E2 E6 - E4^2
    assert qm_delta(E2) * 12 == E2 * E2 - QM_E4
    assert qm_delta(QM_E4) * 3 == E2 * QM_E4 - QM_E6
    assert qm_delta(QM_E6) * 2 == E2 * QM_E6 - QM_E4 * QM_E4
    # and the expansions track q d/dq of the series
    for f in (E2, QM_E4, QM_E6, E2 * QM_E4):
        got = qm_delta(f).expand(25)
        assert got == delta_series_oracle(f.expand(25))


def test_serre_derivative_values():
    assert serre_derivative(E4_FORM) == E6_FORM * QQ(-1, 3)
    assert serre_derivative(E6_FORM) == E4_FORM ** 2 * QQ(-1, 2)
    assert serre_derivative(DELTA_FORM) == MeroModForm(0)
    # delta(j) = -E4^2 E6 / Delta, via the weight-0 Serre derivative
    dj = qm_delta(QMForm([J_FORM]))
    assert dj == QMForm([-(E4_FORM ** 2) * E6_FORM / DELTA_FORM])
    # chain rule on a rational function of j
    f = MeroModForm(1, 0, 0, 0, 1, Poly((-744, 1)))
    got = serre_derivative(f)
    want = E4_FORM ** 2 * E6_FORM / DELTA_FORM \
        * MeroModForm(1, 0, 0, 0, 1, Poly((-744, 1)) ** 2)
    assert got == want


def test_delta_grading():
    rng = random.Random(41)
    for _ in range(20):
        k = 2 * rng.randrange(-2, 8)
        depth = rng.randrange(0, 4)
        f = QMForm([random_mero(rng, k - 2 * r) for r in range(depth + 1)])
        if f.is_zero:
            continue
        df = qm_delta(f)
        assert df.weight == f.weight + 2
        assert df.depth <= f.depth + 1


def test_coefficient_functions():
    fs = coefficient_functions(E2 * E2)
    assert fs[0] == E2 * E2
    assert fs[1] == E2 * 2
    assert fs[2] == QMForm([MeroModForm(1)])
    assert coefficient_functions(QM_E4) == [QM_E4]
    assert coefficient_functions(E2)[1] == QMForm([MeroModForm(1)])


def test_depth_reduce_example():
    # E2^2 = delta(12 E2) + E4
    g, m, f_mod = depth_reduce(E2 * E2)
    assert g == E2 * 12
    assert not m
    assert f_mod == E4_FORM
    assert qm_delta(g) + QMForm([f_mod]) == E2 * E2


def test_depth_reduce_reassembles():
    rng = random.Random(42)
    done = 0
    while done < 30:
        k = 2 * rng.randrange(-2, 8)
        depth = rng.randrange(0, 4)
        f = QMForm([random_mero(rng, k - 2 * r) for r in range(depth + 1)])
        if f.is_zero:
            continue
        g, m, f_mod = depth_reduce(f)
        back = qm_delta(g) + QMForm([f_mod])
        if m:
            back = back + E2 ** (f.weight - 1) * m
            assert m.weight == 2 - f.weight
        assert back == f
        done += 1


def test_delta_power_bol():
    # weight-(2-k) inputs stay E2-free after k-1 derivatives
    pool = {
        2: MeroModForm(1),
        4: E4_FORM * E6_FORM / DELTA_FORM,
        6: MeroModForm(1, 2, 0, -1),
        12: MeroModForm(1, 2, 1, -2),
    }
    for k, g in pool.items():
        assert g.weight == 2 - k
        out = delta_power_bol(g, k)
        assert isinstance(out, MeroModForm)
        if out:
            assert out.weight == k
    assert delta_power_bol(MeroModForm(1), 2) == MeroModForm(0)
    assert delta_power_bol(MeroModForm(0), 8) == MeroModForm(0)
    with pytest.raises(WeightMismatch):
        delta_power_bol(E4_FORM, 4)
    with pytest.raises(ValueError):
        delta_power_bol(MeroModForm(1), 3)


def test_bol_split_reassembles():
    rng = random.Random(43)
    done = 0
    while done < 15:
        k = rng.choice([2, 4, 6, 8, 12])
        f = random_mero(rng, k)
        if not f:
            continue
        g, f_tilde = bol_split(f, k)
        back = delta_power_bol(g, k) if g else MeroModForm(0)
        assert back + f_tilde == f
        if f_tilde:
            assert tilde_membership(f_tilde, k)
        if g:
            assert g.weight == 2 - k
        done += 1
    with pytest.raises(WeightMismatch):
        bol_split(E4_FORM, 6)


def test_tilde_membership_bounds():
    assert tilde_membership(E4_FORM, 4)
    assert tilde_membership(DELTA_FORM / E4_FORM ** 2, 4)
    # order-4 pole at rho exceeds the k-1 = 3 bound
    assert not tilde_membership(MeroModForm(1, -5, 0, 2), 4)
    # v_inf < -dim_S(k) fails membership
    assert not tilde_membership(E4_FORM ** 4 / DELTA_FORM, 4)
    # pole order k-1 at a point is allowed, order k is not
    pt = Poly((-7, 1))
    assert tilde_membership(MeroModForm(1, 1, 0, 0, 1, pt ** 3), 4)
    assert not tilde_membership(MeroModForm(1, 1, 0, 0, 1, pt ** 4), 4)
    with pytest.raises(ValueError):
        tilde_membership(E4_FORM, 5)


def test_decompose_complement_reassembles():
    rng = random.Random(44)
    done = 0
    while done < 25:
        k = rng.choice([-4, -2, 0, 2, 4, 6, 8, 12])
        depth = rng.randrange(0, 4)
        f = QMForm([random_mero(rng, k - 2 * r) for r in range(depth + 1)])
        if f.is_zero:
            continue
        g, cls = decompose_complement(f)
        back = qm_delta(g)
        if cls.m_part:
            back = back + E2 ** (f.weight - 1) * cls.m_part
        if cls.tilde_part:
            back = back + QMForm([cls.tilde_part])
        assert back == f
        if f.weight is not None and f.weight >= 2 and cls.tilde_part:
            assert tilde_membership(cls.tilde_part, f.weight)
        # the class ignores exact derivatives
        h = QMForm([random_mero(rng, f.weight - 2)])
        _g2, cls2 = decompose_complement(f + qm_delta(h))
        assert cls2 == cls
        done += 1


def test_decompose_examples():
    g, cls = decompose_complement(E2 * E2)
    assert g == E2 * 12
    assert not cls.m_part
    assert cls.tilde_part == E4_FORM
    # an exact derivative has the zero class
    _g, cls = decompose_complement(qm_delta(QM_E4))
    assert cls.is_zero
    # E2 itself: weight 2, m-part 1/12 from the E2^(k-1) channel
    g, cls = decompose_complement(E2)
    assert cls.m_part == MeroModForm(1)
    assert qm_delta(g) + E2 * cls.m_part == E2


def test_dim_tilde_examples():
    assert dim_tildeM(12, [Point.INF]) == (3, 3)
    formula, count = dim_tildeM(4, [Point.INF, Point.RHO])
    assert (formula, count) == (2, 2)
    # [i] contributes 2*floor(12/4) + 1 = 7 in weight 14
    base, _ = dim_tildeM(14, [Point.INF])
    with_i, _ = dim_tildeM(14, [Point.INF, Point.I])
    assert with_i - base == 7
    for k in range(2, 26, 2):
        for sup in ([Point.INF], [Point.INF, Point.I, Point.RHO],
                    [Point.INF, Point.rational_j(QQ(2))]):
            formula, count = dim_tildeM(k, sup)
            assert formula == count
    with pytest.raises(ValueError):
        dim_tildeM(4, [Point.I])


def test_independence_families():
    f4a = DELTA_FORM / E4_FORM ** 2
    f4b = E4_FORM * DELTA_FORM / E6_FORM ** 2
    f6 = E6_FORM * DELTA_FORM / E4_FORM ** 3
    report = independence_check([MeroModForm(1), f4a, f4b, f6])
    assert report["independent"] and report["rank"] == 4
    assert report["relations"] == []
    assert "algebraically independent" in report["statement"]


def test_independence_detects_relations():
    # an exact derivative has class zero
    report = independence_check([qm_delta(QM_E4)])
    assert not report["independent"] and report["rank"] == 0
    # equal classes: E2^2 and 12 delta(E2) + E4
    f1 = E2 * E2
    f2 = qm_delta(E2) * 12 + QM_E4
    report = independence_check([f1, f2])
    assert not report["independent"] and report["rank"] == 1
    assert len(report["relations"]) == 1
    rel = report["relations"][0]
    combo = QMForm.zero()
    for i, c in rel.items():
        combo = combo + [f1, f2][i] * c
    _g, cls = decompose_complement(combo)
    assert cls.is_zero
    # mixed weights are graded separately
    report = independence_check([QM_E4, QM_E6, E2])
    assert report["independent"] and report["rank"] == 3
    assert report["by_weight"][4]["count"] == 1


def test_quotient_class_equality():
    a = QuotientClass(4, MeroModForm(0), E4_FORM)
    b = QuotientClass(4, MeroModForm(0), E4_FORM)
    c = QuotientClass(4, MeroModForm(0), E4_FORM * 2)
    assert a == b and a != c
    assert not a.is_zero
    assert QuotientClass(None, MeroModForm(0), MeroModForm(0)).is_zero
