# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

from util import *

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from qpslab.corelinalg import Mat, SplitMix64, hstack, vstack
from qpslab.liegroup import NotInGroup, random_point, random_algebra
from qpslab import gspringer
from qpslab.gspringer import DoublePoint, GSPoint, NotRegularSemisimple


seeds = st.integers(min_value=0, max_value=2 ** 32)

def gs_point(ctx, seed, t=None):
    rng = SplitMix64(seed)
    t = random_point(ctx, 'T', rng).m if t is None else t
    u = random_point(ctx, 'U', rng).m
    return GSPoint(random_point(ctx, 'G', rng), GroupElement(ctx, t @ u))

def double_point(ctx, seed):
    rng = SplitMix64(seed)
    return DoublePoint(random_point(ctx, 'G', rng), random_point(ctx, 'G', rng))

def all_pass(rows):
    return [row for row in rows if not row[1]] == []


# The double
def test_phi_examples():
    ctx = group('sl2')
    e = diag(ctx, 1, 1)
    b = element(ctx, [[2, 3], [0, Fraction(1, 2)]])
    f1, f2 = gspringer.phi(DoublePoint(e, b))
    assert f1 == b
    assert f2 == b.inverse()
    f1, f2 = gspringer.phi(DoublePoint(b, e))
    assert f1 == e and f2 == e

def test_double_form_at_identity():
    ctx = group('sl2')
    K = ctx.gram()
    Z = Mat.zeros(ctx.dim, ctx.dim)
    e = ctx.identity()
    assert gspringer.omega_double_matrix(ctx, e, e) == vstack(hstack(Z, -K), hstack(K, Z))

def test_double_action():
    ctx = group('sl2')
    p = double_point(ctx, 4)
    g1, g2 = random_point(ctx, 'G', 5), random_point(ctx, 'G', 6)
    q = p.act(g1, g2)
    f1, f2 = gspringer.phi(q)
    p1, p2 = gspringer.phi(p)
    assert f1 == g1 * p1 * g1.inverse()
    assert f2 == g2 * p2 * g2.inverse()

@settings(max_examples=10)
@given(seeds)
def test_double_is_quasi_hamiltonian(seed):
    ctx = group('sl2')
    p = double_point(ctx, seed)
    for e in ctx.basis:
        assert gspringer.moment_condition_check(p, e, Mat.zeros(2, 2))[0]
        assert gspringer.moment_condition_check(p, Mat.zeros(2, 2), e)[0]
    units = [tuple(1 if k == i else 0 for k in range(2 * ctx.dim)) for i in (0, 2, 4)]
    assert gspringer.closedness_check(p, *units)[0]
    assert gspringer.nondegeneracy_check(p)[0]
    assert gspringer.invariance_check(p, random_point(ctx, 'G', seed + 1), random_point(ctx, 'G', seed + 2))[0]

def test_flipped_form_breaks_the_moment_condition():
    ctx = group('sl2', conventions=['omega-sign'])
    p = double_point(ctx, 8)
    results = [gspringer.moment_condition_check(p, e, e)[0] for e in ctx.basis]
    assert not all(results)


# G x B and the quotient
def test_regular_action_dimensions():
    for name, expected in (('sl2', 1), ('gl2', 1), ('sl3', 3)):
        ctx = group(name)
        p = gs_point(ctx, 12)
        dim, passed, witness = gspringer.regact_check(p.g, p.b)
        assert (dim, passed, witness) == (expected, True, None)

def test_restriction_is_lagrangian():
    ctx = group('sl2')
    p = gs_point(ctx, 3)
    fiber = gspringer.restrict_to_GxB(p.g, p.b)
    assert fiber.dim == 5
    assert fiber.is_lagrangian()[0]

def test_restriction_needs_upper_triangular_b():
    ctx = group('sl2')
    with pytest.raises(NotInGroup):
        GSPoint(diag(ctx, 1, 1), element(ctx, [[1, 0], [1, 1]]))

def test_quotient_fiber():
    ctx = group('sl2')
    p = gs_point(ctx, 21)
    assert gspringer.QuotientChart(p.g, p.b).is_valid()
    L = gspringer.quotient_fiber(p)
    assert L.dim == 3
    assert L.is_lagrangian()[0]

def test_moment_and_lambda():
    ctx = group('sl2')
    b = element(ctx, [[2, 3], [0, Fraction(1, 2)]])
    p = GSPoint(diag(ctx, 1, 1), b)
    assert gspringer.mu(p) == b
    assert gspringer.lambda_(p).m == Mat.diag([2, Fraction(1, 2)])
    assert gspringer.diagram_check(p) == (True, None)

def test_equivalent_representatives():
    ctx = group('sl3')
    p = gs_point(ctx, 30)
    h = random_point(ctx, 'B', 31)
    q = p.transform(h)
    assert q.equivalent(p)
    assert gspringer.mu(q) == gspringer.mu(p)
    assert not GSPoint(random_point(ctx, 'G', 32), p.b).equivalent(p)

def test_transform_needs_borel_element():
    ctx = group('sl2')
    p = gs_point(ctx, 1)
    with pytest.raises(NotInGroup):
        p.transform(element(ctx, [[1, 0], [1, 1]]))

@settings(max_examples=5)
@given(seeds)
def test_quotient_dirac_structure(seed):
    ctx = group('sl2')
    p = gs_point(ctx, seed)
    rows = gspringer.theorem1_check(p)
    assert [r[0] for r in rows] == ['lagrangian', 'f-dirac', 'kernel', 'induced-action', 'commutation']
    assert all_pass(rows)
    assert gspringer.representative_independence_check(p, random_point(ctx, 'B', seed + 1))[0]

def test_quotient_over_the_identity():
    ctx = group('sl2')
    p = gs_point(ctx, 5, t=ctx.identity())
    assert all_pass(gspringer.theorem1_check(p))
    assert all_pass(gspringer.theorem2_check(p))

def test_quotient_dirac_structure_gl3():
    ctx = group('gl3')
    p = gs_point(ctx, 77)
    assert all_pass(gspringer.theorem1_check(p))

def test_phi_on_GxB_extends_the_moment_map():
    ctx = group('sl2')
    p = gs_point(ctx, 6)
    J = gspringer.phi_on_GxB(ctx).jacobian(p.mats())
    assert (J.rows, J.cols) == (2 * ctx.dim, ctx.dim + ctx.dim_b)
    top = J.submatrix(range(ctx.dim), range(J.cols))
    assert top == gspringer.mu_lift_map(ctx).jacobian(p.mats())

def test_residual_action():
    ctx = group('sl2')
    p = gs_point(ctx, 40)
    rows = gspringer.residual_action_check(p, random_point(ctx, 'G', 41), random_algebra(ctx, 42).m)
    assert all_pass(rows)

def test_leaves():
    for name, expected in (('sl2', 2), ('gl2', 2), ('sl3', 6)):
        ctx = group(name)
        p = gs_point(ctx, 9)
        rows = gspringer.theorem2_check(p)
        assert all_pass(rows)
        assert gspringer.leaf_subspace(p).dim == expected

def test_leaf_form():
    ctx = group('sl2')
    p = gs_point(ctx, 13)
    form, basis = gspringer.leaf_two_form(p)
    assert len(basis) == ctx.dim - ctx.rank
    assert form.matrix.is_skew()
    assert all_pass(gspringer.leaf_checks(p, SplitMix64(14)))

def test_bivector():
    ctx = group('sl2')
    p = gs_point(ctx, 17)
    pi = gspringer.reconstruct_bivector(p)
    assert pi.matrix.is_skew()
    rows = gspringer.bivector_checks(p)
    assert [r[0] for r in rows] == ['bivector-skew', 'bivector-moment', 'bivector-graph']
    assert all_pass(rows)


# Kernel lemma
def test_kernel_lemma():
    ctx = group('sl2')
    b = random_point(ctx, 'B', 2)
    for i in ctx.b_idx:
        assert gspringer.kernel_lemma_check(b, ctx.basis[i]) == (True, None)
    with pytest.raises(NotInGroup):
        gspringer.kernel_lemma_check(b, ctx.basis[ctx.low_idx[0]])

def test_kernel_lemma_with_wrong_sign():
    ctx = group('sl2', conventions=['sigma-sign'])
    b = diag(ctx, 2, Fraction(1, 2))
    passed, witness = gspringer.kernel_lemma_check(b, ctx.basis[ctx.t_idx[0]])
    assert not passed
    assert witness["condition_holds"]


# Steinberg fibers
def test_steinberg_membership():
    ctx = group('sl2')
    e = diag(ctx, 1, 1)
    assert gspringer.steinberg_membership(element(ctx, [[1, 1], [0, 1]]), e)
    assert not gspringer.steinberg_membership(diag(ctx, 2, Fraction(1, 2)), e)
    assert gspringer.steinberg_membership(element(ctx, [[0, 1], [-1, Fraction(5, 2)]]), diag(ctx, 2, Fraction(1, 2)))
    with pytest.raises(NotInGroup):
        gspringer.SteinbergFiber(element(ctx, [[1, 1], [0, 1]]))

def test_weyl_fiber_enumeration():
    ctx = group('sl2')
    g = diag(ctx, 2, Fraction(1, 2))
    points = gspringer.weyl_fiber_enum(g)
    assert len(points) == 2
    assert all(gspringer.mu_residual(q, g) < 1e-9 for q in points)
    assert not points[0].equivalent(points[1])
    assert points[0].equivalent(points[0])

def test_weyl_fiber_enumeration_sl3():
    ctx = group('sl3')
    h = random_point(ctx, 'G', 3, height=3)
    g = h * diag(ctx, 2, 3, Fraction(1, 6)) * h.inverse()
    points = gspringer.weyl_fiber_enum(g)
    assert len(points) == 6
    assert all(gspringer.mu_residual(q, g) < 1e-8 for q in points)

def test_weyl_fiber_enumeration_needs_regular_semisimple():
    ctx = group('sl2')
    with pytest.raises(NotRegularSemisimple):
        gspringer.weyl_fiber_enum(element(ctx, [[1, 1], [0, 1]]))

def test_double_point_json():
    ctx = group('sl3')
    p = double_point(ctx, 2)
    q = DoublePoint.from_json(json.loads(json.dumps(p.to_json())))
    assert q.a == p.a and q.b == p.b
    assert q.ctx.name == 'sl3'

@pytest.mark.parametrize('name,entries', [
    ('sl2', (2, Fraction(1, 2))),
    ('sl3', (2, 3, Fraction(1, 6))),
    ('gl3', (1, -2, 5)),
    ('gl4', (1, 2, 3, 4)),
])
def test_characteristic_roots(name, entries):
    ctx = group(name)
    h = random_point(ctx, 'G', 11, height=3)
    g = h * diag(ctx, *entries) * h.inverse()
    coeffs = gspringer.characteristic_coefficients(g.m)
    roots = gspringer.characteristic_roots(g.m)
    assert sorted(r.real for r in roots) == pytest.approx(sorted(float(x) for x in entries), abs=1e-10)
    assert max(abs(r.imag) for r in roots) < 1e-10
    assert all(gspringer.root_residual(coeffs, r) <= gspringer.ROOT_RESIDUAL for r in roots)

def test_weyl_fiber_enumeration_gl4():
    ctx = group('gl4')
    h = random_point(ctx, 'G', 5, height=3)
    g = h * diag(ctx, 1, 2, 3, 4) * h.inverse()
    points = gspringer.weyl_fiber_enum(g)
    assert len(points) == 24
    assert all(gspringer.mu_residual(q, g) < 1e-9 for q in points)
