# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

from util import *

from fractions import Fraction
from itertools import combinations

from hypothesis import given, settings, strategies as st

from qpslab.corelinalg import Mat, hstack
from qpslab.liegroup import random_point, random_algebra
from qpslab.diffcalc import (DualScalar, PointedMap, SpaceDescriptor, TangentError, deriv_part, value_part,
                             identity_map, differential, directional, lie_bracket, lie_derivative_covector,
                             d_one_form, d_two_form)


seeds = st.integers(min_value=0, max_value=2 ** 32)


def test_dual_arithmetic():
    x = DualScalar(3, 1, tag=1)
    y = DualScalar(2, 1, tag=1)
    p = x * y
    assert (p.value, p.deriv) == (6, 5)
    q = x / y
    assert (q.value, q.deriv) == (Fraction(3, 2), Fraction(-1, 4))
    assert 1 - x == DualScalar(-2, -1, tag=1)

def test_nested_tags():
    x = DualScalar(3, 1, tag=1)
    y = DualScalar(2, 1, tag=2)
    p = x * y
    assert p.tag == 2
    assert deriv_part(p, 2) == x
    assert deriv_part(p, 1) == DualScalar(2, 1, tag=2)
    assert value_part(value_part(p, 2), 1) == 6

def test_space_dimensions():
    ctx = group('sl2')
    dims = dict((name, SpaceDescriptor.named(ctx, name).dim) for name in ('G', 'GxG', 'GxB', 'GxU', 'T', 'B'))
    assert dims == {'G': 3, 'GxG': 6, 'GxB': 5, 'GxU': 4, 'T': 1, 'B': 2}
    with pytest.raises(TangentError):
        SpaceDescriptor.named(ctx, 'GxT')

def test_flatten_rejects_directions_outside_a_factor():
    ctx = group('sl2')
    space = SpaceDescriptor.named(ctx, 'GxB')
    e21 = Mat([[0, 0], [1, 0]])
    h = Mat([[1, 0], [0, -1]])
    assert space.flatten([e21, h]) == (0, 0, 1, 0, 1)
    with pytest.raises(TangentError):
        space.flatten([h, e21])
    with pytest.raises(TangentError):
        space.flatten([Mat.identity(2), h])

def test_identity_map_has_identity_jacobian():
    ctx = group('sl3')
    space = SpaceDescriptor.named(ctx, 'GxB')
    p = [random_point(ctx, 'G', 1).m, random_point(ctx, 'B', 2).m]
    assert identity_map(space).jacobian(p) == Mat.identity(space.dim)

def test_left_invariant_bracket():
    ctx = group('sl2')
    space = SpaceDescriptor.named(ctx, 'G')
    p = [random_point(ctx, 'G', 5).m]
    const = lambda v: (lambda q: v)
    # [E12, E21] = H
    assert lie_bracket(space, const((1, 0, 0)), const((0, 0, 1)), p) == (0, 1, 0)


@given(seeds)
def test_inversion_differential(seed):
    ctx = group('sl2')
    space = SpaceDescriptor.named(ctx, 'G')
    inv = PointedMap('inv', space, space, lambda p: [p[0].inverse()])
    g = random_point(ctx, 'G', seed)
    assert inv.jacobian([g.m]) == -ctx.Ad_matrix(g.m)

@given(seeds)
def test_multiplication_differential(seed):
    ctx = group('gl2')
    space = SpaceDescriptor.named(ctx, 'GxG')
    target = SpaceDescriptor.named(ctx, 'G')
    mult = PointedMap('mult', space, target, lambda p: [p[0] @ p[1]])
    a, b = random_point(ctx, 'G', seed), random_point(ctx, 'G', seed + 1)
    j = mult.jacobian([a.m, b.m])
    assert j == hstack(ctx.Ad_matrix(b.m.inverse()), Mat.identity(ctx.dim))

@settings(max_examples=10)
@given(seeds)
def test_exterior_derivative_squares_to_zero(seed):
    ctx = group('gl2')
    space = SpaceDescriptor.named(ctx, 'G')
    alpha = lambda q: ctx.coords(q[0])
    p = [random_point(ctx, 'G', seed).m]

    def d_alpha(q):
        units = [space.unit(j) for j in range(space.dim)]
        return Mat([[d_one_form(space, alpha, q, x, y) for y in units] for x in units])

    for i, j, k in combinations(range(space.dim), 3):
        assert d_two_form(space, d_alpha, p, space.unit(i), space.unit(j), space.unit(k)) == 0

def test_d_of_left_invariant_one_form():
    # d alpha(x, y) = -alpha([x, y]) for a constant form
    ctx = group('sl2')
    space = SpaceDescriptor.named(ctx, 'G')
    alpha = lambda q: (0, 1, 0)
    p = [random_point(ctx, 'G', 3).m]
    assert d_one_form(space, alpha, p, (1, 0, 0), (0, 0, 1)) == -1

@settings(max_examples=5)
@given(seeds)
def test_bracket_satisfies_jacobi(seed):
    ctx = group('gl2')
    space = SpaceDescriptor.named(ctx, 'G')
    a = random_point(ctx, 'G', seed + 1).m
    X = lambda q: ctx.coords(q[0])
    Y = lambda q: ctx.coords(q[0] @ q[0])
    Z = lambda q: ctx.coords(a @ q[0] @ a)

    def br(F, G):
        return lambda q: lie_bracket(space, F, G, q)

    p = [random_point(ctx, 'G', seed).m]
    terms = [br(X, br(Y, Z))(p), br(Y, br(Z, X))(p), br(Z, br(X, Y))(p)]
    assert tuple(sum(t) for t in zip(*terms)) == (0,) * space.dim
    assert br(Y, Y)(p) == (0,) * space.dim

@settings(max_examples=20)
@given(seeds)
def test_left_and_right_invariant_fields_commute(seed):
    ctx = group('sl3')
    space = SpaceDescriptor.named(ctx, 'G')
    xi = ctx.coords(random_algebra(ctx, seed + 1).m)
    zeta = random_algebra(ctx, seed + 2).m
    left = lambda q: xi
    right = lambda q: ctx.coords(q[0].inverse() @ zeta @ q[0])
    p = [random_point(ctx, 'G', seed).m]
    assert lie_bracket(space, left, right, p) == (0,) * space.dim

@settings(max_examples=20)
@given(seeds)
def test_chain_rule(seed):
    ctx = group('sl2')
    pair = SpaceDescriptor.named(ctx, 'GxG')
    single = SpaceDescriptor.named(ctx, 'G')
    mult = PointedMap('mult', pair, single, lambda p: [p[0] @ p[1]])
    square = PointedMap('square', single, single, lambda p: [p[0] @ p[0]])
    p = [random_point(ctx, 'G', seed).m, random_point(ctx, 'G', seed + 1).m]
    composite = square.compose(mult)
    outer = square.jacobian(mult(p))
    assert composite.jacobian(p) == outer @ mult.jacobian(p)
    x = pair.unit(seed % pair.dim)
    assert differential(composite, p, x) == outer.apply(differential(mult, p, x))
    with pytest.raises(TangentError):
        mult.compose(square)

@settings(max_examples=20)
@given(seeds)
def test_second_order_curve_terms_do_not_change_first_derivatives(seed):
    # p (I + t x + t^2 x^2 / 2) against the first-order curve p (I + t x)
    ctx = group('sl2')
    space = SpaceDescriptor.named(ctx, 'G')
    a = random_point(ctx, 'G', seed + 1).m
    f = PointedMap('f', space, space, lambda p: [p[0] @ p[0] @ a @ p[0].inverse()])
    g = random_point(ctx, 'G', seed).m
    x = random_algebra(ctx, seed + 2).m
    t = DualScalar(0, 1, tag=1)
    assert t * t == 0
    curve = g @ (Mat.identity(2) + x.scale(t) + (x @ x).scale(t * t / 2))
    out = f.func([curve])[0]
    moved = value_part(out, 1).inverse() @ deriv_part(out, 1)
    assert ctx.coords(moved) == f.differential([g], ctx.coords(x))

def test_lie_derivative_of_constant_covector():
    # L_x beta = -beta([x, .]) for constant x and beta
    ctx = group('sl2')
    space = SpaceDescriptor.named(ctx, 'G')
    p = [random_point(ctx, 'G', 8).m]
    h_dual = lambda q: (0, 1, 0)
    assert lie_derivative_covector(space, lambda q: (1, 0, 0), h_dual, p) == (0, 0, -1)
    assert lie_derivative_covector(space, lambda q: (0, 0, 1), h_dual, p) == (1, 0, 0)

def test_lie_derivative_along_zero_field():
    ctx = group('gl2')
    space = SpaceDescriptor.named(ctx, 'G')
    p = [random_point(ctx, 'G', 4).m]
    beta = lambda q: ctx.coords(q[0] @ q[0])
    assert lie_derivative_covector(space, lambda q: (0,) * space.dim, beta, p) == (0,) * space.dim

@settings(max_examples=10)
@given(seeds)
def test_lie_derivative_leibniz_rule(seed):
    ctx = group('gl2')
    space = SpaceDescriptor.named(ctx, 'G')
    X = lambda q: ctx.coords(q[0] @ q[0])
    beta = lambda q: ctx.coords(q[0])
    f = lambda q: q[0].data[0][1] + q[0].data[0][0] * q[0].data[1][1]
    f_beta = lambda q: tuple(f(q) * b for b in beta(q))
    p = [random_point(ctx, 'G', seed).m]
    xf = directional(space, f, p, X(p))
    expected = tuple(xf * b + f(p) * l for b, l in zip(beta(p), lie_derivative_covector(space, X, beta, p)))
    assert lie_derivative_covector(space, X, f_beta, p) == expected
