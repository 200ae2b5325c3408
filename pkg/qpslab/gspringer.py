# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

# You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an
# "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND,
# either express or implied.


# pylint: disable=too-many-arguments, too-many-locals, too-many-branches, too-many-statements, line-too-long,
# pylint: disable=invalid-name, missing-docstring, too-many-instance-attributes

"""The fusion double G x G, its restriction to G x B and the quotient
G x_B B, with pointwise checks of the quasi-Poisson structure there.

Coordinates on G x B are (x, y): x in g (all ``dim`` coordinates), y in b
(the leading ``dim_b`` coordinates). A QuotientChart at a representative
(g, b) uses the complement of the vertical space spanned by the lower
triangular x-directions and all y-directions; chart coordinates list the
lower x-coordinates first.
"""

from fractions import Fraction
from itertools import permutations
import numpy as np

from .corelinalg import (QpslabError, Mat, SingularMatrix, dot, hstack, vstack, intersect,
                         rank, solve, span)
from . import corelinalg
from .diffcalc import PointedMap, SpaceDescriptor, d_two_form
from .dirac import (DiracFiber, TwoFormFiber, BivectorFiber, graph_two_form, pushforward,
                    cartan_dirac, is_lagrangian)
from .liegroup import (GroupContext, GroupElement, BorelContext, LieContext,
                       NotInGroup, chevalley, borel_decompose)


class GSError(QpslabError):
    pass

class NotRegularSemisimple(GSError):
    pass

class NotGraphical(GSError):
    pass

class ReconstructionError(GSError):
    pass


HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


# Points
class DoublePoint(object):
    """(a, b) in the double D_G = G x G."""
    __slots__ = ('a', 'b')

    def __init__(self, a, b):
        if a.ctx.name != b.ctx.name:
            raise GSError("double point mixes %s and %s" % (a.ctx.name, b.ctx.name))
        self.a = a
        self.b = b

    @property
    def ctx(self):
        return self.a.ctx

    def mats(self):
        return [self.a.m, self.b.m]

    def act(self, g1, g2):
        """(g1, g2).(a, b) = (g1 a g2^-1, g2 b g2^-1)."""
        g2inv = g2.inverse()
        return DoublePoint(g1 * self.a * g2inv, g2 * self.b * g2inv)

    def to_json(self):
        return {"group": self.ctx.name, "a": self.a.m.to_json(), "b": self.b.m.to_json()}

    @classmethod
    def from_json(cls, obj, ctx=None):
        ctx = ctx or GroupContext.from_name(obj["group"])
        backend = 'float' if ctx.backend == 'float' else 'exact'
        return cls(GroupElement(ctx, Mat.from_json(obj["a"], backend)), GroupElement(ctx, Mat.from_json(obj["b"], backend)))


class GSPoint(object):
    """[g : b] in G x_B B, kept as a representative pair."""
    __slots__ = ('g', 'b')

    def __init__(self, g, b):
        if g.ctx.name != b.ctx.name:
            raise GSError("point mixes %s and %s" % (g.ctx.name, b.ctx.name))
        if not BorelContext(b.ctx).contains(b):
            raise NotInGroup("second component of [g:b] is not upper triangular")
        self.g = g
        self.b = b

    @property
    def ctx(self):
        return self.g.ctx

    def mats(self):
        return [self.g.m, self.b.m]

    def equivalent(self, other):
        """[g1:b1] = [g2:b2] iff h = g2^-1 g1 lies in B and b2 = h b1 h^-1."""
        if self.g.m.backend == 'float' or other.g.m.backend == 'float':
            return float_equivalent(self, other)
        h = other.g.inverse() * self.g
        if not BorelContext(self.ctx).contains(h):
            return False
        return (h * self.b * h.inverse()).m == other.b.m

    def transform(self, h):
        """The representative (g h^-1, h b h^-1) of the same point."""
        if not BorelContext(self.ctx).contains(h):
            raise NotInGroup("representative change needs an element of B")
        hinv = h.inverse()
        return GSPoint(self.g * hinv, h * self.b * hinv)

    def act(self, k):
        """k.[g:b] = [kg:b]."""
        return GSPoint(k * self.g, self.b)

    def to_json(self):
        return {"group": self.ctx.name, "g": self.g.m.to_json(), "b": self.b.m.to_json()}

    @classmethod
    def from_json(cls, obj, ctx=None):
        try:
            ctx = ctx or GroupContext.from_name(obj["group"])
            backend = 'float' if ctx.backend == 'float' else 'exact'
            return cls(GroupElement(ctx, Mat.from_json(obj["g"], backend)), GroupElement(ctx, Mat.from_json(obj["b"], backend)))
        except KeyError as e:
            raise GSError("point JSON is missing %s" % e)


# The double
def phi(p):
    """Moment map (a, b) -> (a b a^-1, b^-1)."""
    ainv = p.a.inverse()
    return p.a * p.b * ainv, p.b.inverse()

def phi_map(ctx):
    gg = SpaceDescriptor.named(ctx, 'GxG')
    return PointedMap("phi", gg, gg, lambda q: [q[0] @ q[1] @ q[0].inverse(), q[1].inverse()])

def action_map(ctx, g1, g2):
    gg = SpaceDescriptor.named(ctx, 'GxG')
    g2inv = g2.inverse()
    return PointedMap("act", gg, gg, lambda q: [g1 @ q[0] @ g2inv, g2 @ q[1] @ g2inv])

def rho_double(ctx, a, b, xi1, xi2):
    """Generating field of (xi1, xi2) at (a, b): (xi2 - Ad_a^-1 xi1, xi2 - Ad_b^-1 xi2)."""
    x = xi2 - a.inverse() @ xi1 @ a
    y = xi2 - b.inverse() @ xi2 @ b
    return ctx.coords(x) + ctx.coords(y)

def omega_double_matrix(ctx, a, b):
    """The double's 2-form at (a, b) in (x, y) coordinates.

    With B = Ad_b and (.,.) the trace form,
    omega = -1/2[(x1, y2) - (x2, y1)]
            -1/2[(x1, B y2) - (x1, B x2) - (x2, B y1) + (x2, B x1)].
    Entries follow the type of b, so dual points give dual matrices.
    """
    K = ctx.gram()
    KM = K @ ctx.Ad_matrix(b)
    KMt = KM.T
    xx = (KM - KMt).scale(HALF)
    xy = (K + KM).scale(-HALF)
    yx = (K + KMt).scale(HALF)
    yy = Mat.zeros(ctx.dim, ctx.dim)
    om = vstack(hstack(xx, xy), hstack(yx, yy))
    if 'omega-sign' in ctx.conventions:
        om = -om
    return om

def omega_double(p):
    return TwoFormFiber(p, omega_double_matrix(p.ctx, p.a.m, p.b.m), check=False)

def sigma_dual(ctx, gm, xi):
    """Dual coordinates of sigma(xi) at gm."""
    return ctx.to_dual(ctx.coords(ctx.sigma_combination(xi, gm.inverse() @ xi @ gm)))

def moment_condition_check(p, xi1, xi2):
    """omega^flat(rho(xi1, xi2)) = Phi^*(sigma(xi1), sigma(xi2))."""
    ctx = p.ctx
    om = omega_double_matrix(ctx, p.a.m, p.b.m)
    v = rho_double(ctx, p.a.m, p.b.m, xi1, xi2)
    lhs = om.T.apply(v)
    f1, f2 = phi(p)
    J = phi_map(ctx).jacobian(p.mats())
    rhs = J.T.apply(sigma_dual(ctx, f1.m, xi1) + sigma_dual(ctx, f2.m, xi2))
    if lhs == rhs:
        return True, None
    return False, {"omega_flat": [str(x) for x in lhs], "phi_sigma": [str(x) for x in rhs]}

def closedness_check(p, u, v, w):
    """d omega(u, v, w) = -(Phi_1^* eta + Phi_2^* eta)(u, v, w)."""
    ctx = p.ctx
    space = SpaceDescriptor.named(ctx, 'GxG')
    lie = LieContext(ctx)
    lhs = d_two_form(space, lambda q: omega_double_matrix(ctx, q[0], q[1]), p.mats(), u, v, w)
    J = phi_map(ctx).jacobian(p.mats())
    d = ctx.dim
    rhs = Fraction(0)
    for rows in (range(d), range(d, 2 * d)):
        Jk = J.submatrix(rows, range(2 * d))
        rhs -= lie.eta_coords(Jk.apply(u), Jk.apply(v), Jk.apply(w))
    if lhs == rhs:
        return True, None
    return False, {"d_omega": str(lhs), "minus_phi_eta": str(rhs)}

def nondegeneracy_check(p):
    """ker omega and ker dPhi intersect trivially."""
    ctx = p.ctx
    om = omega_double_matrix(ctx, p.a.m, p.b.m)
    J = phi_map(ctx).jacobian(p.mats())
    r = rank(vstack(om, J))
    if r == 2 * ctx.dim:
        return True, None
    return False, {"rank": r, "expected": 2 * ctx.dim}

def invariance_check(p, g1, g2):
    """omega at (g1, g2).p pulled back along the action equals omega at p."""
    ctx = p.ctx
    J = action_map(ctx, g1.m, g2.m).jacobian(p.mats())
    q = p.act(g1, g2)
    pulled = J.T @ omega_double_matrix(ctx, q.a.m, q.b.m) @ J
    if pulled == omega_double_matrix(ctx, p.a.m, p.b.m):
        return True, None
    return False, {"g1": g1.m.to_json(), "g2": g2.m.to_json()}


# Restriction to G x B
def gxb_indices(ctx):
    return list(range(ctx.dim)) + [ctx.dim + i for i in ctx.b_idx]

def gxu_indices(ctx):
    return list(range(ctx.dim)) + [ctx.dim + i for i in ctx.u_idx]

def restricted_form(ctx, g, b):
    idx = gxb_indices(ctx)
    return omega_double_matrix(ctx, g, b).submatrix(idx, idx)

def restrict_to_GxB(g, b):
    """Graph of j^*omega on T(G x B)."""
    if not BorelContext(b.ctx).contains(b):
        raise NotInGroup("restriction to G x B needs b upper triangular")
    return graph_two_form(TwoFormFiber((g, b), restricted_form(g.ctx, g.m, b.m), check=False))

def rho_borel(ctx, b, xi):
    """rho_D(0, xi) at (g, b) for xi in b, in G x B coordinates."""
    y = xi - b.inverse() @ xi @ b
    return ctx.coords(xi) + tuple(ctx.coords(y)[i] for i in ctx.b_idx)

def regact_check(g, b):
    """(dim of rho(0 + b) cap j^*L, passed, witness)."""
    ctx = g.ctx
    fiber = restrict_to_GxB(g, b)
    n = fiber.dim
    zero = (Fraction(0),) * n
    along_b = span([rho_borel(ctx, b.m, ctx.basis[i]) + zero for i in ctx.b_idx], 2 * n)
    along_u = span([rho_borel(ctx, b.m, ctx.basis[i]) + zero for i in ctx.u_idx], 2 * n)
    meet = intersect(along_b, fiber.subspace)
    passed = meet.dim == ctx.dim_u and meet.same_as(along_u)
    witness = None if passed else {"dim": meet.dim, "expected": ctx.dim_u}
    return meet.dim, passed, witness


# The quotient
class QuotientChart(object):
    """Chart of G x_B B at a representative (g, b)."""

    def __init__(self, g, b):
        self.g = g
        self.b = b
        self.ctx = ctx = g.ctx
        self.dim = ctx.dim
        self.lift_dim = ctx.dim + ctx.dim_b
        self.n_low = ctx.dim - ctx.dim_b
        self.complement_idx = list(ctx.low_idx) + [ctx.dim + k for k in range(ctx.dim_b)]

    def vertical(self):
        """Directions of the B-orbit h.(g, b) = (g h^-1, h b h^-1)."""
        return span([rho_borel(self.ctx, self.b.m, self.ctx.basis[i]) for i in self.ctx.b_idx], self.lift_dim)

    def complement(self):
        return span([tuple(Fraction(1) if k == i else Fraction(0) for k in range(self.lift_dim)) for i in self.complement_idx], self.lift_dim)

    def is_valid(self):
        return self.vertical().dim == self.ctx.dim_b and rank(hstack(self.vertical().basis, self.complement().basis)) == self.lift_dim

    def lift(self):
        """Chart coordinates -> G x B coordinates (the complement inclusion)."""
        cols = []
        for i in self.complement_idx:
            cols.append(tuple(Fraction(1) if k == i else Fraction(0) for k in range(self.lift_dim)))
        return Mat.from_columns(cols, self.lift_dim)

    def projection(self):
        """q_* : (x, y) -> (x_low, y + Ad_b^-1 x_b - x_b)."""
        ctx = self.ctx
        binv = self.b.m.inverse()
        cols = []
        for i in range(ctx.dim):
            col = [Fraction(0)] * self.dim
            if i >= ctx.dim_b:
                col[i - ctx.dim_b] = Fraction(1)
            else:
                e = ctx.basis[i]
                shift = ctx.coords(binv @ e @ self.b.m - e)
                for k in range(ctx.dim_b):
                    col[self.n_low + k] = shift[k]
            cols.append(col)
        for k in range(ctx.dim_b):
            col = [Fraction(0)] * self.dim
            col[self.n_low + k] = Fraction(1)
            cols.append(col)
        return Mat.from_columns(cols, self.dim)

    def transport(self, h):
        """Chart coordinates at (g, b) -> chart coordinates at (g h^-1, h b h^-1)."""
        ctx = self.ctx
        other = self.point().transform(h)
        A = ctx.Ad_matrix(h.m)
        Ab = A.submatrix(ctx.b_idx, ctx.b_idx)
        zero_gb = Mat.zeros(ctx.dim, ctx.dim_b)
        dR = vstack(hstack(A, zero_gb), hstack(zero_gb.T, Ab))
        return QuotientChart(other.g, other.b).projection() @ dR @ self.lift()

    def point(self):
        return GSPoint(self.g, self.b)


def gxb_space(ctx):
    return SpaceDescriptor.named(ctx, 'GxB')

def phi_on_GxB(ctx):
    """Phi restricted to G x B."""
    inclusion = PointedMap("j", gxb_space(ctx), SpaceDescriptor.named(ctx, 'GxG'), lambda q: q)
    return phi_map(ctx).compose(inclusion)

def mu_lift_map(ctx):
    """(g, b) -> g b g^-1, the moment map read on G x B."""
    return PointedMap("mu", gxb_space(ctx), SpaceDescriptor.named(ctx, 'G'), lambda q: [q[0] @ q[1] @ q[0].inverse()])

def lambda_lift_map(ctx):
    """(g, b) -> diagonal part of b."""
    return PointedMap("lambda", gxb_space(ctx), SpaceDescriptor.named(ctx, 'T'),
                      lambda q: [Mat.diag([q[1].data[k][k] for k in range(ctx.n)])])

def mu(p):
    return p.g * p.b * p.g.inverse()

def lambda_(p):
    return borel_decompose(p.b)[0]

def kappa_T(t):
    return chevalley(t)


class QuotientData(object):
    """Everything the quotient checks need at one representative."""

    def __init__(self, p):
        self.p = p
        self.ctx = ctx = p.ctx
        self.chart = QuotientChart(p.g, p.b)
        self.Q = self.chart.projection()
        self.W = self.chart.lift()
        self.lifted = restrict_to_GxB(p.g, p.b)
        self.fiber = pushforward(self.lifted, None, None, jacobian=self.Q, base=p, strict=True)
        self.J_lift = mu_lift_map(ctx).jacobian(p.mats())
        self.D_mu = self.J_lift @ self.W
        self.D_lambda = lambda_lift_map(ctx).jacobian(p.mats()) @ self.W
        self.mu = mu(p)

    def action_field(self, xi):
        """q_* rho_D(xi, 0) at [g:b]."""
        ctx = self.ctx
        x = ctx.coords(-(self.p.g.m.inverse() @ xi @ self.p.g.m))
        return self.Q.apply(x + (Fraction(0),) * ctx.dim_b)

    def action_matrix(self):
        return Mat.from_columns([self.action_field(e) for e in self.ctx.basis], self.ctx.dim)

    def mu_sigma(self, xi):
        """mu^* sigma(xi) in chart dual coordinates."""
        return self.D_mu.T.apply(sigma_dual(self.ctx, self.mu.m, xi))


def quotient_fiber(p):
    """q_* j^* L at [g:b] in the chart of its representative."""
    return QuotientData(p).fiber

def representative_independence_check(p, h):
    """Fibers from (g, b) and (g h^-1, h b h^-1) agree under the chart change."""
    here = QuotientData(p)
    there = quotient_fiber(p.transform(h))
    M = here.chart.transport(h)
    Minv_T = M.inverse().T
    moved = DiracFiber.from_pairs(there.base, there.dim,
                                  [(M.apply(x), Minv_T.apply(a)) for x, a in here.fiber.pairs()])
    if moved.same_as(there):
        return True, None
    return False, {"h": h.m.to_json()}


def theorem1_check(p):
    """Rows (check_id, passed, witness) for the quotient Dirac structure at p."""
    data = QuotientData(p)
    ctx = data.ctx
    L = data.fiber
    rows = []

    ok, witness = is_lagrangian(L)
    rows.append(("lagrangian", ok, witness))

    target = cartan_dirac(data.mu)
    pushed = pushforward(L, None, None, jacobian=data.D_mu, base=data.mu)
    ok = pushed.same_as(target)
    rows.append(("f-dirac", ok, None if ok else {"pushed_dim": pushed.subspace.dim, "target_dim": target.subspace.dim}))

    kernel_dirs = [tuple(x) + (Fraction(0),) * ctx.dim for x in corelinalg.kernel(data.D_mu).vectors()]
    meet = intersect(span(kernel_dirs, 2 * ctx.dim), L.subspace) if kernel_dirs else None
    ok = meet is None or meet.dim == 0
    rows.append(("kernel", ok, None if ok else {"dim": meet.dim}))

    bad = []
    for i, e in enumerate(ctx.basis):
        if not L.contains((data.action_field(e), data.mu_sigma(e))):
            bad.append(i)
    rows.append(("induced-action", not bad, {"basis_indices": bad} if bad else None))

    # pr_1 o Phi o j = mu o q on G x B
    doubled = pushforward(data.lifted, None, None, jacobian=phi_on_GxB(ctx).jacobian(p.mats()),
                          base=(data.mu, p.b.inverse()))
    first = hstack(Mat.identity(ctx.dim), Mat.zeros(ctx.dim, ctx.dim))
    composite = pushforward(doubled, None, None, jacobian=first, base=data.mu)
    ok = composite.same_as(pushed)
    rows.append(("commutation", ok, None if ok else {"composite_dim": composite.subspace.dim, "pushed_dim": pushed.subspace.dim}))
    return rows

def leaf_subspace(p, data=None):
    """q_* T(G x tU) at [g : tu]."""
    data = data or QuotientData(p)
    ctx = data.ctx
    lift_dim = data.chart.lift_dim
    dirs = [k for k in range(ctx.dim)] + [ctx.dim + i for i in ctx.u_idx]
    vectors = [data.Q.apply(tuple(Fraction(1) if k == i else Fraction(0) for k in range(lift_dim))) for i in dirs]
    return span(vectors, ctx.dim)

def theorem2_check(p):
    data = QuotientData(p)
    ctx = data.ctx
    rows = []
    projected = data.fiber.tangent_projection()
    leaf = leaf_subspace(p, data)
    expected = ctx.dim - ctx.rank
    ok = projected.same_as(leaf) and projected.dim == expected
    rows.append(("leaf-tangent", ok, None if ok else {"projection_dim": projected.dim, "leaf_dim": leaf.dim, "expected": expected}))
    ok = all(all(x == 0 for x in data.D_lambda.apply(v)) for v in projected.vectors())
    rows.append(("lambda-constant", ok, None if ok else {"reason": "d lambda does not vanish on the leaf"}))
    return rows


def kernel_condition(b, xi):
    """True when (xi + Ad_b xi, x) = 0 for every x in b."""
    ctx = b.ctx
    combined = ctx.sigma_combination(xi, b.m @ xi @ b.m.inverse())
    return all(ctx.inner(combined, ctx.basis[i]) == 0 for i in ctx.b_idx)

def kernel_lemma_check(b, xi):
    """The kernel condition holds exactly when the torus part of xi vanishes."""
    ctx = b.ctx
    c = ctx.coords(xi)
    if any(c[i] != 0 for i in ctx.low_idx):
        raise NotInGroup("kernel condition is stated for xi in b")
    torus_free = all(c[i] == 0 for i in ctx.t_idx)
    holds = kernel_condition(b, xi)
    if holds == torus_free:
        return True, None
    return False, {"xi": xi.to_json(), "condition_holds": holds, "torus_part_zero": torus_free}


def residual_action_check(p, k, xi):
    """The G-action k.[g:b] = [kg:b]: mu is equivariant and the generating
    field of exp(-t xi) is q_* rho_D(xi, 0)."""
    ctx = p.ctx
    rows = []
    moved = mu(p.act(k))
    ok = moved.m == (k * mu(p) * k.inverse()).m
    rows.append(("residual-equivariance", ok, None if ok else {"k": k.m.to_json()}))

    g, b = p.g.m, p.b.m
    orbit = PointedMap("orbit", SpaceDescriptor.named(ctx, 'G'), gxb_space(ctx), lambda q: [q[0] @ g, b])
    lifted = orbit.differential([Mat.identity(ctx.n)], [-xi])
    data = QuotientData(p)
    field = data.Q.apply(lifted)
    ok = field == data.action_field(xi)
    rows.append(("residual-field", ok, None if ok else {"xi": xi.to_json()}))
    return rows


# Leaf forms
def _covector_over(L, x):
    """Some a with (x, a) in L."""
    d = L.dim
    B = L.subspace.basis
    X = B.submatrix(range(d), range(B.cols))
    A = B.submatrix(range(d, 2 * d), range(B.cols))
    try:
        c = solve(X, x)
    except SingularMatrix:
        raise NotGraphical("fiber has no covector over a leaf direction")
    return A.apply(c)

def leaf_form_value(L, x, y):
    return dot(_covector_over(L, x), y)

def leaf_two_form(p, data=None):
    """The presymplectic form on the leaf through p, on a basis of the leaf directions.

    Returns the TwoFormFiber together with the basis it is written in.
    """
    data = data or QuotientData(p)
    L = data.fiber
    basis = L.tangent_projection().vectors()
    covectors = [_covector_over(L, s) for s in basis]
    matrix = Mat([[dot(a, s) for s in basis] for a in covectors], len(basis), len(basis))
    return TwoFormFiber(p, matrix, check=False), basis

def leaf_checks(p, rng=None, triples=1):
    """Rows for skewness, the restricted moment identity, agreement with j^*omega
    on G x tU, and d omega_leaf = -mu^* eta along leaf directions."""
    data = QuotientData(p)
    ctx = data.ctx
    L = data.fiber
    rows = []
    form, basis = leaf_two_form(p, data)
    ok = form.matrix.is_skew()
    rows.append(("leaf-skew", ok, None if ok else {"matrix": form.matrix.to_json()}))

    bad = []
    for i, e in enumerate(ctx.basis):
        v = data.action_field(e)
        lhs = [leaf_form_value(L, v, s) for s in basis]
        rhs = [dot(data.mu_sigma(e), s) for s in basis]
        if lhs != rhs:
            bad.append(i)
    rows.append(("leaf-moment", not bad, {"basis_indices": bad} if bad else None))

    # q^* omega_leaf is j^* omega on G x tU
    idx = gxu_indices(ctx)
    lift_dim = data.chart.lift_dim
    full_idx = list(range(ctx.dim)) + [ctx.dim + i for i in ctx.u_idx]
    units = [tuple(Fraction(1) if k == i else Fraction(0) for k in range(lift_dim)) for i in full_idx]
    om = omega_double_matrix(ctx, p.g.m, p.b.m).submatrix(idx, idx)
    mismatch = []
    for i, ui in enumerate(units):
        for j in range(i + 1, len(units)):
            if leaf_form_value(L, data.Q.apply(ui), data.Q.apply(units[j])) != om[i, j]:
                mismatch.append([i, j])
    rows.append(("leaf-lift", not mismatch, {"pairs": mismatch[:5]} if mismatch else None))

    space = SpaceDescriptor.named(ctx, 'GxU')
    lie = LieContext(ctx)
    J = PointedMap("mu", space, SpaceDescriptor.named(ctx, 'G'), lambda q: [q[0] @ q[1] @ q[0].inverse()]).jacobian(p.mats())

    def family(q):
        return omega_double_matrix(ctx, q[0], q[1]).submatrix(idx, idx)

    failures = []
    for _ in range(triples):
        u, v, w = [_random_vector(rng, space.dim) for _ in range(3)]
        lhs = d_two_form(space, family, p.mats(), u, v, w)
        rhs = -lie.eta_coords(J.apply(u), J.apply(v), J.apply(w))
        if lhs != rhs:
            failures.append({"d_omega": str(lhs), "minus_mu_eta": str(rhs)})
    rows.append(("leaf-closed", not failures, {"triples": failures} if failures else None))
    return rows

def _random_vector(rng, n):
    if rng is None:
        return tuple(Fraction(k + 1, n + k) for k in range(n))
    return tuple(rng.rational(5) for _ in range(n))


# Bivector
class Reconstruction(object):
    def __init__(self, pi, C, R, data):
        self.pi = pi
        self.C = C
        self.R = R
        self.data = data

def _reconstruct(p):
    data = QuotientData(p)
    ctx = data.ctx
    d = ctx.dim
    L = data.fiber
    R = data.action_matrix()
    A = ctx.Ad_matrix(data.mu.m)
    Ainv = A.inverse()
    I = Mat.identity(d)
    Kinv = ctx.gram_inverse()
    C = I - (R @ (I - A) @ data.D_mu).scale(QUARTER)
    target = (I + Ainv).scale(-HALF) @ Kinv @ R.T
    B = L.subspace.basis
    X = B.submatrix(range(d), range(B.cols))
    Acov = B.submatrix(range(d, 2 * d), range(B.cols))
    system = vstack(Acov, data.D_mu @ X)
    if rank(system) != B.cols:
        raise ReconstructionError("X_alpha is not unique: kernel condition fails")
    columns = []
    for k in range(d):
        alpha = tuple(Fraction(1) if i == k else Fraction(0) for i in range(d))
        rhs = C.T.apply(alpha) + target.apply(alpha)
        try:
            c = solve(system, rhs)
        except SingularMatrix:
            raise ReconstructionError("no X_alpha for the covector e^%d" % k)
        columns.append(X.apply(c))
    pi = BivectorFiber(p, Mat.from_columns(columns, d), check=False)
    return Reconstruction(pi, C, R, data)

def reconstruct_bivector(p):
    return _reconstruct(p).pi

def bivector_checks(p):
    rows = []
    try:
        rec = _reconstruct(p)
    except ReconstructionError as e:
        return [("bivector-solve", False, {"reason": str(e)})]
    data = rec.data
    ctx = data.ctx
    d = ctx.dim
    P = rec.pi.matrix
    ok = P.is_skew()
    rows.append(("bivector-skew", ok, None if ok else {"matrix": P.to_json()}))

    A = ctx.Ad_matrix(data.mu.m)
    lhs = P @ data.D_mu.T
    rhs = rec.R @ (Mat.identity(d) + A).scale(HALF) @ ctx.gram_inverse()
    ok = lhs == rhs
    rows.append(("bivector-moment", ok, None if ok else {"pi_mu": lhs.to_json(), "rho_sigma": rhs.to_json()}))

    pairs = []
    for k in range(d):
        alpha = tuple(Fraction(1) if i == k else Fraction(0) for i in range(d))
        pairs.append((rec.pi.sharp(alpha), rec.C.T.apply(alpha)))
    for e in ctx.basis:
        pairs.append((data.action_field(e), data.mu_sigma(e)))
    regenerated = DiracFiber.from_pairs(p, d, pairs)
    ok = regenerated.same_as(data.fiber)
    rows.append(("bivector-graph", ok, None if ok else {"dim": regenerated.subspace.dim, "expected": d}))
    return rows


# Steinberg fibers
class SteinbergFiber(object):
    """F_t = {g : kappa(g) = kappa(t)}."""

    def __init__(self, t):
        if not BorelContext(t.ctx).in_torus(t):
            raise NotInGroup("Steinberg fibers are indexed by diagonal elements")
        self.t = t
        self.value = chevalley(t)

    def contains(self, g):
        value = chevalley(g)
        if 'float' not in (g.m.backend, self.t.m.backend):
            return value == self.value
        tol = corelinalg.tolerance
        return all(abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(b))) for a, b in zip(value, self.value))

def steinberg_membership(g, t):
    return SteinbergFiber(t).contains(g)

def diagram_check(p):
    """kappa(mu(p)) = kappa_T(lambda(p))."""
    left, right = chevalley(mu(p)), kappa_T(lambda_(p))
    if left == right:
        return True, None
    return False, {"kappa_mu": [str(x) for x in left], "kappa_lambda": [str(x) for x in right]}


# Roots are polished on the characteristic polynomial until |p(r)| is at
# this level relative to the size of its coefficients
ROOT_RESIDUAL = 1e-12

def characteristic_coefficients(a):
    """Monic characteristic polynomial of a, highest degree first."""
    e = chevalley(a)
    return np.array([1.0] + [(-1) ** (k + 1) * complex(x) for k, x in enumerate(e)], dtype=complex)

def _quadratic_roots(c):
    s = np.sqrt(c[1] * c[1] - 4 * c[2])
    return np.array([(-c[1] + s) / 2, (-c[1] - s) / 2])

def _cubic_roots(c):
    a, b, d = c[1], c[2], c[3]
    p = b - a * a / 3
    q = 2 * a ** 3 / 27 - a * b / 3 + d
    s = np.sqrt(q * q / 4 + p ** 3 / 27)
    w = -q / 2 + s if abs(-q / 2 + s) >= abs(-q / 2 - s) else -q / 2 - s
    if w == 0:
        return np.full(3, -a / 3)
    u = w ** (1.0 / 3)
    omega = np.exp(2j * np.pi / 3)
    return np.array([omega ** k * u - p / (3 * omega ** k * u) - a / 3 for k in range(3)])

def polish_root(coeffs, r, steps=50):
    """Newton iteration on the polynomial with the given coefficients."""
    deriv = np.polyder(coeffs)
    for _ in range(steps):
        value = np.polyval(coeffs, r)
        slope = np.polyval(deriv, r)
        if value == 0 or slope == 0:
            break
        step = value / slope
        r = r - step
        if abs(step) <= 1e-16 * max(1.0, abs(r)):
            break
    return r

def root_residual(coeffs, r):
    return abs(np.polyval(coeffs, r)) / float(np.max(np.abs(coeffs)))

def characteristic_roots(a):
    """Eigenvalues of the matrix a, closed form for n <= 3, polished by Newton."""
    coeffs = characteristic_coefficients(a)
    n = len(coeffs) - 1
    if n == 2:
        roots = _quadratic_roots(coeffs)
    elif n == 3:
        roots = _cubic_roots(coeffs)
    else:
        roots = np.linalg.eigvals(a.to_numpy())
    return np.array([polish_root(coeffs, r) for r in roots])

def _null_vector(a, value):
    _, _, vh = np.linalg.svd(a - value * np.eye(a.shape[0]))
    return vh[-1].conj()


def weyl_fiber_enum(g):
    """The |W| points of mu^-1(g) for regular semisimple g (float backend)."""
    ctx = g.ctx
    fctx = GroupContext(ctx.family, ctx.n, ctx.form_scale, 'float', ctx.conventions)
    a = g.m.to_numpy()
    vals = characteristic_roots(g.m)
    scale = max(1.0, float(np.max(np.abs(vals))))
    tol = corelinalg.tolerance
    for i in range(ctx.n):
        for j in range(i + 1, ctx.n):
            if abs(vals[i] - vals[j]) <= tol ** 0.5 * scale:
                raise NotRegularSemisimple("not regular semisimple: eigenvalues %s and %s coincide" % (vals[i], vals[j]))
    vecs = np.column_stack([_null_vector(a, v) for v in vals])
    points = []
    for perm in permutations(range(ctx.n)):
        P = vecs[:, list(perm)].copy()
        if ctx.family == 'SL':
            P[:, 0] = P[:, 0] / np.linalg.det(P)
        D = np.diag(vals[list(perm)])
        points.append(GSPoint(GroupElement(fctx, _float_mat(P)), GroupElement(fctx, _float_mat(D))))
    return points

def _float_mat(a):
    return Mat([[complex(x) for x in row] for row in a], a.shape[0], a.shape[1], 'float')

def mu_residual(p, g):
    """Largest entry of mu(p) - g relative to the size of g."""
    a = g.m.to_numpy()
    return float(np.max(np.abs(mu(p).m.to_numpy() - a))) / max(1.0, float(np.max(np.abs(a))))

def float_equivalent(p1, p2):
    """Equivalence of float representatives up to the tolerance."""
    h = p2.g.m.inverse() @ p1.g.m
    a = h.to_numpy()
    scale = max(1.0, float(np.max(np.abs(a))))
    n = a.shape[0]
    if any(abs(a[i, j]) > 1e-8 * scale for i in range(n) for j in range(i)):
        return False
    moved = (h @ p1.b.m @ h.inverse()).to_numpy()
    return bool(np.all(np.abs(moved - p2.b.m.to_numpy()) <= 1e-8 * scale))