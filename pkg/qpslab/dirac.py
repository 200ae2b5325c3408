# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

# You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an
# "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND,
# either express or implied.


# pylint: disable=too-many-arguments, too-many-locals, line-too-long,
# pylint: disable=invalid-name, missing-docstring

"""Pointwise Dirac linear algebra.

A fiber lives in T + T* of a space of tangent dimension d and is stored as
a subspace of 2d-dimensional coordinate space: the first d coordinates are
left-trivialized tangent coordinates, the last d are dual coordinates, so
that <(x, a), (y, b)> = a.y + b.x.
"""

from fractions import Fraction

from .corelinalg import QpslabError, Mat, Subspace, dot, hstack, vstack, intersect, kernel, rank, span
from .diffcalc import SpaceDescriptor, lie_bracket, lie_derivative_covector, interior_d
from .liegroup import AlgebraElement, Covector, LieContext, TangentVec


class FiberError(QpslabError):
    pass


def _jsonable(base):
    if base is None:
        return None
    if hasattr(base, 'to_json'):
        return base.to_json()
    if isinstance(base, (list, tuple)):
        return [_jsonable(b) for b in base]
    return str(base)


def split_pair(v, d):
    v = tuple(v)
    return v[:d], v[d:]


class DiracFiber(object):
    """A subspace of T + T* at one base point."""

    def __init__(self, base, dim, subspace):
        if subspace.ambient_dim != 2 * dim:
            raise FiberError("fiber subspace lives in dimension %d, expected %d" % (subspace.ambient_dim, 2 * dim))
        self.base = base
        self.dim = dim
        self.subspace = subspace

    @classmethod
    def from_pairs(cls, base, dim, pairs):
        return cls(base, dim, span([tuple(x) + tuple(a) for x, a in pairs], 2 * dim))

    def pairs(self):
        return [split_pair(v, self.dim) for v in self.subspace.vectors()]

    def gram(self):
        b = self.subspace.basis
        top = b.submatrix(range(self.dim), range(b.cols))
        bottom = b.submatrix(range(self.dim, 2 * self.dim), range(b.cols))
        return top.T @ bottom + bottom.T @ top

    def is_lagrangian(self):
        return is_lagrangian(self)

    def contains(self, pair):
        x, a = pair
        return self.subspace.contains(tuple(x) + tuple(a))

    def same_as(self, other):
        return self.dim == other.dim and self.subspace.same_as(other.subspace)

    def tangent_projection(self):
        return span([x for x, _ in self.pairs()], self.dim)

    def cotangent_part(self):
        """Covectors a with (0, a) in the fiber."""
        zero_t = span([tuple(Fraction(1) if k == self.dim + i else Fraction(0) for k in range(2 * self.dim)) for i in range(self.dim)], 2 * self.dim)
        return span([a for _, a in (split_pair(v, self.dim) for v in intersect(self.subspace, zero_t).vectors())], self.dim)

    def kernel_part(self):
        """Vectors x with (x, 0) in the fiber."""
        zero_c = span([tuple(Fraction(1) if k == i else Fraction(0) for k in range(2 * self.dim)) for i in range(self.dim)], 2 * self.dim)
        return span([x for x, _ in (split_pair(v, self.dim) for v in intersect(self.subspace, zero_c).vectors())], self.dim)

    def to_json(self):
        return {"base": _jsonable(self.base), "dim": self.dim, "basis": self.subspace.basis.to_json()}

    def __repr__(self):
        return "DiracFiber(dim %d of T+T*, d=%d)" % (self.subspace.dim, self.dim)


class DiracSection(object):
    """p -> (X(p), alpha(p)) on a space, with rational coordinate maps."""

    def __init__(self, space, tangent, form, name=None):
        self.space = space
        self.tangent = tangent
        self.form = form
        self.name = name

    def __call__(self, p):
        return tuple(self.tangent(p)), tuple(self.form(p))

    @classmethod
    def zero(cls, space):
        z = tuple(Fraction(0) for _ in range(space.dim))
        return cls(space, lambda p: z, lambda p: z, "0")


class TwoFormFiber(object):
    """Skew form on tangent coordinates: omega(x, y) = x^T W y."""

    def __init__(self, base, matrix, check=True):
        if check and not matrix.is_skew():
            raise FiberError("two-form matrix is not skew-symmetric")
        self.base = base
        self.matrix = matrix

    @property
    def dim(self):
        return self.matrix.rows

    def __call__(self, x, y):
        return dot(x, self.matrix.apply(y))

    def flat(self, x):
        return self.matrix.T.apply(x)

    def to_json(self):
        return {"base": _jsonable(self.base), "matrix": self.matrix.to_json()}


class BivectorFiber(object):
    """Skew form on dual coordinates: pi^#(alpha) = P alpha."""

    def __init__(self, base, matrix, check=True):
        if check and not matrix.is_skew():
            raise FiberError("bivector matrix is not skew-symmetric")
        self.base = base
        self.matrix = matrix

    @property
    def dim(self):
        return self.matrix.rows

    def __call__(self, alpha, beta):
        return dot(beta, self.sharp(alpha))

    def sharp(self, alpha):
        return self.matrix.apply(alpha)

    def inverse_form(self):
        """The two-form whose flat map inverts sharp."""
        return TwoFormFiber(self.base, self.matrix.inverse().T)

    def to_json(self):
        return {"base": _jsonable(self.base), "matrix": self.matrix.to_json()}


# Pairing and Lagrangian test
def _tangent_coords(x):
    return x.coords() if isinstance(x, TangentVec) else tuple(x)

def _covector_coords(a):
    return a.dual() if isinstance(a, Covector) else tuple(a)

def pairing(e1, e2):
    """<(x, a), (y, b)> = a(y) + b(x)."""
    x, a = _tangent_coords(e1[0]), _covector_coords(e1[1])
    y, b = _tangent_coords(e2[0]), _covector_coords(e2[1])
    return dot(a, y) + dot(b, x)

def is_lagrangian(F):
    """(passed, witness): isotropic of dimension d."""
    g = F.gram()
    for i in range(g.rows):
        for j in range(i, g.cols):
            if g[i, j] != 0:
                return False, {"reason": "not isotropic", "pair": [i, j], "value": str(g[i, j])}
    if F.subspace.dim != F.dim:
        return False, {"reason": "wrong dimension", "dim": F.subspace.dim, "expected": F.dim}
    return True, None


# Graphs
def graph_two_form(omega):
    d = omega.dim
    return DiracFiber(omega.base, d, Subspace(2 * d, vstack(Mat.identity(d), omega.matrix.T)))

def graph_bivector(pi):
    d = pi.dim
    return DiracFiber(pi.base, d, Subspace(2 * d, vstack(pi.matrix, Mat.identity(d))))


# Transport along maps
def _jacobian(f, p, jacobian):
    if jacobian is not None:
        return jacobian
    return f.jacobian(p)

def pullback(F, f, p, jacobian=None, base=None):
    """f^*F = {(X, J^T a) : (J X, a) in F} at p."""
    J = _jacobian(f, p, jacobian)
    m, n = J.rows, J.cols
    if m != F.dim:
        raise FiberError("map lands in dimension %d, fiber has %d" % (m, F.dim))
    B = F.subspace.basis
    Y = B.submatrix(range(m), range(B.cols))
    A = B.submatrix(range(m, 2 * m), range(B.cols))
    ker = kernel(hstack(J, -Y))
    vectors = []
    for v in ker.vectors():
        X, c = v[:n], v[n:]
        vectors.append(tuple(X) + J.T.apply(A.apply(c)))
    return DiracFiber(p if base is None else base, n, span(vectors, 2 * n))

def pushforward(F, f, p, jacobian=None, base=None, strict=False):
    """f_*F = {(J X, a) : (X, J^T a) in F} at p."""
    J = _jacobian(f, p, jacobian)
    m, n = J.rows, J.cols
    if n != F.dim:
        raise FiberError("map starts in dimension %d, fiber has %d" % (n, F.dim))
    B = F.subspace.basis
    X = B.submatrix(range(n), range(B.cols))
    A = B.submatrix(range(n, 2 * n), range(B.cols))
    ker = kernel(hstack(J.T, -A))
    vectors = []
    for v in ker.vectors():
        alpha, c = v[:m], v[m:]
        vectors.append(J.apply(X.apply(c)) + tuple(alpha))
    out = DiracFiber(base, m, span(vectors, 2 * m))
    if strict and out.subspace.dim != m:
        raise FiberError("pushforward collapsed to dimension %d < %d (rank of the map %d)" % (out.subspace.dim, m, rank(J)))
    return out


# Brackets
def cartan_three_form(ctx):
    lie = LieContext(ctx)
    return lambda p, x, y, z: lie.eta_coords(x, y, z)

def dorfman(s1, s2, eta3, p):
    """([X,Y], L_X beta - i_Y d alpha + eta3(X, Y, .)) at p."""
    space = s1.space
    X, alpha = s1.tangent, s1.form
    Y, beta = s2.tangent, s2.form
    tangent = lie_bracket(space, X, Y, p)
    lx = lie_derivative_covector(space, X, beta, p)
    iy = interior_d(space, alpha, p, Y(p))
    form = [a - b for a, b in zip(lx, iy)]
    if eta3 is not None and 'dorfman-eta' not in space.ctx.conventions:
        x, y = tuple(X(p)), tuple(Y(p))
        form = [f + eta3(p, x, y, space.unit(j)) for j, f in enumerate(form)]
    return tuple(tangent), tuple(form)


# Cartan-Dirac structure
def _conj_inv(gm, xi):
    return gm.inverse() @ xi @ gm

def cartan_dirac_pair(ctx, gm, xi):
    """(rho(xi), sigma(xi)) at gm in (coordinates, dual coordinates)."""
    conj = _conj_inv(gm, xi)
    return ctx.coords(xi - conj), ctx.to_dual(ctx.coords(ctx.sigma_combination(xi, conj)))

def cartan_dirac(g):
    ctx = g.ctx
    pairs = [cartan_dirac_pair(ctx, g.m, e) for e in ctx.basis]
    return DiracFiber(g, ctx.dim, span([x + a for x, a in pairs], 2 * ctx.dim))

def cartan_dirac_section(ctx, xi):
    """The section e_xi = (rho(xi), sigma(xi)) on G."""
    m = xi.m if isinstance(xi, AlgebraElement) else xi
    space = SpaceDescriptor.named(ctx, 'G')
    return DiracSection(space,
                        lambda p: cartan_dirac_pair(ctx, p[0], m)[0],
                        lambda p: cartan_dirac_pair(ctx, p[0], m)[1],
                        "e")

def dorfman_closure_defect(g, xi, zeta):
    """dorfman(e_xi, e_zeta) - e_[xi,zeta] at g, as (tangent, form) differences."""
    ctx = g.ctx
    xm = xi.m if isinstance(xi, AlgebraElement) else xi
    zm = zeta.m if isinstance(zeta, AlgebraElement) else zeta
    p = [g.m]
    t, f = dorfman(cartan_dirac_section(ctx, xm), cartan_dirac_section(ctx, zm), cartan_three_form(ctx), p)
    et, ef = cartan_dirac_pair(ctx, g.m, xm @ zm - zm @ xm)
    return tuple(a - b for a, b in zip(t, et)), tuple(a - b for a, b in zip(f, ef))
