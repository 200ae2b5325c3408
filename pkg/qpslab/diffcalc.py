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

"""Forward-mode differentiation of rational matrix maps.

A point of a product space is a list of n x n matrices, one per factor.
Moving it along a left-trivialized direction x uses the first-order curve
p.(I + t.x); evaluating a map on dual matrices along that curve yields its
differential exactly. Vector fields, covector families and 2-form families
are plain callables on points and must only use ring operations and matrix
inversion, so that they accept dual points as well.

Every dual evaluation gets its own tag; nested evaluations (brackets of
brackets) keep the most recent tag outermost.
"""

from fractions import Fraction
from itertools import count

from .corelinalg import QpslabError, Mat, dot


class TangentError(QpslabError):
    pass


_tags = count(1)

def _num(x):
    return Fraction(x) if isinstance(x, int) and not isinstance(x, bool) else x


class DualScalar(object):
    """a + b.eps with eps^2 = 0, for one differentiation tag."""
    __slots__ = ('value', 'deriv', 'tag')

    def __init__(self, value, deriv=0, tag=0):
        self.value = _num(value)
        self.deriv = _num(deriv)
        self.tag = tag

    def _parts(self, other):
        if isinstance(other, DualScalar) and other.tag == self.tag:
            return other.value, other.deriv
        return other, 0

    def _outer(self, other):
        return isinstance(other, DualScalar) and other.tag > self.tag

    def __add__(self, other):
        if self._outer(other):
            return other.__radd__(self)
        v, d = self._parts(other)
        return DualScalar(self.value + v, self.deriv + d, self.tag)

    def __radd__(self, other):
        return DualScalar(other + self.value, self.deriv, self.tag)

    def __sub__(self, other):
        if self._outer(other):
            return other.__rsub__(self)
        v, d = self._parts(other)
        return DualScalar(self.value - v, self.deriv - d, self.tag)

    def __rsub__(self, other):
        return DualScalar(other - self.value, -self.deriv, self.tag)

    def __mul__(self, other):
        if self._outer(other):
            return other.__rmul__(self)
        v, d = self._parts(other)
        return DualScalar(self.value * v, self.value * d + self.deriv * v, self.tag)

    def __rmul__(self, other):
        return DualScalar(other * self.value, other * self.deriv, self.tag)

    def __truediv__(self, other):
        if self._outer(other):
            return other.__rtruediv__(self)
        v, d = self._parts(other)
        return DualScalar(self.value / v, (self.deriv * v - self.value * d) / (v * v), self.tag)

    def __rtruediv__(self, other):
        return DualScalar(other / self.value, -(other * self.deriv) / (self.value * self.value), self.tag)

    def __neg__(self):
        return DualScalar(-self.value, -self.deriv, self.tag)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, DualScalar) and other.tag != self.tag:
            if other.tag > self.tag:
                return other == self
            return self.value == other and self.deriv == 0
        v, d = self._parts(other)
        return self.value == v and self.deriv == d

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __complex__(self):
        raise TypeError("a dual number has no complex value")

    def __repr__(self):
        return "DualScalar(%s, %s, tag=%d)" % (self.value, self.deriv, self.tag)


def _part(obj, tag, deriv):
    """Value or derivative part of a (possibly nested) dual object for one tag."""
    if isinstance(obj, Mat):
        return Mat([[_part(x, tag, deriv) for x in row] for row in obj.data], obj.rows, obj.cols)
    if isinstance(obj, (tuple, list)):
        return tuple(_part(x, tag, deriv) for x in obj)
    if isinstance(obj, DualScalar):
        if obj.tag == tag:
            return obj.deriv if deriv else obj.value
        if obj.tag > tag:
            return DualScalar(_part(obj.value, tag, deriv), _part(obj.deriv, tag, deriv), obj.tag)
    return Fraction(0) if deriv else obj

def value_part(obj, tag):
    return _part(obj, tag, False)

def deriv_part(obj, tag):
    return _part(obj, tag, True)


def dual_point(m, direction, tag=None):
    """The curve m.(I + t.direction) as a dual matrix."""
    tag = next(_tags) if tag is None else tag
    d = m @ direction
    return Mat([[DualScalar(m.data[i][j], d.data[i][j], tag) for j in range(m.cols)] for i in range(m.rows)], m.rows, m.cols, 'dual')


class SpaceDescriptor(object):
    """A product of group factors with left-trivialized coordinates.

    Factor kinds: ``G`` (all of g), ``B`` (b), ``T`` (t) and ``U`` (the
    u-directions, valid at any point of a coset tU).
    """

    NAMED = {
        'G': ('G',),
        'GxG': ('G', 'G'),
        'GxB': ('G', 'B'),
        'GxU': ('G', 'U'),
        'T': ('T',),
        'B': ('B',),
    }

    def __init__(self, ctx, factors):
        self.ctx = ctx
        self.factors = tuple(factors)
        self.indices = []
        for kind in self.factors:
            if kind == 'G':
                self.indices.append(list(range(ctx.dim)))
            elif kind == 'B':
                self.indices.append(list(ctx.b_idx))
            elif kind == 'T':
                self.indices.append(list(ctx.t_idx))
            elif kind == 'U':
                self.indices.append(list(ctx.u_idx))
            else:
                raise TangentError("unknown factor kind %r" % kind)
        self.dims = [len(idx) for idx in self.indices]
        self.dim = sum(self.dims)

    @classmethod
    def named(cls, ctx, name):
        try:
            return cls(ctx, cls.NAMED[name])
        except KeyError:
            raise TangentError("unknown space %r (supported: %s)" % (name, ", ".join(sorted(cls.NAMED))))

    @property
    def name(self):
        return "x".join(self.factors)

    def offsets(self):
        out, acc = [], 0
        for d in self.dims:
            out.append(acc)
            acc += d
        return out

    def split(self, flat):
        flat = tuple(flat)
        if len(flat) != self.dim:
            raise TangentError("expected %d coordinates on %s, got %d" % (self.dim, self.name, len(flat)))
        return [flat[o:o + d] for o, d in zip(self.offsets(), self.dims)]

    def embed(self, k, seg):
        full = [Fraction(0)] * self.ctx.dim
        for i, x in zip(self.indices[k], seg):
            full[i] = x
        return full

    def directions(self, flat):
        return [self.ctx.element(self.embed(k, seg)) for k, seg in enumerate(self.split(flat))]

    def flatten(self, mats):
        """Coordinates of one algebra matrix per factor; raises when a matrix leaves its factor."""
        if len(mats) != len(self.factors):
            raise TangentError("expected %d directions on %s, got %d" % (len(self.factors), self.name, len(mats)))
        out = []
        for k, m in enumerate(mats):
            if self.ctx.family == 'SL' and m.backend == 'exact' and m.trace() != 0:
                raise TangentError("direction with trace %s is not tangent to %s" % (m.trace(), self.ctx.name.upper()))
            full = self.ctx.coords(m)
            if self.ctx.element(full) != m:
                raise TangentError("direction is not in the Lie algebra of %s" % self.ctx.name)
            idx = set(self.indices[k])
            if any(x != 0 for i, x in enumerate(full) if i not in idx):
                raise TangentError("direction leaves the %s factor of %s" % (self.factors[k], self.name))
            out.extend(full[i] for i in self.indices[k])
        return tuple(out)

    def coords(self, mats):
        out = []
        for k, m in enumerate(mats):
            full = self.ctx.coords(m)
            out.extend(full[i] for i in self.indices[k])
        return tuple(out)

    def dual_point(self, point, flat, tag):
        return [dual_point(p, d, tag) for p, d in zip(point, self.directions(flat))]

    def bracket(self, x, y):
        """Bracket of the left-invariant fields with coordinates x and y."""
        xs, ys = self.directions(x), self.directions(y)
        return self.coords([a @ b - b @ a for a, b in zip(xs, ys)])

    def unit(self, j):
        return tuple(Fraction(1) if k == j else Fraction(0) for k in range(self.dim))


class PointedMap(object):
    """A rational map between product spaces, evaluated on lists of matrices."""

    def __init__(self, name, domain, codomain, func):
        self.name = name
        self.domain = domain
        self.codomain = codomain
        self.func = func

    def __call__(self, point):
        return list(self.func(list(point)))

    def differential(self, point, x):
        """Left-trivialized coordinates of the image of the tangent vector x at point."""
        if x and isinstance(x[0], Mat):
            x = self.domain.flatten(x)
        tag = next(_tags)
        out = self.func(self.domain.dual_point(list(point), x, tag))
        mats = []
        for q in out:
            value, deriv = value_part(q, tag), deriv_part(q, tag)
            mats.append(value.inverse() @ deriv)
        return self.codomain.coords(mats)

    def jacobian(self, point):
        cols = [self.differential(point, self.domain.unit(j)) for j in range(self.domain.dim)]
        if not cols:
            return Mat.zeros(self.codomain.dim, 0)
        return Mat.from_columns(cols, self.codomain.dim)

    def compose(self, inner):
        """self after inner."""
        if inner.codomain.factors != self.domain.factors:
            raise TangentError("cannot compose %s after %s" % (self.name, inner.name))
        return PointedMap("%s.%s" % (self.name, inner.name), inner.domain, self.codomain,
                          lambda p: self.func(list(inner.func(p))))

    def __repr__(self):
        return "PointedMap(%s: %s -> %s)" % (self.name, self.domain.name, self.codomain.name)


def identity_map(space):
    return PointedMap("id", space, space, lambda p: p)

def differential(f, p, x):
    return f.differential(p, x)


# Vector fields and forms
def directional(space, F, point, v):
    """Derivative of F along the left-trivialized direction v at point."""
    tag = next(_tags)
    return deriv_part(F(space.dual_point(list(point), v, tag)), tag)

def lie_bracket(space, X, Y, p):
    """[X, Y] at p for fields given as point -> coordinate tuples.

    In left-trivialized coordinates the bracket is
    [x(p), y(p)] + D_X y - D_Y x.
    """
    x, y = tuple(X(p)), tuple(Y(p))
    dxy = directional(space, Y, p, x)
    dyx = directional(space, X, p, y)
    br = space.bracket(x, y)
    return tuple(b + s - t for b, s, t in zip(br, dxy, dyx))

def interior(omega, x):
    """omega(x, .) as dual coordinates."""
    return omega.T.apply(x)

def d_one_form(space, alpha, p, x, y):
    """d alpha(x, y) with constant extensions of x and y."""
    x, y = tuple(x), tuple(y)
    return (directional(space, lambda q: dot(alpha(q), y), p, x)
            - directional(space, lambda q: dot(alpha(q), x), p, y)
            - dot(alpha(p), space.bracket(x, y)))

def d_two_form(space, omega, p, x, y, z):
    """d omega(x, y, z) for a family point -> matrix, with constant extensions."""
    x, y, z = tuple(x), tuple(y), tuple(z)

    def w(m, a, b):
        return dot(a, m.apply(b))

    def along(a, b, c):
        return directional(space, lambda q: w(omega(q), b, c), p, a)

    om = omega(p)
    br = space.bracket
    return (along(x, y, z) + along(y, z, x) + along(z, x, y)
            - w(om, br(x, y), z) - w(om, br(y, z), x) - w(om, br(z, x), y))

def lie_derivative_covector(space, X, beta, p):
    """L_X beta at p via Cartan's formula i_X d beta + d(beta(X))."""
    x = tuple(X(p))
    out = []
    for j in range(space.dim):
        e = space.unit(j)
        out.append(d_one_form(space, beta, p, x, e)
                   + directional(space, lambda q: dot(beta(q), X(q)), p, e))
    return tuple(out)

def interior_d(space, alpha, p, y):
    """i_Y d alpha at p, as dual coordinates."""
    y = tuple(y)
    return tuple(d_one_form(space, alpha, p, y, space.unit(j)) for j in range(space.dim))
