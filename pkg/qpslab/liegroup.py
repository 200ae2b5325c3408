# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

# You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an
# "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND,
# either express or implied.


# pylint: disable=too-many-arguments, too-many-locals, too-many-instance-attributes, line-too-long,
# pylint: disable=invalid-name, missing-docstring

"""Matrix groups SL_n and GL_n with their Borel data.

Tangent vectors are left-trivialized: the coordinate x at g stands for the
vector g.x. Covectors carry either a metric coordinate a (the covector
X -> (a, x)) or dual coordinates alpha_i = alpha(g.e_i) with respect to the
basis below; ``GroupContext.to_dual`` converts between them.

The basis of the Lie algebra is ordered u, t, lower-triangular, so the
Borel subalgebra b is always the leading ``dim_b`` coordinates.
"""

from fractions import Fraction
from itertools import permutations
import hashlib
import json

from .corelinalg import QpslabError, Mat, SplitMix64, kernel, solve, span


# Frozen sign and constant choices; reports carry a hash of this table
ETA_COEFFICIENT = Fraction(-1, 2)

CONVENTION_LEDGER = {
    "trivialization": "left: x at g is g.x",
    "generating_field": "d/dt exp(-t xi).m",
    "rho": "xi - Ad(g^-1) xi",
    "sigma": "(1/2)(xi + Ad(g^-1) xi), metric coordinate",
    "sigma_adjoint": "(1/2)(a + Ad(g) a)",
    "eta": "-1/2 (x, [y, z])",
    "dorfman": "([X,Y], L_X beta - i_Y d alpha + eta(X, Y, .))",
    "flat": "omega(X, .)",
    "double_form_at_identity": "(x2, y1) - (x1, y2)",
    "bivector_moment": "mu_* X_alpha = -sigma_adjoint^* rho_M^* alpha",
    "kappa": "elementary symmetric functions e_1..e_n (SL drops e_n)",
}

def ledger_hash():
    text = json.dumps(CONVENTION_LEDGER, sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()

# Deliberately wrong conventions, used as negative controls
CORRUPTIONS = ('sigma-half', 'sigma-sign', 'omega-sign', 'dorfman-eta')

GROUPS = {
    'sl2': ('SL', 2), 'sl3': ('SL', 3), 'sl4': ('SL', 4),
    'gl2': ('GL', 2), 'gl3': ('GL', 3), 'gl4': ('GL', 4),
}

HALF = Fraction(1, 2)


class GroupError(QpslabError):
    pass

class NotInGroup(GroupError):
    pass

class ContextMismatch(GroupError):
    pass


def _unit(n, i, j):
    return Mat([[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])


class GroupContext(object):
    """SL_n or GL_n together with the trace form c.tr(xy) and a fixed basis."""

    def __init__(self, family, n, form_scale=1, backend='exact', conventions=()):
        family = str(family).upper()
        if family not in ('SL', 'GL'):
            raise GroupError("unknown group family %r" % family)
        n = int(n)
        if n < 2:
            raise GroupError("matrix size must be at least 2, got %d" % n)
        form_scale = Fraction(form_scale)
        if form_scale <= 0:
            raise GroupError("form scale must be positive, got %s" % form_scale)
        conventions = frozenset(conventions)
        unknown = conventions.difference(CORRUPTIONS)
        if unknown:
            raise GroupError("unknown convention hook(s): %s" % ", ".join(sorted(unknown)))

        self.family = family
        self.n = n
        self.form_scale = form_scale
        self.backend = backend
        self.conventions = conventions

        self.pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        upper = [_unit(n, i, j) for i, j in self.pairs]
        lower = [_unit(n, j, i) for i, j in self.pairs]
        if family == 'GL':
            torus = [_unit(n, k, k) for k in range(n)]
        else:
            torus = [_unit(n, k, k) - _unit(n, k + 1, k + 1) for k in range(n - 1)]
        self.basis = upper + torus + lower

        self.dim_u = len(upper)
        self.rank = len(torus)
        self.dim_b = self.dim_u + self.rank
        self.dim = len(self.basis)
        self.u_idx = list(range(self.dim_u))
        self.t_idx = list(range(self.dim_u, self.dim_b))
        self.b_idx = list(range(self.dim_b))
        self.low_idx = list(range(self.dim_b, self.dim))

        self._gram = Mat([[self.inner(x, y) for y in self.basis] for x in self.basis])
        self._gram_inv = self._gram.inverse()

    @property
    def name(self):
        return "%s%d" % (self.family.lower(), self.n)

    @classmethod
    def from_name(cls, name, **kwargs):
        try:
            family, n = GROUPS[str(name).lower()]
        except KeyError:
            raise GroupError("unknown group %r (supported: %s)" % (name, ", ".join(sorted(GROUPS))))
        return cls(family, n, **kwargs)

    def with_conventions(self, conventions):
        return GroupContext(self.family, self.n, self.form_scale, self.backend, conventions)

    def __eq__(self, other):
        return isinstance(other, GroupContext) and (self.family, self.n, self.form_scale, self.conventions) == (other.family, other.n, other.form_scale, other.conventions)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.family, self.n, self.form_scale, self.conventions))

    def __repr__(self):
        return "GroupContext(%s, c=%s%s)" % (self.name, self.form_scale, ", " + ",".join(sorted(self.conventions)) if self.conventions else "")

    # Coordinates
    def coords(self, x):
        """Coordinates of an n x n matrix in the algebra basis.

        Works for any entry type closed under addition, so dual matrices
        give dual coordinates. The SL torus coordinates are partial sums of
        the diagonal.
        """
        d = x.data
        cs = [d[i][j] for i, j in self.pairs]
        if self.family == 'GL':
            cs.extend(d[k][k] for k in range(self.n))
        else:
            acc = 0
            for k in range(self.n - 1):
                acc = acc + d[k][k]
                cs.append(acc)
        cs.extend(d[j][i] for i, j in self.pairs)
        return tuple(cs)

    def element(self, coords):
        coords = tuple(coords)
        if len(coords) != self.dim:
            raise GroupError("expected %d coordinates, got %d" % (self.dim, len(coords)))
        n = self.n
        rows = [[Fraction(0)] * n for _ in range(n)]
        for k, (i, j) in enumerate(self.pairs):
            rows[i][j] = coords[k]
            rows[j][i] = coords[self.dim_b + k]
        tc = coords[self.dim_u:self.dim_b]
        if self.family == 'GL':
            for k in range(n):
                rows[k][k] = tc[k]
        else:
            prev = 0
            for k in range(n - 1):
                rows[k][k] = tc[k] - prev
                prev = tc[k]
            rows[n - 1][n - 1] = -prev
        return Mat(rows)

    def gram(self):
        return self._gram

    def gram_inverse(self):
        return self._gram_inv

    def inner(self, x, y):
        return self.form_scale * (x @ y).trace()

    def to_dual(self, coords):
        return self._gram.apply(coords)

    def from_dual(self, dual):
        return self._gram_inv.apply(dual)

    def Ad_matrix(self, g, ginv=None):
        """Matrix of Ad_g in the algebra basis; entries follow g's type."""
        ginv = g.inverse() if ginv is None else ginv
        cols = [self.coords(g @ e @ ginv) for e in self.basis]
        return Mat.from_columns(cols, self.dim, g.backend if g.backend == 'dual' else None)

    def ad_matrix(self, x):
        return Mat.from_columns([self.coords(x @ e - e @ x) for e in self.basis], self.dim)

    def sigma_combination(self, xi, conj):
        """The sigma-map combination of xi and its conjugate, honouring hooks."""
        if 'sigma-half' in self.conventions:
            return xi + conj
        if 'sigma-sign' in self.conventions:
            return (xi - conj).scale(HALF)
        return (xi + conj).scale(HALF)

    # Membership
    def check_group(self, m):
        if (m.rows, m.cols) != (self.n, self.n):
            raise NotInGroup("expected a %dx%d matrix, got %dx%d" % (self.n, self.n, m.rows, m.cols))
        d = m.det()
        if m.backend == 'float':
            bad = abs(d - 1) > 1e-8 if self.family == 'SL' else abs(d) == 0
        else:
            bad = d != 1 if self.family == 'SL' else d == 0
        if bad:
            raise NotInGroup("matrix with determinant %s is not in %s" % (d, self.name.upper()))

    def check_algebra(self, m):
        if (m.rows, m.cols) != (self.n, self.n):
            raise NotInGroup("expected a %dx%d matrix, got %dx%d" % (self.n, self.n, m.rows, m.cols))
        if self.family == 'SL' and m.backend == 'exact' and m.trace() != 0:
            raise NotInGroup("matrix with trace %s is not in %s" % (m.trace(), self.name))

    def identity(self):
        return Mat.identity(self.n, 'float' if self.backend == 'float' else 'exact')


class GroupElement(object):
    __slots__ = ('ctx', 'm')

    def __init__(self, ctx, m, check=True):
        if check:
            ctx.check_group(m)
        self.ctx = ctx
        self.m = m

    def inverse(self):
        return GroupElement(self.ctx, self.m.inverse(), check=False)

    def __mul__(self, other):
        _same_ctx(self, other)
        return GroupElement(self.ctx, self.m @ other.m, check=False)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.m == other.m

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def to_json(self):
        obj = self.m.to_json()
        obj["group"] = self.ctx.name
        return obj

    @classmethod
    def from_json(cls, obj, ctx=None):
        tag = obj.get("group")
        if ctx is None:
            if tag is None:
                raise GroupError("group element JSON carries no group tag")
            ctx = GroupContext.from_name(tag)
        elif tag is not None and tag != ctx.name:
            raise ContextMismatch("group tag %r does not match %s" % (tag, ctx.name))
        return cls(ctx, Mat.from_json(obj, 'float' if ctx.backend == 'float' else 'exact'))

    def __repr__(self):
        return "GroupElement(%s, %r)" % (self.ctx.name, self.m)


class AlgebraElement(object):
    __slots__ = ('ctx', 'm')

    def __init__(self, ctx, m, check=True):
        if check:
            ctx.check_algebra(m)
        self.ctx = ctx
        self.m = m

    @classmethod
    def from_coords(cls, ctx, coords):
        return cls(ctx, ctx.element(coords), check=False)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, Mat.zeros(ctx.n, ctx.n), check=False)

    def coords(self):
        return self.ctx.coords(self.m)

    def __add__(self, other):
        _same_ctx(self, other)
        return AlgebraElement(self.ctx, self.m + other.m, check=False)

    def __sub__(self, other):
        _same_ctx(self, other)
        return AlgebraElement(self.ctx, self.m - other.m, check=False)

    def __neg__(self):
        return AlgebraElement(self.ctx, -self.m, check=False)

    def scale(self, s):
        return AlgebraElement(self.ctx, self.m.scale(s), check=False)

    def inner(self, other):
        _same_ctx(self, other)
        return self.ctx.inner(self.m, other.m)

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.m == other.m

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        return "AlgebraElement(%s, %r)" % (self.ctx.name, self.m)


class TangentVec(object):
    """The tangent vector base.coord at base."""
    __slots__ = ('base', 'coord')

    def __init__(self, base, coord):
        _same_ctx(base, coord)
        self.base = base
        self.coord = coord

    def coords(self):
        return self.coord.coords()


class Covector(object):
    """The covector X -> (coord, theta(X)) at base."""
    __slots__ = ('base', 'coord')

    def __init__(self, base, coord):
        _same_ctx(base, coord)
        self.base = base
        self.coord = coord

    def dual(self):
        return self.base.ctx.to_dual(self.coord.coords())

    def __call__(self, v):
        return self.coord.inner(v.coord)


def _same_ctx(a, b):
    ca = a.ctx if hasattr(a, 'ctx') else a.base.ctx
    cb = b.ctx if hasattr(b, 'ctx') else b.base.ctx
    if ca.family != cb.family or ca.n != cb.n:
        raise ContextMismatch("%s vs %s" % (ca.name, cb.name))


# Algebra and group operations
def ad(x, y):
    _same_ctx(x, y)
    return AlgebraElement(x.ctx, x.m @ y.m - y.m @ x.m, check=False)

def Ad(g, x):
    _same_ctx(g, x)
    return AlgebraElement(x.ctx, g.m @ x.m @ g.m.inverse(), check=False)

def sigma(g, xi):
    conj = Ad(g.inverse(), xi)
    return Covector(g, AlgebraElement(g.ctx, g.ctx.sigma_combination(xi.m, conj.m), check=False))

def sigma_adjoint(alpha):
    g = alpha.base
    a = alpha.coord
    return AlgebraElement(g.ctx, g.ctx.sigma_combination(a.m, Ad(g, a).m), check=False)

def conj_field(g, xi):
    return TangentVec(g, xi - Ad(g.inverse(), xi))

def rho_adjoint(v):
    """zeta with (zeta, xi) = (v, conj_field(g, xi)) for all xi, solved in the basis."""
    g = v.base
    ctx = g.ctx
    vc = v.coord
    rhs = [vc.inner(conj_field(g, AlgebraElement(ctx, e, check=False)).coord) for e in ctx.basis]
    return AlgebraElement.from_coords(ctx, solve(ctx.gram(), rhs))

def borel_decompose(b):
    ctx = b.ctx
    m = b.m
    n = ctx.n
    if any(m[i, j] != 0 for i in range(n) for j in range(i)):
        raise NotInGroup("element is not upper triangular")
    t = Mat.diag([m[k, k] for k in range(n)], m.backend)
    u = t.inverse() @ m
    return GroupElement(ctx, t, check=False), GroupElement(ctx, u, check=False)

def chevalley(g):
    """Elementary symmetric functions of the eigenvalues (e_1 = trace, ...).

    Computed by Faddeev-LeVerrier. For SL_n the last one is the determinant
    and is dropped.
    """
    a = g.m if isinstance(g, GroupElement) else g
    n = a.rows
    one = Mat.identity(n, a.backend)
    m = one
    c = -a.trace()
    values = [-c]
    for k in range(2, n + 1):
        m = a @ m + one.scale(c)
        c = -(a @ m).trace() / (Fraction(k) if a.backend == 'exact' else k)
        values.append(c if k % 2 == 0 else -c)
    ctx = getattr(g, 'ctx', None)
    if ctx is not None and ctx.family == 'SL':
        values = values[:-1]
    return tuple(values)


# Sampling
KINDS = ('G', 'B', 'T', 'U', 'regular-semisimple-T', 'singular-T')

def _torus_entries(ctx, rng, height):
    entries = [rng.rational(height, nonzero=True) for _ in range(ctx.n if ctx.family == 'GL' else ctx.n - 1)]
    if ctx.family == 'SL':
        prod = Fraction(1)
        for x in entries:
            prod *= x
        entries.append(1 / prod)
    return entries

def _unipotent(ctx, rng, height, lower=False):
    n = ctx.n
    rows = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for i, j in ctx.pairs:
        if lower:
            rows[j][i] = rng.rational(height)
        else:
            rows[i][j] = rng.rational(height)
    return Mat(rows)

def random_point(ctx, kind, seed, height=10):
    """Exact rational element of the requested subgroup.

    ``seed`` is an integer or an existing SplitMix64 stream.
    """
    rng = seed if isinstance(seed, SplitMix64) else SplitMix64(seed)
    if kind == 'U':
        m = _unipotent(ctx, rng, height)
    elif kind == 'T':
        m = Mat.diag(_torus_entries(ctx, rng, height))
    elif kind == 'regular-semisimple-T':
        while True:
            entries = _torus_entries(ctx, rng, height)
            if len(set(entries)) == len(entries):
                break
        m = Mat.diag(entries)
    elif kind == 'singular-T':
        # a repeated eigenvalue; in SL_2 only the central elements qualify
        lam = rng.rational(height, nonzero=True)
        if ctx.family == 'SL' and ctx.n == 2:
            entries = [Fraction(1), Fraction(1)] if lam > 0 else [Fraction(-1), Fraction(-1)]
        else:
            entries = [lam, lam] + [rng.rational(height, nonzero=True) for _ in range(ctx.n - 2)]
            if ctx.family == 'SL':
                prod = Fraction(1)
                for x in entries[:-1]:
                    prod *= x
                entries[-1] = 1 / prod
        m = Mat.diag(entries)
    elif kind == 'B':
        m = Mat.diag(_torus_entries(ctx, rng, height)) @ _unipotent(ctx, rng, height)
    elif kind == 'G':
        m = _unipotent(ctx, rng, height, lower=True) @ Mat.diag(_torus_entries(ctx, rng, height)) @ _unipotent(ctx, rng, height)
    else:
        raise GroupError("unknown sample kind %r (supported: %s)" % (kind, ", ".join(KINDS)))
    return GroupElement(ctx, m, check=False)

def random_algebra(ctx, seed, indices=None, height=10):
    rng = seed if isinstance(seed, SplitMix64) else SplitMix64(seed)
    indices = range(ctx.dim) if indices is None else set(indices)
    return AlgebraElement.from_coords(ctx, [rng.rational(height) if k in indices else Fraction(0) for k in range(ctx.dim)])


class BorelContext(object):
    """Upper-triangular Borel B = TU of a group context."""

    def __init__(self, ctx):
        self.ctx = ctx

    def _coordinate_subspace(self, idx):
        d = self.ctx.dim
        return span([[1 if k == i else 0 for k in range(d)] for i in idx], d)

    def b(self):
        return self._coordinate_subspace(self.ctx.b_idx)

    def t(self):
        return self._coordinate_subspace(self.ctx.t_idx)

    def u(self):
        return self._coordinate_subspace(self.ctx.u_idx)

    def contains(self, g):
        m = g.m if isinstance(g, GroupElement) else g
        n = self.ctx.n
        if m.backend == 'float':
            return all(abs(m[i, j]) <= 1e-8 for i in range(n) for j in range(i))
        return all(m[i, j] == 0 for i in range(n) for j in range(i))

    def in_torus(self, g):
        m = g.m if isinstance(g, GroupElement) else g
        n = self.ctx.n
        return all(m[i, j] == 0 for i in range(n) for j in range(n) if i != j)

    def in_unipotent(self, g):
        m = g.m if isinstance(g, GroupElement) else g
        return self.contains(m) and all(m[k, k] == 1 for k in range(self.ctx.n))

    def decompose(self, b):
        return borel_decompose(b)


class LieContext(object):
    """Cartan 3-form and its trivector on the algebra of a group context."""

    def __init__(self, ctx):
        self.ctx = ctx

    def eta_matrices(self, x, y, z):
        return ETA_COEFFICIENT * self.ctx.inner(x, y @ z - z @ y)

    def eta_coords(self, x, y, z):
        el = self.ctx.element
        return self.eta_matrices(el(x), el(y), el(z))

    def chi(self, alpha, beta, gamma):
        """Trivector on dual coordinates, identified with eta through the metric."""
        fd = self.ctx.from_dual
        return self.eta_coords(fd(alpha), fd(beta), fd(gamma))


class WeylGroup(object):
    """Permutation matrices, sign-corrected into SL_n where needed."""

    def __init__(self, ctx):
        self.ctx = ctx
        self.elements = list(permutations(range(ctx.n)))

    @property
    def order(self):
        return len(self.elements)

    def representative(self, perm):
        n = self.ctx.n
        rows = [[0] * n for _ in range(n)]
        for j, i in enumerate(perm):
            rows[i][j] = 1
        m = Mat(rows)
        if self.ctx.family == 'SL' and m.det() != 1:
            m = Mat([[-x if j == 0 else x for j, x in enumerate(row)] for row in m.data])
        return GroupElement(self.ctx, m)

    @staticmethod
    def compose(p, q):
        return tuple(p[q[j]] for j in range(len(q)))

    def closure_holds(self):
        """Products of representatives agree with the composed representative modulo T."""
        borel = BorelContext(self.ctx)
        for p in self.elements:
            for q in self.elements:
                r = self.compose(p, q)
                h = self.representative(p) * self.representative(q) * self.representative(r).inverse()
                if not borel.in_torus(h):
                    return False
        return True

    def act_on_torus(self, perm, t):
        w = self.representative(perm)
        return w * t * w.inverse()


def conjugacy_tangent_dim(g):
    """dim G minus the dimension of the centralizer (kernel of Ad_g - id)."""
    ctx = g.ctx
    a = ctx.Ad_matrix(g.m) - Mat.identity(ctx.dim)
    return ctx.dim - kernel(a).dim
