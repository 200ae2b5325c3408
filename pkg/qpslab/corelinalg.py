# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

# You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an
# "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND,
# either express or implied.


# pylint: disable=too-many-arguments, too-many-locals, too-many-branches, line-too-long,
# pylint: disable=invalid-name, missing-docstring, too-many-return-statements

"""Scalar backends and subspace linear algebra.

Two scalar backends are supported. The ``exact`` backend stores rationals
as :class:`fractions.Fraction` and complex rationals as
:class:`GaussianRational`; every rank, kernel and equality decision made on
it is error-free. The ``float`` backend stores complex doubles and routes
rank and null-space questions through :mod:`numpy` with a relative
tolerance. A third tag, ``dual``, marks matrices whose entries carry a
first-order infinitesimal part (see :mod:`qpslab.diffcalc`); they support
the ring operations and inversion only.
"""

from fractions import Fraction
from functools import reduce
from math import gcd
import numpy as np


# Relative cutoff for float rank decisions and float comparisons
tolerance = 1e-9

BACKENDS = ('exact', 'float')


def set_tolerance(tol):
    global tolerance
    tol = float(tol)
    if not tol > 0:
        raise LinalgError("tolerance must be positive, got %r" % tol)
    tolerance = tol


# Errors
class QpslabError(Exception):
    pass

class LinalgError(QpslabError):
    pass

class DimensionMismatch(LinalgError):
    pass

class DegeneratePairing(LinalgError):
    pass

class SingularMatrix(LinalgError):
    pass

class BackendMismatch(LinalgError):
    pass


# Exact complex scalars
class GaussianRational(object):
    """Complex number with rational real and imaginary parts.

    Arithmetic results with a vanishing imaginary part collapse to a plain
    Fraction, so purely real computations never pay for the complex path.
    """
    __slots__ = ('re', 'im')

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def make(re, im):
        if im == 0:
            return Fraction(re)
        return GaussianRational(re, im)

    @staticmethod
    def _parts(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def conjugate(self):
        return GaussianRational.make(self.re, -self.im)

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(self.re * p[0] - self.im * p[1], self.re * p[1] + self.im * p[0])

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        norm = p[0] * p[0] + p[1] * p[1]
        if norm == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational.make((self.re * p[0] + self.im * p[1]) / norm, (self.im * p[0] - self.re * p[1]) / norm)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(*p) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return "GaussianRational(%s, %s)" % (self.re, self.im)

    def __str__(self):
        return "%s%+si" % (self.re, self.im) if self.re else "%si" % self.im


# Scalar conversion
def exact(x):
    """Convert a number, fraction string or [re, im] pair to an exact scalar."""
    if isinstance(x, (Fraction, GaussianRational)):
        return x
    if isinstance(x, bool):
        raise LinalgError("not a scalar: %r" % x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, complex):
        return GaussianRational.make(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return GaussianRational.make(exact(x[0]), exact(x[1]))
    raise LinalgError("not a scalar: %r" % (x,))

def to_complex(x):
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        return complex(float(Fraction(x)))
    return complex(x)

def scalar_json(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float):
        return [x, 0.0]
    if isinstance(x, GaussianRational):
        return [str(x.re), str(x.im)]
    return [str(Fraction(x)), "0"]

def _nonzero(x):
    # dual entries are invertible exactly when their innermost value is
    while hasattr(x, 'deriv'):
        x = x.value
    return x != 0

def _detect_backend(data):
    backend = 'exact'
    for row in data:
        for x in row:
            if hasattr(x, 'deriv'):
                return 'dual'
            if isinstance(x, (float, complex)):
                backend = 'float'
    return backend


class Mat(object):
    """Dense rows x cols matrix over one scalar backend, immutable."""
    __slots__ = ('rows', 'cols', 'data', 'backend')

    def __init__(self, data, rows=None, cols=None, backend=None):
        data = [list(row) for row in data]
        rows = len(data) if rows is None else rows
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(row) != cols for row in data):
            raise DimensionMismatch("entry count does not match %dx%d" % (rows, cols))
        backend = backend or _detect_backend(data)
        if backend == 'exact':
            data = [[exact(x) for x in row] for row in data]
        elif backend == 'float':
            data = [[to_complex(x) for x in row] for row in data]
        elif backend != 'dual':
            raise BackendMismatch("unknown backend %r" % backend)
        self.rows = rows
        self.cols = cols
        self.data = tuple(tuple(row) for row in data)
        self.backend = backend

    @classmethod
    def _raw(cls, data, rows, cols, backend):
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m.data = data
        m.backend = backend
        return m

    # Constructors
    @classmethod
    def zeros(cls, rows, cols, backend='exact'):
        z = 0j if backend == 'float' else Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), rows, cols, backend)

    @classmethod
    def identity(cls, n, backend='exact'):
        one, z = (1 + 0j, 0j) if backend == 'float' else (Fraction(1), Fraction(0))
        return cls._raw(tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), n, n, backend)

    @classmethod
    def diag(cls, entries, backend=None):
        entries = list(entries)
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n, backend)

    @classmethod
    def from_columns(cls, vectors, rows, backend=None):
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != rows:
                raise DimensionMismatch("column of length %d in a %d-row matrix" % (len(v), rows))
        return cls([[v[i] for v in vectors] for i in range(rows)], rows, len(vectors), backend)

    @classmethod
    def from_json(cls, obj, backend='exact'):
        try:
            rows, cols, entries = int(obj['rows']), int(obj['cols']), list(obj['entries'])
        except (KeyError, TypeError, ValueError):
            raise LinalgError("malformed matrix JSON: expected rows, cols and entries")
        if len(entries) != rows * cols:
            raise DimensionMismatch("matrix JSON has %d entries, expected %d" % (len(entries), rows * cols))
        conv = to_complex if backend == 'float' else exact
        data = [[conv(entries[i * cols + j]) for j in range(cols)] for i in range(rows)]
        return cls(data, rows, cols, backend)

    # Access
    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(row[j] for row in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, row_idx, col_idx):
        row_idx, col_idx = list(row_idx), list(col_idx)
        return Mat._raw(tuple(tuple(self.data[i][j] for j in col_idx) for i in row_idx), len(row_idx), len(col_idx), self.backend)

    def map(self, fn, backend=None):
        return Mat([[fn(x) for x in row] for row in self.data], self.rows, self.cols, backend)

    @property
    def T(self):
        return Mat._raw(tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)), self.cols, self.rows, self.backend)

    def to_numpy(self):
        if self.backend == 'dual':
            raise BackendMismatch("dual matrices have no numpy form")
        return np.array([[complex(x) for x in row] for row in self.data], dtype=complex).reshape(self.rows, self.cols)

    def to_float(self):
        if self.backend == 'float':
            return self
        return Mat._raw(tuple(tuple(complex(x) for x in row) for row in self.data), self.rows, self.cols, 'float')

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [scalar_json(x) for row in self.data for x in row],
        }

    # Arithmetic
    def _combine_backend(self, other):
        if 'dual' in (self.backend, other.backend):
            return 'dual'
        if 'float' in (self.backend, other.backend):
            return 'float'
        return 'exact'

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("%dx%d vs %dx%d" % (self.rows, self.cols, other.rows, other.cols))

    def __add__(self, other):
        self._same_shape(other)
        backend = self._combine_backend(other)
        a, b = (self.to_float(), other.to_float()) if backend == 'float' else (self, other)
        return Mat._raw(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a.data, b.data)), self.rows, self.cols, backend)

    def __sub__(self, other):
        self._same_shape(other)
        backend = self._combine_backend(other)
        a, b = (self.to_float(), other.to_float()) if backend == 'float' else (self, other)
        return Mat._raw(tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a.data, b.data)), self.rows, self.cols, backend)

    def __neg__(self):
        return Mat._raw(tuple(tuple(-x for x in row) for row in self.data), self.rows, self.cols, self.backend)

    def scale(self, s):
        if self.backend == 'exact' and isinstance(s, int):
            s = Fraction(s)
        backend = self.backend
        if hasattr(s, 'deriv'):
            backend = 'dual'
        elif isinstance(s, (float, complex)) and backend == 'exact':
            return self.to_float().scale(s)
        return Mat._raw(tuple(tuple(s * x for x in row) for row in self.data), self.rows, self.cols, backend)

    def __mul__(self, s):
        if isinstance(s, Mat):
            return self @ s
        return self.scale(s)

    def __rmul__(self, s):
        return self.scale(s)

    def __matmul__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch("cannot multiply %dx%d by %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        backend = self._combine_backend(other)
        if backend == 'float':
            prod = self.to_numpy() @ other.to_numpy()
            return Mat._raw(tuple(tuple(complex(x) for x in row) for row in prod), self.rows, other.cols, 'float')
        zero = Fraction(0)
        cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        data = tuple(
            tuple(sum((a * b for a, b in zip(row, col)), zero) for col in cols)
            for row in self.data)
        return Mat._raw(data, self.rows, other.cols, backend)

    def apply(self, vec):
        vec = tuple(vec)
        if len(vec) != self.cols:
            raise DimensionMismatch("vector of length %d for a %dx%d matrix" % (len(vec), self.rows, self.cols))
        zero = 0j if self.backend == 'float' else Fraction(0)
        return tuple(sum((a * b for a, b in zip(row, vec)), zero) for row in self.data)

    def trace(self):
        if self.rows != self.cols:
            raise DimensionMismatch("trace of a non-square matrix")
        zero = 0j if self.backend == 'float' else Fraction(0)
        return sum((self.data[i][i] for i in range(self.rows)), zero)

    def det(self):
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        if self.backend == 'float':
            return complex(np.linalg.det(self.to_numpy())) if self.rows else 1 + 0j
        if self.backend == 'dual':
            raise BackendMismatch("determinant of a dual matrix is not supported")
        m = [list(row) for row in self.data]
        n = self.rows
        d = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = -d
            p = m[c][c]
            d = d * p
            for i in range(c + 1, n):
                f = m[i][c] / p
                if f != 0:
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return d

    def inverse(self):
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        if self.backend == 'float':
            a = self.to_numpy()
            s = np.linalg.svd(a, compute_uv=False) if n else np.zeros(0)
            if n and (s[-1] <= tolerance * s[0]):
                raise SingularMatrix("matrix is numerically singular")
            inv = np.linalg.inv(a)
            return Mat._raw(tuple(tuple(complex(x) for x in row) for row in inv), n, n, 'float')
        one, zero = Fraction(1), Fraction(0)
        m = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(self.data)]
        for c in range(n):
            piv = next((i for i in range(c, n) if _nonzero(m[i][c])), None)
            if piv is None:
                raise SingularMatrix("matrix is singular")
            m[c], m[piv] = m[piv], m[c]
            p = m[c][c]
            m[c] = [x / p for x in m[c]]
            for i in range(n):
                if i != c:
                    f = m[i][c]
                    if f != 0:
                        m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return Mat._raw(tuple(tuple(row[n:]) for row in m), n, n, self.backend)

    # Predicates
    def norm_max(self):
        return max((abs(complex(x)) for row in self.data for x in row), default=0.0)

    def is_zero(self, scale=None):
        """Exact test, or for floats |entry| <= tolerance * max(1, scale)."""
        if self.backend == 'float':
            bound = tolerance * max(1.0, self.norm_max() if scale is None else scale)
            return all(abs(x) <= bound for row in self.data for x in row)
        return all(x == 0 for row in self.data for x in row)

    def is_skew(self):
        return self.rows == self.cols and (self + self.T).is_zero(self.norm_max() if self.backend == 'float' else None)

    def __eq__(self, other):
        if not isinstance(other, Mat) or (self.rows, self.cols) != (other.rows, other.cols):
            return False
        if 'float' in (self.backend, other.backend):
            a, b = self.to_numpy(), other.to_numpy()
            scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
            return bool(np.all(np.abs(a - b) <= tolerance * scale))
        return self.data == other.data

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        return "Mat(%dx%d, %s, %s)" % (self.rows, self.cols, self.backend, [[str(x) for x in row] for row in self.data])


def hstack(*mats):
    mats = [m for m in mats]
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise DimensionMismatch("hstack of matrices with different row counts")
    backend = _stack_backend(mats)
    mats = [m.to_float() for m in mats] if backend == 'float' else mats
    data = tuple(tuple(x for m in mats for x in m.data[i]) for i in range(rows))
    return Mat._raw(data, rows, sum(m.cols for m in mats), backend)

def vstack(*mats):
    mats = [m for m in mats]
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise DimensionMismatch("vstack of matrices with different column counts")
    backend = _stack_backend(mats)
    mats = [m.to_float() for m in mats] if backend == 'float' else mats
    data = tuple(row for m in mats for row in m.data)
    return Mat._raw(data, len(data), cols, backend)

def _stack_backend(mats):
    backends = set(m.backend for m in mats)
    if 'dual' in backends:
        return 'dual'
    return 'float' if 'float' in backends else 'exact'

def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


# Elimination
def _integer_rows(m):
    rows = []
    for row in m.data:
        den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in row), 1)
        rows.append([int(x * den) for x in row])
    return rows

def _bareiss_rank(rows):
    # fraction-free elimination, every intermediate entry is a minor of the input
    m = [r[:] for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    rank, prev = 0, 1
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        p = prow[c]
        for i in range(rank + 1, nr):
            mi = m[i]
            f = mi[c]
            for j in range(c + 1, nc):
                mi[j] = (p * mi[j] - f * prow[j]) // prev
            mi[c] = 0
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank

def rref(m):
    """Reduced row echelon form over the exact backend.

    Returns the nonzero reduced rows and their pivot columns.
    """
    if m.backend != 'exact':
        raise BackendMismatch("rref needs the exact backend, got %s" % m.backend)
    rows = [list(r) for r in m.data]
    pivots = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [x / p for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots

def _float_svd(m):
    a = m.to_numpy()
    if a.size == 0:
        return a, np.zeros(0), np.zeros((m.cols, m.cols), dtype=complex)
    u, s, vh = np.linalg.svd(a)
    return u, s, vh

def _float_rank(s):
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tolerance * s[0]))

def rank(m):
    if m.backend == 'float':
        return _float_rank(_float_svd(m)[1])
    if m.backend != 'exact':
        raise BackendMismatch("rank of a %s matrix" % m.backend)
    if m.rows == 0 or m.cols == 0:
        return 0
    if all(isinstance(x, Fraction) for row in m.data for x in row):
        rows = _integer_rows(m)
        return _bareiss_rank(rows if m.rows <= m.cols else [list(c) for c in zip(*rows)])
    return len(rref(m)[1])

def kernel(m):
    """Null space of m as a Subspace of its column space dimension."""
    if m.backend == 'float':
        _, s, vh = _float_svd(m)
        r = _float_rank(s)
        null = np.conj(vh[r:]).T
        return Subspace(m.cols, Mat._raw(tuple(tuple(complex(x) for x in row) for row in null), m.cols, m.cols - r, 'float'))
    rows, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    vectors = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for k, p in enumerate(pivots):
            v[p] = -rows[k][f]
        vectors.append(v)
    return Subspace(m.cols, Mat.from_columns(vectors, m.cols, 'exact') if vectors else Mat.zeros(m.cols, 0))

def solve(m, rhs):
    """One solution x of m x = rhs; raises SingularMatrix when inconsistent."""
    rhs = tuple(rhs)
    if len(rhs) != m.rows:
        raise DimensionMismatch("right-hand side of length %d for %d equations" % (len(rhs), m.rows))
    if m.backend == 'float' or any(isinstance(x, complex) for x in rhs):
        a = m.to_numpy()
        b = np.array([complex(x) for x in rhs], dtype=complex)
        x = np.linalg.lstsq(a, b, rcond=None)[0] if a.size else np.zeros(m.cols, dtype=complex)
        if np.linalg.norm(a @ x - b) > tolerance * max(1.0, float(np.linalg.norm(b))):
            raise SingularMatrix("linear system has no solution")
        return tuple(complex(v) for v in x)
    aug = hstack(m, Mat.from_columns([rhs], m.rows, 'exact'))
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        raise SingularMatrix("linear system has no solution")
    x = [Fraction(0)] * m.cols
    for k, p in enumerate(pivots):
        x[p] = rows[k][m.cols]
    return tuple(x)


class Subspace(object):
    """A linear subspace of an ambient coordinate space, kept as a column basis."""
    __slots__ = ('ambient_dim', 'basis')

    def __init__(self, ambient_dim, basis=None):
        if basis is None:
            basis = Mat.zeros(ambient_dim, 0)
        if basis.rows != ambient_dim:
            raise DimensionMismatch("basis rows %d vs ambient dimension %d" % (basis.rows, ambient_dim))
        self.ambient_dim = ambient_dim
        self.basis = basis

    @property
    def dim(self):
        return self.basis.cols

    @property
    def backend(self):
        return self.basis.backend

    def vectors(self):
        return self.basis.columns()

    def contains(self, v):
        v = tuple(v)
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector of length %d in a %d-dimensional space" % (len(v), self.ambient_dim))
        return rank(hstack(self.basis, Mat.from_columns([v], self.ambient_dim, None if self.backend == 'exact' else self.backend))) == self.dim

    def contains_subspace(self, other):
        self._check(other)
        if other.dim == 0:
            return True
        return rank(hstack(self.basis, other.basis)) == self.dim

    def same_as(self, other):
        self._check(other)
        return self.dim == other.dim and self.contains_subspace(other)

    def sum(self, other):
        self._check(other)
        return span(self.vectors() + other.vectors(), self.ambient_dim, self._joint_backend(other))

    def _joint_backend(self, other):
        return 'float' if 'float' in (self.backend, other.backend) else 'exact'

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces of %d- and %d-dimensional spaces" % (self.ambient_dim, other.ambient_dim))

    def to_json(self):
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}

    def __repr__(self):
        return "Subspace(dim=%d in %d)" % (self.dim, self.ambient_dim)


def span(vectors, ambient_dim, backend='exact'):
    """Subspace spanned by a list of vectors; redundant vectors are dropped."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return Subspace(ambient_dim, Mat.zeros(ambient_dim, 0, backend))
    m = Mat.from_columns(vectors, ambient_dim, backend)
    if m.backend == 'float':
        u, s, _ = _float_svd(m)
        r = _float_rank(s)
        return Subspace(ambient_dim, Mat._raw(tuple(tuple(complex(x) for x in row[:r]) for row in u), ambient_dim, r, 'float'))
    rows, _ = rref(m.T)
    if not rows:
        return Subspace(ambient_dim, Mat.zeros(ambient_dim, 0))
    return Subspace(ambient_dim, Mat.from_columns(rows, ambient_dim, 'exact'))

def intersect(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("intersection of subspaces of %d- and %d-dimensional spaces" % (a.ambient_dim, b.ambient_dim))
    backend = a._joint_backend(b)
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.ambient_dim, Mat.zeros(a.ambient_dim, 0, backend))
    A, B = (a.basis.to_float(), b.basis.to_float()) if backend == 'float' else (a.basis, b.basis)
    k = kernel(hstack(A, -B))
    coeffs = k.basis.submatrix(range(a.dim), range(k.dim))
    return Subspace(a.ambient_dim, A @ coeffs)

def annihilator(s, pairing):
    """{v : pairing(v, w) = 0 for every w in s}."""
    n = s.ambient_dim
    if (pairing.rows, pairing.cols) != (n, n):
        raise DimensionMismatch("pairing matrix must be %dx%d" % (n, n))
    if rank(pairing) != n:
        raise DegeneratePairing("pairing matrix has rank %d < %d" % (rank(pairing), n))
    if s.dim == 0:
        return Subspace(n, Mat.identity(n, 'float' if 'float' in (s.backend, pairing.backend) else 'exact'))
    return kernel(s.basis.T @ pairing.T)


# Seeded scalar stream
class SplitMix64(object):
    """The splitmix64 generator: portable 64-bit stream from a single seed."""
    MASK = (1 << 64) - 1

    def __init__(self, seed):
        self.state = int(seed) & self.MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def randint(self, lo, hi):
        return lo + self.next() % (hi - lo + 1)

    def rational(self, height=10, nonzero=False):
        while True:
            x = Fraction(self.randint(-height, height), self.randint(1, height))
            if x != 0 or not nonzero:
                return x

    def fork(self):
        return SplitMix64(self.next())
