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
# pylint: disable=invalid-name, missing-docstring, broad-except

"""Seeded verification campaigns.

A campaign draws one 64-bit seed per sample from a splitmix64 stream seeded
with the configured seed, builds the sample point from that seed alone and
runs one suite on it. Points are independent, so they may be checked in
worker processes; records are always reported in point order.
"""

import concurrent.futures
import datetime
import math
from fractions import Fraction
from functools import partial

from . import corelinalg
from .corelinalg import QpslabError, BACKENDS, Mat, SplitMix64, annihilator, intersect, kernel, rank, span
from .dirac import (cartan_dirac, dorfman_closure_defect, graph_two_form, is_lagrangian,
                    pairing, TwoFormFiber)
from .liegroup import (CORRUPTIONS, GROUPS, GroupContext, GroupElement, BorelContext, LieContext,
                       WeylGroup, chevalley, conjugacy_tangent_dim, ledger_hash, random_algebra,
                       random_point)
from . import gspringer
from .gspringer import DoublePoint, GSPoint

SCHEMA = "qpslab/1"
MAX_SEED = (1 << 64) - 1

# Group elements per double point for the invariance axiom
INVARIANCE_SAMPLES = 10


class UsageError(QpslabError):
    pass

class ConfigError(QpslabError):
    pass


# Suite registry
SUITES = {}

def suite(name, point, float_ok=False):
    """Register a per-point check function under a suite name."""
    def wrapper(func):
        SUITES[name] = (point, func, float_ok)
        return func
    return wrapper


class CampaignConfig(object):
    def __init__(self, suite_name, group='sl2', backend='exact', samples=10, seed=42, tol=1e-9,
                 report=None, jobs=1, form_scale=1, corrupt=()):
        self.suite = suite_name
        self.group = group
        self.backend = backend
        self.samples = samples
        self.seed = seed
        self.tol = tol
        self.report = report
        self.jobs = jobs
        self.form_scale = form_scale
        self.corrupt = tuple(sorted(set(corrupt or ())))

    def validate(self):
        if self.suite not in SUITES:
            raise UsageError("unknown suite \"%s\" (supported: %s)" % (self.suite, ", ".join(sorted(SUITES))))
        if self.group not in GROUPS:
            raise ConfigError("unknown group \"%s\" (supported: %s)" % (self.group, ", ".join(sorted(GROUPS))))
        if self.backend not in BACKENDS:
            raise ConfigError("unknown backend \"%s\" (supported: %s)" % (self.backend, ", ".join(BACKENDS)))
        if self.backend == 'float' and not SUITES[self.suite][2]:
            raise UsageError("suite \"%s\" runs on the exact backend only" % self.suite)
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ConfigError("samples must be a positive integer, got %r" % (self.samples,))
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MAX_SEED:
            raise ConfigError("seed must be an integer in [0, 2^64), got %r" % (self.seed,))
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigError("jobs must be a positive integer, got %r" % (self.jobs,))
        if not self.tol > 0:
            raise ConfigError("tolerance must be positive, got %r" % (self.tol,))
        unknown = set(self.corrupt).difference(CORRUPTIONS)
        if unknown:
            raise UsageError("unknown corruption hook(s): %s" % ", ".join(sorted(unknown)))
        try:
            scale = Fraction(self.form_scale)
        except (TypeError, ValueError):
            raise ConfigError("form scale must be a rational number, got %r" % (self.form_scale,))
        if scale <= 0:
            raise ConfigError("form scale must be positive, got %s" % scale)
        return self

    def context(self):
        return GroupContext.from_name(self.group, form_scale=self.form_scale, backend=self.backend, conventions=self.corrupt)

    def echo(self):
        out = {
            "suite": self.suite,
            "group": self.group,
            "backend": self.backend,
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol,
            "jobs": self.jobs,
            "form_scale": str(Fraction(self.form_scale)),
        }
        if self.corrupt:
            out["corrupt"] = list(self.corrupt)
        return out


# Seeds and points
def point_seeds(seed, samples):
    rng = SplitMix64(seed)
    return [rng.next() for _ in range(samples)]

def _torus_for(ctx, index, rng):
    # points 0 and 1 sit over the identity and over a non-regular torus element
    if index == 0:
        return ctx.identity()
    if index == 1:
        return random_point(ctx, 'singular-T', rng).m
    return random_point(ctx, 'T', rng).m

def make_point(ctx, kind, index, rng):
    if kind == 'G':
        return random_point(ctx, 'G', rng)
    if kind == 'B':
        return random_point(ctx, 'B', rng)
    if kind == 'double':
        return DoublePoint(random_point(ctx, 'G', rng), random_point(ctx, 'G', rng))
    if kind in ('GxB', 'gs'):
        t = _torus_for(ctx, index, rng)
        u = random_point(ctx, 'U', rng).m
        return GSPoint(random_point(ctx, 'G', rng), GroupElement(ctx, t @ u, check=False))
    if kind == 'steinberg':
        point = (random_point(ctx, 'regular-semisimple-T', rng), random_point(ctx, 'G', rng, height=3), random_point(ctx, 'U', rng))
        if ctx.backend == 'float':
            return tuple(GroupElement(ctx, g.m.to_float(), check=False) for g in point)
        return point
    if kind == 'linalg':
        return None
    raise UsageError("unknown point kind \"%s\"" % kind)

def point_json(point):
    if point is None:
        return None
    if isinstance(point, tuple):
        return [p.to_json() for p in point]
    return point.to_json()


def run_point(suite_name, group, backend, form_scale, corrupt, tol, task):
    """Records for one sample; runs in a worker process when jobs > 1."""
    index, seed = task
    corelinalg.set_tolerance(tol)
    ctx = GroupContext.from_name(group, form_scale=form_scale, backend=backend, conventions=corrupt)
    kind, func, _ = SUITES[suite_name]
    rng = SplitMix64(seed)
    point = make_point(ctx, kind, index, rng)
    try:
        rows = func(ctx, point, rng)
    except QpslabError as e:
        rows = [("error", False, {"error": "%s: %s" % (type(e).__name__, e)})]
    return [record(suite_name, index, point, row) for row in rows]

def record(suite_name, index, point, row):
    check_id, passed, witness = row
    out = {
        "check_id": "%s/%s" % (suite_name, check_id),
        "index": index,
        "point": point_json(point),
        "passed": bool(passed),
    }
    if witness is not None:
        out["witness"] = witness
    return out


def run_suite(config):
    """VerificationReport for one campaign as a JSON-ready dict."""
    config.validate()
    seeds = point_seeds(config.seed, config.samples)
    tasks = list(enumerate(seeds))
    work = partial(run_point, config.suite, config.group, config.backend, config.form_scale, config.corrupt, config.tol)
    if config.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as executor:
            results = list(executor.map(work, tasks, chunksize=1))
    else:
        results = [work(t) for t in tasks]
    records = []
    for rows in sorted(results, key=lambda rs: rs[0]["index"] if rs else -1):
        records.extend(rows)
    passed = sum(1 for r in records if r["passed"])
    return {
        "schema": SCHEMA,
        "config": config.echo(),
        "ledger_hash": ledger_hash(),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0).isoformat(),
        "records": records,
        "summary": {"total": len(records), "passed": passed, "failed": len(records) - passed},
    }

def failures(report):
    return [r for r in report["records"] if not r["passed"]]


# Helpers for suites
def _random_vector(rng, n, height=5):
    return tuple(rng.rational(height) for _ in range(n))

def _random_b(ctx, rng):
    return random_algebra(ctx, rng, ctx.b_idx).m

def _check(check_id, ok, witness):
    return check_id, ok, None if ok else witness


# Suites
@suite('pairing', 'G')
def pairing_suite(ctx, g, rng):
    d = ctx.dim
    rows = []
    e1 = (_random_vector(rng, d), _random_vector(rng, d))
    e2 = (_random_vector(rng, d), _random_vector(rng, d))
    zero = (Fraction(0),) * d
    ok = pairing(e1, e2) == pairing(e2, e1)
    rows.append(_check("symmetric", ok, {"left": str(pairing(e1, e2)), "right": str(pairing(e2, e1))}))
    ok = pairing((e1[0], zero), (e2[0], zero)) == 0 and pairing((zero, e1[1]), (zero, e2[1])) == 0
    rows.append(_check("isotropic-summands", ok, {"reason": "tangent or cotangent summand not isotropic"}))

    x, y = random_algebra(ctx, rng).m, random_algebra(ctx, rng).m
    ginv = g.m.inverse()
    ok = ctx.inner(g.m @ x @ ginv, g.m @ y @ ginv) == ctx.inner(x, y)
    rows.append(_check("ad-invariance", ok, {"x": x.to_json(), "y": y.to_json()}))

    borel = BorelContext(ctx)
    ok = annihilator(borel.b(), ctx.gram()).same_as(borel.u())
    rows.append(_check("annihilator-b", ok, {"reason": "b-perp differs from u"}))

    xi = random_algebra(ctx, rng).m
    ok = gspringer.sigma_dual(ctx, ctx.identity(), xi) == ctx.to_dual(ctx.coords(xi))
    rows.append(_check("sigma-identity", ok, {"xi": xi.to_json()}))

    h = random_point(ctx, 'G', rng)
    ok = chevalley(h * g * h.inverse()) == chevalley(g)
    rows.append(_check("kappa-invariance", ok, {"h": h.m.to_json()}))

    lie = LieContext(ctx)
    u, v, w = [_random_vector(rng, d) for _ in range(3)]
    K = ctx.gram()
    ok = lie.chi(K.apply(u), K.apply(v), K.apply(w)) == lie.eta_coords(u, v, w)
    rows.append(_check("chi-normalization", ok, {"u": [str(c) for c in u]}))

    omega = TwoFormFiber(g, _random_skew(rng, d))
    ok, witness = is_lagrangian(graph_two_form(omega))
    rows.append(_check("graph-lagrangian", ok, witness))
    return rows

def _random_skew(rng, d):
    rows = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            x = rng.rational(5)
            rows[i][j] = x
            rows[j][i] = -x
    return Mat(rows)


@suite('cartan-dirac', 'G')
def cartan_dirac_suite(ctx, g, rng):
    rows = []
    fiber = cartan_dirac(g)
    ok, witness = is_lagrangian(fiber)
    rows.append(_check("lagrangian", ok, witness))

    projected = fiber.tangent_projection()
    rho = span([ctx.coords(e - g.m.inverse() @ e @ g.m) for e in ctx.basis], ctx.dim)
    expected = conjugacy_tangent_dim(g)
    ok = projected.same_as(rho) and projected.dim == expected
    rows.append(_check("tangent-projection", ok, {"dim": projected.dim, "expected": expected}))

    i, j = rng.randint(0, ctx.dim - 1), rng.randint(0, ctx.dim - 1)
    rows.append(_closure_row(g, i, j))
    return rows

def _closure_row(g, i, j):
    ctx = g.ctx
    t, f = dorfman_closure_defect(g, ctx.basis[i], ctx.basis[j])
    ok = all(x == 0 for x in t) and all(x == 0 for x in f)
    return _check("closure", ok, {"pair": [i, j], "tangent_defect": [str(x) for x in t], "form_defect": [str(x) for x in f]})


@suite('dorfman-closure', 'G')
def dorfman_closure_suite(ctx, g, rng):
    bad = None
    for i in range(ctx.dim):
        for j in range(ctx.dim):
            _, ok, witness = _closure_row(g, i, j)
            if not ok:
                bad = witness
                break
        if bad:
            break
    return [_check("closure", bad is None, bad)]


@suite('double', 'double')
def double_suite(ctx, p, rng):
    d = ctx.dim
    rows = []
    zero = ctx.element((Fraction(0),) * d)
    bad = []
    for k, e in enumerate(ctx.basis):
        for xi1, xi2, tag in ((e, zero, "first"), (zero, e, "second")):
            ok, _ = gspringer.moment_condition_check(p, xi1, xi2)
            if not ok:
                bad.append([tag, k])
    rows.append(_check("moment", not bad, {"basis": bad[:5]}))

    u, v, w = [_random_vector(rng, 2 * d, 3) for _ in range(3)]
    rows.append(("closed",) + gspringer.closedness_check(p, u, v, w))
    rows.append(("nondegenerate",) + gspringer.nondegeneracy_check(p))
    for _ in range(INVARIANCE_SAMPLES):
        g1, g2 = random_point(ctx, 'G', rng), random_point(ctx, 'G', rng)
        ok, witness = gspringer.invariance_check(p, g1, g2)
        if not ok:
            break
    rows.append(("invariance", ok, witness))

    g1, g2 = random_point(ctx, 'G', rng), random_point(ctx, 'G', rng)
    f1, f2 = gspringer.phi(p.act(g1, g2))
    h1, h2 = gspringer.phi(p)
    ok = f1 == g1 * h1 * g1.inverse() and f2 == g2 * h2 * g2.inverse()
    rows.append(_check("phi-equivariance", ok, {"g1": g1.m.to_json(), "g2": g2.m.to_json()}))
    return rows


@suite('lemma-kernel', 'B')
def lemma_kernel_suite(ctx, b, rng):
    xis = [ctx.basis[i] for i in ctx.b_idx] + [_random_b(ctx, rng)]
    bad = None
    for xi in xis:
        ok, witness = gspringer.kernel_lemma_check(b, xi)
        if not ok:
            bad = witness
            break
    return [_check("kernel", bad is None, bad)]


@suite('regact', 'GxB')
def regact_suite(ctx, p, rng):
    rows = []
    fiber = gspringer.restrict_to_GxB(p.g, p.b)
    ok, witness = is_lagrangian(fiber)
    rows.append(_check("restriction-lagrangian", ok and fiber.dim == ctx.dim + ctx.dim_b, witness or {"dim": fiber.dim}))
    ok = fiber.cotangent_part().dim == 0
    rows.append(_check("restriction-graph", ok, {"cotangent_dim": fiber.cotangent_part().dim}))
    _, ok, witness = gspringer.regact_check(p.g, p.b)
    rows.append(("regular-action", ok, witness))
    return rows


def _random_borel(ctx, rng):
    return random_point(ctx, 'B', rng, height=4)

@suite('gs-theorem1', 'gs')
def theorem1_suite(ctx, p, rng):
    rows = []
    chart = gspringer.QuotientChart(p.g, p.b)
    rows.append(_check("chart", chart.is_valid(), {"vertical_dim": chart.vertical().dim}))
    rows.extend(gspringer.theorem1_check(p))
    rows.append(("representative",) + gspringer.representative_independence_check(p, _random_borel(ctx, rng)))
    k = random_point(ctx, 'G', rng, height=4)
    rows.extend(gspringer.residual_action_check(p, k, random_algebra(ctx, rng).m))
    return rows


@suite('gs-theorem2', 'gs')
def theorem2_suite(ctx, p, rng):
    return gspringer.theorem2_check(p)


@suite('bivector', 'gs')
def bivector_suite(ctx, p, rng):
    return gspringer.bivector_checks(p)


@suite('diagram-gs', 'gs')
def diagram_suite(ctx, p, rng):
    rows = [("kappa",) + gspringer.diagram_check(p)]
    mu, lam = gspringer.mu(p), gspringer.lambda_(p)
    ok = gspringer.steinberg_membership(mu, lam)
    rows.append(_check("steinberg-fiber", ok, {"mu": mu.m.to_json(), "lambda": lam.m.to_json()}))
    q = p.transform(_random_borel(ctx, rng))
    ok = gspringer.mu(q) == mu and gspringer.lambda_(q) == lam and q.equivalent(p)
    rows.append(_check("well-defined", ok, {"other": q.to_json()}))
    return rows


@suite('leaf-form', 'gs')
def leaf_form_suite(ctx, p, rng):
    return gspringer.leaf_checks(p, rng)


@suite('steinberg', 'steinberg', float_ok=True)
def steinberg_suite(ctx, point, rng):
    t, h, u = point
    rows = []
    ok = gspringer.steinberg_membership(u, GroupElement(ctx, ctx.identity()))
    rows.append(_check("unipotent", ok, {"u": u.m.to_json()}))

    dim = conjugacy_tangent_dim(t)
    rows.append(_check("codimension", dim == ctx.dim - ctx.rank, {"dim": dim, "expected": ctx.dim - ctx.rank}))
    rows.append(_check("weyl-closure", WeylGroup(ctx).closure_holds(), {"reason": "representatives do not close modulo T"}))

    g = h * t * h.inverse()
    points = gspringer.weyl_fiber_enum(g)
    order = math.factorial(ctx.n)
    rows.append(_check("fiber-count", len(points) == order, {"count": len(points), "expected": order}))
    residual = max(gspringer.mu_residual(q, g) for q in points)
    rows.append(_check("fiber-residual", residual < 1e-8, {"residual": residual}))
    clash = [[i, j] for i in range(len(points)) for j in range(i + 1, len(points))
             if gspringer.float_equivalent(points[i], points[j])]
    rows.append(_check("fiber-distinct", not clash, {"pairs": clash[:5]}))
    return rows


@suite('linalg', 'linalg', float_ok=True)
def linalg_suite(ctx, point, rng):
    n = rng.randint(2, 6)

    def integer_matrix(rows, cols, bound):
        # low-rank products show up often enough to exercise degenerate cases
        if rng.randint(0, 2) == 0 and min(rows, cols) > 1:
            r = rng.randint(1, min(rows, cols) - 1)
            a = Mat([[rng.randint(-bound, bound) for _ in range(r)] for _ in range(rows)])
            c = Mat([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(r)])
            return a @ c
        return Mat([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)])

    backend = ctx.backend
    rows = []
    A = span(integer_matrix(n, rng.randint(1, n), 5).columns(), n, backend)
    B = span(integer_matrix(n, rng.randint(1, n), 5).columns(), n, backend)
    lhs = A.sum(B).dim + intersect(A, B).dim
    rows.append(_check("dimension-formula", lhs == A.dim + B.dim, {"sum_plus_meet": lhs, "dims": [A.dim, B.dim]}))

    m = integer_matrix(rng.randint(1, 6), rng.randint(1, 6), 10)
    if backend == 'float':
        m = m.to_float()
    r, k = rank(m), kernel(m).dim
    rows.append(_check("rank-nullity", r + k == m.cols, {"rank": r, "nullity": k, "cols": m.cols}))

    m = integer_matrix(rng.randint(1, 6), rng.randint(1, 6), 100)
    fr = rank(m.to_float())
    rows.append(_check("float-rank", fr == rank(m), {"exact": rank(m), "float": fr, "matrix": m.to_json()}))
    return rows


# Eval helpers used by the command line
def eval_kappa(g):
    return [str(x) for x in chevalley(g)]

def eval_steinberg(g, t):
    return {"member": gspringer.steinberg_membership(g, t),
            "kappa": eval_kappa(g), "kappa_t": eval_kappa(t)}

def eval_fiber_enum(g):
    points = gspringer.weyl_fiber_enum(g)
    return {"count": len(points), "points": [p.to_json() for p in points],
            "residual": max(gspringer.mu_residual(p, g) for p in points)}

def eval_leaf_form(p):
    form, basis = gspringer.leaf_two_form(p)
    return {"point": p.to_json(), "basis": [[str(x) for x in v] for v in basis],
            "matrix": form.matrix.to_json()}
