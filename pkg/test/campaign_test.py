# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

from util import *

from qpslab import gspringer
from qpslab.campaign import (SUITES, SCHEMA, INVARIANCE_SAMPLES, CampaignConfig, UsageError, ConfigError, run_suite, failures,
                             point_seeds, eval_kappa, eval_steinberg, eval_fiber_enum, eval_leaf_form)
from qpslab.liegroup import random_point
from qpslab.gspringer import GSPoint


def strip(report):
    return dict((k, v) for k, v in report.items() if k != 'timestamp')


def test_suite_names():
    assert sorted(SUITES) == sorted([
        'pairing', 'cartan-dirac', 'dorfman-closure', 'double', 'lemma-kernel', 'regact',
        'gs-theorem1', 'gs-theorem2', 'bivector', 'diagram-gs', 'leaf-form', 'steinberg', 'linalg'])

def test_point_seeds():
    assert point_seeds(42, 3) == point_seeds(42, 3)
    assert len(set(point_seeds(42, 10))) == 10
    assert point_seeds(42, 3) != point_seeds(43, 3)

@pytest.mark.parametrize('name', sorted(SUITES))
def test_suite_passes(name):
    report = run_suite(CampaignConfig(name, group='sl2', samples=3, seed=7))
    assert report["schema"] == SCHEMA
    assert report["summary"]["failed"] == 0, failures(report)
    assert report["summary"]["total"] == len(report["records"])
    assert all(r["check_id"].startswith(name + "/") for r in report["records"])
    assert [r["index"] for r in report["records"]] == sorted(r["index"] for r in report["records"])

@pytest.mark.parametrize('name', ['pairing', 'cartan-dirac', 'regact', 'gs-theorem1', 'diagram-gs'])
def test_suite_passes_gl2(name):
    report = run_suite(CampaignConfig(name, group='gl2', samples=2, seed=3))
    assert report["summary"]["failed"] == 0, failures(report)

def test_double_invariance_sample_count(monkeypatch):
    calls = []
    check = gspringer.invariance_check

    def counting(p, g1, g2):
        calls.append((g1, g2))
        return check(p, g1, g2)

    monkeypatch.setattr(gspringer, 'invariance_check', counting)
    report = run_suite(CampaignConfig('double', samples=1, seed=3))
    assert report["summary"]["failed"] == 0, failures(report)
    assert INVARIANCE_SAMPLES == 10
    assert len(calls) == 10

def test_report_is_deterministic():
    a = run_suite(CampaignConfig('cartan-dirac', samples=3, seed=99))
    b = run_suite(CampaignConfig('cartan-dirac', samples=3, seed=99))
    assert strip(a) == strip(b)

def test_jobs_do_not_change_the_report():
    a = run_suite(CampaignConfig('regact', samples=4, seed=5, jobs=1))
    b = run_suite(CampaignConfig('regact', samples=4, seed=5, jobs=2))
    assert a["records"] == b["records"]

def test_config_echo():
    report = run_suite(CampaignConfig('linalg', samples=1, seed=1, form_scale='3/2'))
    assert report["config"]["form_scale"] == "3/2"
    assert report["config"]["suite"] == "linalg"
    assert len(report["ledger_hash"]) == 64

@pytest.mark.parametrize('name,hook', [
    ('pairing', 'sigma-half'),
    ('lemma-kernel', 'sigma-sign'),
    ('double', 'omega-sign'),
    ('dorfman-closure', 'dorfman-eta'),
])
def test_corrupted_conventions_fail(name, hook):
    report = run_suite(CampaignConfig(name, samples=2, seed=11, corrupt=[hook]))
    assert report["summary"]["failed"] > 0
    assert report["config"]["corrupt"] == [hook]
    assert all("witness" in r for r in failures(report))

@pytest.mark.parametrize('hook', ['sigma-half', 'omega-sign'])
def test_corrupted_conventions_break_the_quotient(hook):
    report = run_suite(CampaignConfig('gs-theorem1', samples=4, seed=42, corrupt=[hook]))
    failed = set(r["check_id"] for r in failures(report))
    assert 'gs-theorem1/f-dirac' in failed
    assert 'gs-theorem1/induced-action' in failed

@pytest.mark.parametrize('name', ['steinberg', 'linalg'])
def test_float_backend_suites_pass(name):
    report = run_suite(CampaignConfig(name, samples=3, seed=7, backend='float'))
    assert report["config"]["backend"] == 'float'
    assert report["summary"]["failed"] == 0, failures(report)

def test_float_backend_reaches_the_points():
    exact = run_suite(CampaignConfig('steinberg', samples=1, seed=7))["records"][0]["point"]
    floats = run_suite(CampaignConfig('steinberg', samples=1, seed=7, backend='float'))["records"][0]["point"]
    assert all(isinstance(x, str) for m in exact for entry in m["entries"] for x in entry)
    assert all(isinstance(x, float) for m in floats for entry in m["entries"] for x in entry)

def test_validation():
    with pytest.raises(UsageError):
        CampaignConfig('nope').validate()
    with pytest.raises(UsageError):
        CampaignConfig('gs-theorem1', backend='float').validate()
    CampaignConfig('steinberg', backend='float').validate()
    with pytest.raises(UsageError):
        CampaignConfig('pairing', corrupt=['nope']).validate()
    with pytest.raises(ConfigError):
        CampaignConfig('pairing', group='so3').validate()
    with pytest.raises(ConfigError):
        CampaignConfig('pairing', samples=0).validate()
    with pytest.raises(ConfigError):
        CampaignConfig('pairing', seed=-1).validate()
    with pytest.raises(ConfigError):
        CampaignConfig('pairing', form_scale='-2').validate()
    with pytest.raises(ConfigError):
        CampaignConfig('pairing', backend='decimal').validate()


def test_eval_helpers():
    ctx = group('sl2')
    e = diag(ctx, 1, 1)
    assert eval_kappa(e) == ["2"]
    out = eval_steinberg(element(ctx, [[1, 1], [0, 1]]), e)
    assert out == {"member": True, "kappa": ["2"], "kappa_t": ["2"]}
    out = eval_fiber_enum(diag(ctx, 2, Fraction(1, 2)))
    assert out["count"] == 2
    assert out["residual"] < 1e-9
    p = GSPoint(random_point(ctx, 'G', 1), random_point(ctx, 'B', 2))
    out = eval_leaf_form(p)
    assert len(out["basis"]) == 2
    assert out["matrix"]["rows"] == 2
