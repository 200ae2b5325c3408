# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

from util import *


IDENTITY = {"group": "sl2", "rows": 2, "cols": 2, "entries": ["1", "0", "0", "1"]}
UNIPOTENT = {"group": "sl2", "rows": 2, "cols": 2, "entries": ["1", "1", "0", "1"]}
REGULAR = {"group": "sl2", "rows": 2, "cols": 2, "entries": ["2", "0", "0", "1/2"]}


def test_version(qpslab):
    assert pquery(qpslab + ['--version']).strip() == '0.1.0'

def test_no_arguments(qpslab):
    assert exit_code(qpslab) == 2

def test_verify_passes(qpslab):
    out = pquery(qpslab + ['verify', 'cartan-dirac', '-n', '3', '-r', 'report.json'])
    assert 'failed' in out
    report = read_json('report.json')
    assert report["schema"] == "qpslab/1"
    assert report["summary"]["failed"] == 0
    assert report["config"]["group"] == "sl2"
    assert report["config"]["samples"] == 3

def test_verify_reports_failures(qpslab):
    assert exit_code(qpslab + ['verify', 'lemma-kernel', '-n', '2', '--corrupt', 'sigma-sign', '-r', 'bad.json']) == 1
    report = read_json('bad.json')
    assert report["summary"]["failed"] > 0
    assert report["config"]["corrupt"] == ["sigma-sign"]

def test_verify_usage_errors(qpslab):
    assert exit_code(qpslab + ['verify', 'no-such-suite']) == 2
    assert exit_code(qpslab + ['verify', 'pairing', '-g', 'so3']) == 2
    assert exit_code(qpslab + ['verify', 'pairing', '-n', 'many']) == 2
    assert exit_code(qpslab + ['verify', 'gs-theorem1', '-b', 'float']) == 2
    assert exit_code(qpslab + ['verify', 'pairing', '--unknown-flag']) == 2

def test_verify_is_reproducible(qpslab):
    pquery(qpslab + ['verify', 'regact', '-n', '2', '-s', '123', '-r', 'a.json'])
    pquery(qpslab + ['verify', 'regact', '-n', '2', '-s', '123', '-r', 'b.json'])
    assert read_json('a.json')["records"] == read_json('b.json')["records"]

def test_verify_float_backend(qpslab):
    pquery(qpslab + ['verify', 'steinberg', '-n', '2', '-b', 'float', '-r', 'f.json'])
    pquery(qpslab + ['verify', 'steinberg', '-n', '2', '-r', 'e.json'])
    floats, exact = read_json('f.json'), read_json('e.json')
    assert floats["summary"]["failed"] == 0
    assert floats["config"]["backend"] == 'float'
    assert isinstance(floats["records"][0]["point"][0]["entries"][0][0], float)
    assert isinstance(exact["records"][0]["point"][0]["entries"][0][0], str)

def test_config_local_and_global(qpslab):
    pquery(qpslab + ['config', 'group', 'gl2'])
    assert 'gl2' in pquery(qpslab + ['config', 'group'])
    pquery(qpslab + ['config', '-G', 'samples', '2'])
    assert '2' in pquery(qpslab + ['config', '-G', 'samples'])
    out = pquery(qpslab + ['config', '--list'])
    assert 'GROUP=gl2' in out
    assert 'SAMPLES=2' in out

    pquery(qpslab + ['verify', 'pairing', '-r', 'r.json'])
    config = read_json('r.json')["config"]
    assert (config["group"], config["samples"]) == ("gl2", 2)

    pquery(qpslab + ['config', '-U', 'group'])
    assert 'No local group set' in pquery(qpslab + ['config', 'group'])

def test_config_hidden_alias(qpslab):
    pquery(qpslab + ['cfg', 'seed', '5'])
    assert '5' in pquery(qpslab + ['conf', 'seed'])

def test_invalid_config_value(qpslab):
    pquery(qpslab + ['config', 'samples', 'zero'])
    assert exit_code(qpslab + ['verify', 'pairing']) == 2

def test_environment_group(qpslab, monkeypatch):
    pquery(qpslab + ['config', 'group', 'gl2'])
    monkeypatch.setenv('QPSLAB_DEFAULT_GROUP', 'sl3')
    pquery(qpslab + ['verify', 'linalg', '-n', '1', '-r', 'env.json'])
    assert read_json('env.json')["config"]["group"] == "sl3"
    pquery(qpslab + ['verify', 'linalg', '-n', '1', '-g', 'sl2', '-r', 'flag.json'])
    assert read_json('flag.json')["config"]["group"] == "sl2"

def test_eval_kappa(qpslab):
    write_json('e.json', IDENTITY)
    out = json.loads(pquery(qpslab + ['eval', 'kappa', 'e.json']))
    assert out == {"kappa": ["2"]}

def test_eval_steinberg(qpslab):
    write_json('u.json', UNIPOTENT)
    write_json('e.json', IDENTITY)
    write_json('t.json', REGULAR)
    assert json.loads(pquery(qpslab + ['eval', 'steinberg', 'u.json', 'e.json']))["member"]
    assert not json.loads(pquery(qpslab + ['eval', 'steinberg', 't.json', 'e.json']))["member"]

def test_eval_fiber_enum(qpslab):
    write_json('t.json', REGULAR)
    out = json.loads(pquery(qpslab + ['eval', 'fiber-enum', 't.json']))
    assert out["count"] == 2
    write_json('u.json', UNIPOTENT)
    assert exit_code(qpslab + ['eval', 'fiber-enum', 'u.json']) == 1

def test_eval_errors(qpslab):
    write_json('e.json', IDENTITY)
    assert exit_code(qpslab + ['eval', 'kappa', 'missing.json']) == 2
    assert exit_code(qpslab + ['eval', 'kappa', 'e.json', '-g', 'gl2']) == 1
    assert exit_code(qpslab + ['eval', 'steinberg', 'e.json']) == 2
    with open('broken.json', 'w') as f:
        f.write('{')
    assert exit_code(qpslab + ['eval', 'kappa', 'broken.json']) == 2
