# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

# You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND,
# either express or implied.

from __future__ import print_function

import subprocess
import pytest
import json
import os
import sys
from fractions import Fraction

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from qpslab.corelinalg import Mat
from qpslab.liegroup import GroupContext, GroupElement

# Process execution
class ProcessException(Exception):
    pass

def pquery(command, stdin=None, **kwargs):
    print(' '.join(command))
    proc = subprocess.Popen(command, stdout=subprocess.PIPE, stderr=subprocess.PIPE, **kwargs)
    stdout, stderr = proc.communicate(stdin)

    if proc.returncode != 0:
        raise ProcessException(proc.returncode, stderr.decode("utf-8"))

    return stdout.decode("utf-8")

# Handling test environment
@pytest.fixture
def qpslab(tmpdir, monkeypatch):
    tmpdir.chdir()
    # keep the global ~/.qpslab of the user out of the tests
    monkeypatch.setenv('HOME', str(tmpdir.join('home')))
    monkeypatch.setenv('USERPROFILE', str(tmpdir.join('home')))
    monkeypatch.delenv('QPSLAB_DEFAULT_GROUP', raising=False)
    monkeypatch.setenv('PYTHONPATH', ROOT + os.pathsep + os.environ.get('PYTHONPATH', ''))
    tmpdir.join('home').ensure(dir=True)

    return [sys.executable, '-m', 'qpslab']

# Higher level functions
def exit_code(command):
    try:
        pquery(command)
    except ProcessException as e:
        return e.args[0]
    return 0

def write_json(path, obj):
    with open(path, 'w') as f:
        json.dump(obj, f)

def read_json(path):
    with open(path) as f:
        return json.load(f)

# Test specific utils
def group(name, **kwargs):
    return GroupContext.from_name(name, **kwargs)

def element(ctx, rows):
    return GroupElement(ctx, Mat([[Fraction(x) for x in row] for row in rows]))

def diag(ctx, *entries):
    n = len(entries)
    return element(ctx, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])
