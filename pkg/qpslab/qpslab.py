#!/usr/bin/env python

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
# pylint: disable=invalid-name, missing-docstring, broad-except, global-statement

from __future__ import print_function

import traceback
import sys
import re
import os
import json
import argparse

from .corelinalg import QpslabError, Mat
from .liegroup import GROUPS, GroupContext, GroupElement, ContextMismatch
from .gspringer import GSPoint
from . import campaign
from .campaign import CampaignConfig, UsageError, ConfigError


# Application version
ver = '0.1.0'

# Built-in campaign defaults, overridden by config files, environment and flags
defaults = {
    'GROUP': 'sl2',
    'BACKEND': 'exact',
    'SAMPLES': '10',
    'SEED': '42',
    'TOL': '1e-9',
    'JOBS': '1',
    'REPORT': None,
    'FORM_SCALE': '1',
}

# environment variable honoured for the group only
group_env = 'QPSLAB_DEFAULT_GROUP'

# verbose logging
verbose = False
very_verbose = False


# Logging and output
def log(msg, is_error=False):
    sys.stderr.write(msg) if is_error else sys.stdout.write(msg)

def message(msg):
    if very_verbose:
        return "[qpslab-%s] %s\n" % (os.getpid(), msg)
    else:
        return "[qpslab] %s\n" % msg

def info(msg, level=1):
    if level <= 0 or verbose:
        for line in msg.splitlines():
            log(message(line))

def action(msg):
    for line in msg.splitlines():
        log(message(line))

def warning(msg):
    lines = msg.splitlines()
    log(message("WARNING: %s" % lines.pop(0)), True)
    for line in lines:
        log("       %s\n" % line, True)
    log("---\n", True)

def error(msg, code=-1):
    lines = msg.splitlines()
    log(message("ERROR: %s" % lines.pop(0)), True)
    for line in lines:
        log("       %s\n" % line, True)
    log("---\n", True)
    sys.exit(code)


# Global class used for global config
class Global(object):
    def __init__(self):
        self.path = os.path.join(os.path.expanduser("~"), '.qpslab')
        if not os.path.exists(self.path):
            try:
                os.mkdir(self.path)
            except (IOError, OSError):
                pass

    def get_cfg(self, *args, **kwargs):
        return Cfg(self.path).get(*args, **kwargs)

    def set_cfg(self, *args, **kwargs):
        return Cfg(self.path).set(*args, **kwargs)

    def list_cfg(self, *args, **kwargs):
        return Cfg(self.path).list(*args, **kwargs)


# Cfg classed used for handling the config backend
class Cfg(object):
    path = None
    file = ".qpslab"

    def __init__(self, path):
        self.path = path

    def _lines(self):
        fl = os.path.join(self.path, self.file)
        try:
            with open(fl) as f:
                return f.read().splitlines()
        except (IOError, OSError):
            return []

    # Sets config value
    def set(self, var, val):
        retval = False
        if not re.match(r'^([\w+-]+)$', var):
            raise ConfigError("%s is invalid config variable name" % var)

        lines = self._lines()
        for line in list(lines):
            m = re.match(r'^([\w+-]+)\=(.*)$', line)
            if m and m.group(1) == var:
                lines.remove(line)

        if not val is None:
            lines += [var+"="+val]

        fl = os.path.join(self.path, self.file)
        try:
            with open(fl, 'w') as f:
                f.write('\n'.join(lines) + '\n')
                retval = True
        except (IOError, OSError):
            warning("Unable to write config file %s" % fl)
        return retval

    # Gets config value
    def get(self, var, default_val=None):
        for line in self._lines():
            m = re.match(r'^([\w+-]+)\=(.*)$', line)
            if m and m.group(1) == var:
                return m.group(2)
        return default_val

    # Get all config var/values pairs
    def list(self):
        out = {}
        for line in self._lines():
            m = re.match(r'^([\w+-]+)\=(.*)$', line)
            if m and m.group(1):
                out[m.group(1)] = m.group(2)
        return out


# Resolve a campaign option: flag > environment > local > global > default
def get_option(var, flag=None):
    if flag is not None:
        return flag
    if var == 'GROUP' and os.environ.get(group_env):
        return os.environ[group_env]
    value = Cfg(os.getcwd()).get(var)
    if value is None:
        value = Global().get_cfg(var)
    return defaults.get(var) if value is None else value

def _coerce(var, value, kind):
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError("invalid value \"%s\" for %s" % (value, var))


# Subparser handling
parser = argparse.ArgumentParser(prog='qpslab',
    description="Verification laboratory for quasi-Poisson and Dirac geometry of matrix groups\nversion %s\n\nUse \"qpslab <command> -h|--help\" for detailed help." % ver,
    formatter_class=argparse.RawTextHelpFormatter)
subparsers = parser.add_subparsers(title="Commands", metavar="           ")
parser.add_argument("--version", action="store_true", dest="version", help="print version number and exit")
subcommands = {}

# Process handling
def subcommand(name, *args, **kwargs):
    def __subcommand(command):
        aliases = []
        if not kwargs.get('description') and kwargs.get('help'):
            kwargs['description'] = kwargs['help']
        if not kwargs.get('formatter_class'):
            kwargs['formatter_class'] = argparse.RawDescriptionHelpFormatter
        if kwargs.get('hidden_aliases'):
            aliases = kwargs.get('hidden_aliases')
            del kwargs['hidden_aliases']

        subparser = subparsers.add_parser(name, **kwargs)
        subcommands[name] = subparser

        for arg in args:
            arg = dict(arg)
            opt = arg['name']
            del arg['name']

            if isinstance(opt, str):
                subparser.add_argument(opt, **arg)
            else:
                subparser.add_argument(*opt, **arg)

        subparser.add_argument("-v", "--verbose", action="store_true", dest="verbose", help="Verbose diagnostic output")
        subparser.add_argument("-vv", "--very_verbose", action="store_true", dest="very_verbose", help="Very verbose diagnostic output")

        def thunk(parsed_args):
            argv = [arg['dest'] if 'dest' in arg else arg['name'] for arg in args]
            argv = [(arg if isinstance(arg, str) else arg[-1]).strip('-').replace('-', '_')
                    for arg in argv]
            argv = {arg: vars(parsed_args)[arg] for arg in argv
                    if vars(parsed_args)[arg] is not None}

            return command(**argv)

        subparser.set_defaults(command=thunk)

        # set hidden aliases if any
        for alias in aliases:
            subparsers._name_parser_map[alias] = subparsers._name_parser_map[name]

        return command
    return __subcommand


campaign_args = (
    dict(name=['-g', '--group'], dest='group', help='Group: %s. Default: sl2' % ", ".join(sorted(GROUPS))),
    dict(name=['-b', '--backend'], dest='backend', help='Scalar backend: exact or float. Default: exact'),
    dict(name=['-n', '--samples'], dest='samples', help='Number of sample points. Default: 10'),
    dict(name=['-s', '--seed'], dest='seed', help='64-bit campaign seed. Default: 42'),
    dict(name='--tol', dest='tol', help='Float rank cutoff relative to the largest singular value. Default: 1e-9'),
    dict(name=['-r', '--report'], dest='report', help='Write the JSON report to this path'),
    dict(name=['-j', '--jobs'], dest='jobs', help='Worker processes for per-point checks. Default: 1'),
    dict(name='--form-scale', dest='form_scale', help='Scale c of the trace form c.tr(xy). Default: 1'),
)

def campaign_config(suite, group=None, backend=None, samples=None, seed=None, tol=None, report=None, jobs=None, form_scale=None, corrupt=None):
    return CampaignConfig(
        suite,
        group=str(get_option('GROUP', group)).lower(),
        backend=str(get_option('BACKEND', backend)).lower(),
        samples=_coerce('SAMPLES', get_option('SAMPLES', samples), int),
        seed=_coerce('SEED', get_option('SEED', seed), int),
        tol=_coerce('TOL', get_option('TOL', tol), float),
        report=get_option('REPORT', report),
        jobs=_coerce('JOBS', get_option('JOBS', jobs), int),
        form_scale=get_option('FORM_SCALE', form_scale),
        corrupt=corrupt or ()).validate()


# Verify command
@subcommand('verify',
    dict(name='suite', help='Suite to run: %s' % ", ".join(sorted(campaign.SUITES))),
    *(campaign_args + (
        dict(name='--corrupt', dest='corrupt', action='append', help=argparse.SUPPRESS),)),
    help='Run a seeded verification campaign',
    description=(
        "Runs one verification suite over seeded random sample points.\n"
        "Exits with 0 when every check passes and 1 when any check fails.\n"
        "Options default to the local or global configuration (see \"qpslab config\")."))
def verify(suite, group=None, backend=None, samples=None, seed=None, tol=None, report=None, jobs=None, form_scale=None, corrupt=None):
    config = campaign_config(suite, group, backend, samples, seed, tol, report, jobs, form_scale, corrupt)
    if config.corrupt:
        warning("Running with corrupted convention(s): %s" % ", ".join(config.corrupt))
    action("Running suite \"%s\" on %s (%d samples, seed %d)" % (config.suite, config.group, config.samples, config.seed))

    result = campaign.run_suite(config)

    for r in campaign.failures(result):
        action("FAILED %s at point %d" % (r["check_id"], r["index"]))
        if r.get("witness") is not None:
            info(json.dumps(r["witness"], sort_keys=True))
    summary = result["summary"]
    action("%d checks, %d passed, %d failed" % (summary["total"], summary["passed"], summary["failed"]))

    if config.report:
        with open(config.report, 'w') as f:
            json.dump(result, f, indent=2, sort_keys=True)
            f.write('\n')
        info("Report written to \"%s\"" % config.report)
    return 1 if summary["failed"] else 0


# Eval command
def _load(path):
    try:
        with open(path) as f:
            return json.load(f)
    except (IOError, OSError) as e:
        raise UsageError("unable to read \"%s\": %s" % (path, e))
    except ValueError as e:
        raise UsageError("\"%s\" is not valid JSON: %s" % (path, e))

def _context_for(obj, group, backend='exact'):
    tag = obj.get("group") if isinstance(obj, dict) else None
    if group and tag and tag != group:
        raise ContextMismatch("group tag \"%s\" does not match %s" % (tag, group))
    name = group or tag or get_option('GROUP')
    return GroupContext.from_name(name, backend=backend)

def _element(path, group, backend='exact'):
    obj = _load(path)
    ctx = _context_for(obj, group, backend)
    return GroupElement(ctx, Mat.from_json(obj, backend))

@subcommand('eval',
    dict(name='kind', choices=['kappa', 'steinberg', 'fiber-enum', 'leaf-form'], help='What to evaluate: kappa, steinberg, fiber-enum or leaf-form'),
    dict(name='inputs', nargs='+', help='JSON input file(s). steinberg takes a group element and a diagonal element t'),
    dict(name=['-g', '--group'], dest='group', help='Group of the inputs when the files carry no group tag'),
    help='Evaluate maps on matrices from JSON files',
    description=(
        "Evaluates a map on matrices read from JSON files and prints JSON.\n"
        "  kappa       invariant polynomial values of a group element\n"
        "  steinberg   membership of an element in the Steinberg fiber of t\n"
        "  fiber-enum  the points over a regular semisimple element\n"
        "  leaf-form   the leaf 2-form at a point {\"g\": ..., \"b\": ...}"))
def eval_(kind, inputs, group=None):
    group = str(group).lower() if group else None
    if kind == 'kappa':
        out = {"kappa": campaign.eval_kappa(_element(inputs[0], group))}
    elif kind == 'steinberg':
        if len(inputs) != 2:
            raise UsageError("steinberg needs a group element and a diagonal element")
        out = campaign.eval_steinberg(_element(inputs[0], group), _element(inputs[1], group))
    elif kind == 'fiber-enum':
        out = campaign.eval_fiber_enum(_element(inputs[0], group))
    else:
        obj = _load(inputs[0])
        out = campaign.eval_leaf_form(GSPoint.from_json(obj, _context_for(obj, group)))
    log(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return 0


# Generic config command
@subcommand('config',
    dict(name='var', nargs='?', help='Variable name. E.g. "group", "samples", "seed"'),
    dict(name='value', nargs='?', help='Value. Will show the currently set default value for a variable if not specified.'),
    dict(name=['-G', '--global'], dest='global_cfg', action='store_true', help='Use global settings, not local'),
    dict(name=['-U', '--unset'], dest='unset', action='store_true', help='Unset the specified variable.'),
    dict(name=['-L', '--list'], dest='list_config', action='store_true', help='List qpslab configuration.'),
    hidden_aliases=['cfg', 'conf'],
    help='Tool configuration',
    description=(
        "Gets, sets or unsets qpslab configuration options.\n"
        "Options can be global (via the --global switch) or local (current directory)\n"
        "Global options are always overridden by local options.\n"
        "Currently supported options: %s" % ", ".join(k.lower() for k in sorted(defaults))))
def config_(var=None, value=None, global_cfg=False, unset=False, list_config=False):
    name = var
    var = str(var).upper()

    if list_config:
        g_vars = Global().list_cfg().items()
        action("Global config:")
        if g_vars:
            for v in sorted(g_vars):
                log("%s=%s\n" % (v[0], v[1]))
        else:
            log("No global configuration is set\n")
        log("\n")

        action("Local config (%s):" % os.getcwd())
        l_vars = Cfg(os.getcwd()).list().items()
        if l_vars:
            for v in sorted(l_vars):
                log("%s=%s\n" % (v[0], v[1]))
        else:
            log("No local configuration is set\n")

    elif name:
        cfg = Global() if global_cfg else None
        scope = 'global' if global_cfg else 'local'
        getter = cfg.get_cfg if cfg else Cfg(os.getcwd()).get
        setter = cfg.set_cfg if cfg else Cfg(os.getcwd()).set
        if unset:
            if setter(var, None):
                action('Unset %s %s' % (scope, name))
        elif value:
            if setter(var, value):
                action('%s now set as %s %s' % (value, scope, name))
        else:
            value = getter(var)
            action(('%s' % value) if value else 'No %s %s set' % (scope, name))
    else:
        raise UsageError("Too few arguments. Run with -h for detailed help")
    return 0


@subcommand('help',
    help='This help screen')
def help_():
    return parser.print_help()


def main():
    global verbose, very_verbose

    # Parse/run command
    if len(sys.argv) <= 1:
        help_()
        sys.exit(2)

    if '--version' in sys.argv:
        log(ver+"\n")
        sys.exit(0)

    pargs, remainder = parser.parse_known_args()
    if remainder:
        parser.error("unrecognized arguments: %s" % " ".join(remainder))
    if not hasattr(pargs, 'command'):
        help_()
        sys.exit(2)
    status = 1

    very_verbose = getattr(pargs, 'very_verbose', False)
    verbose = very_verbose or getattr(pargs, 'verbose', False)
    try:
        status = pargs.command(pargs)
    except (UsageError, ConfigError) as e:
        error(str(e), 2)
    except QpslabError as e:
        error("%s: %s" % (type(e).__name__, e), 1)
    except KeyboardInterrupt:
        info('User aborted!', -1)
        sys.exit(255)
    except Exception as e:
        if very_verbose:
            traceback.print_exc(file=sys.stdout)
        error("Unknown Error: %s" % e, 255)

    sys.exit(status or 0)


if __name__ == "__main__":
    main()
