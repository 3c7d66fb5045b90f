import json
import pprint
import platform

import numpy
import pandas
from schema import Schema, And, Or, Optional

from ..bounds import CONVENTIONS


SCHEMA_ITEMS = {
    'command': [str],
    'seed': And(int, lambda x: 0 <= x < 1 << 64),
    'convention': lambda x: x in CONVENTIONS,
    'outdir': str,
    'versions': {str: str},
    Optional('wall_clock'): Or(And(float, lambda x: x >= 0), None),
    Optional('files'): [str],
    Optional('ok'): Or(bool, None),

    # Accept any extra keys of type string with JSON-serializable values
    Optional(str): json.dumps
    }

SCHEMA = Schema(SCHEMA_ITEMS, ignore_extra_keys=True)

# Keys that do not take part in the reproducibility contract
VOLATILE_KEYS = ('wall_clock',)


def tool_versions():
    """ Versions of psitm and of the libraries that produce the outputs """
    from .. import __version__
    return {
        'psitm': str(__version__),
        'numpy': numpy.__version__,
        'pandas': pandas.__version__,
        'python': platform.python_version(),
    }


class RunManifest(dict):
    """
    A dict subclass recording how a workbench command was run: command line,
    seed, budget convention, output directory, tool versions and wall-clock
    time. Two runs whose manifests agree on every key except 'wall_clock'
    produce byte-identical CSV files.

    Reserved keys:

    - command: list of str
    - seed: int in [0, 2^64)
    - convention: 'ceil-log' or 'exact-real'
    - outdir: str
    - versions: dict of str
    - wall_clock: float, >= 0, seconds (optional)
    - files: list of str, names of the files written (optional)
    - ok: bool, whether every check passed (optional)
    """
    def __init__(self, items={}):
        SCHEMA.validate(items)
        super(RunManifest, self).__init__(items)
        self.setdefault('wall_clock', None)
        self.setdefault('files', [])
        self.setdefault('ok', None)

    @classmethod
    def create(cls, command, seed, convention, outdir, **extra):
        items = {
            'command': list(command),
            'seed': int(seed),
            'convention': convention,
            'outdir': str(outdir),
            'versions': tool_versions(),
        }
        items.update(extra)
        return cls(items)

    def reproducible_items(self):
        """ Items that determine the CSV outputs """
        return {k: v for k, v in self.items() if k not in VOLATILE_KEYS}

    def save(self, fname):
        with open(fname, 'w') as fobj:
            json.dump(dict(self), fobj, indent=4, sort_keys=True)

    @classmethod
    def load(cls, fname):
        with open(fname, 'r') as fobj:
            return cls(json.load(fobj))

    def to_dict(self):
        return dict(self)

    @classmethod
    def from_dict(cls, items):
        return cls(items)

    def __str__(self):
        return 'RunManifest %s' % pprint.pformat(dict(self))

    def __repr__(self):
        return str(self)
