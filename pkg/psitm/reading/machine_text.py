#
# Declarative machine text format
#
import os
import re

from ..exceptions import MachineFormatError
from ..machine import MachineSpec


# Example
# --------------------------------------------------------------------
#  # Lines starting with '#' are comments
#  name: right_scanner
#  states: scan, accept, reject
#  initial: scan
#  accept: accept
#  reject: reject
#  blank: _
#  alphabet: 0, 1, _
#  policy: canonical
#  policy_params: advice_bits=2       (optional, integer values only)
#  single_pass: true
#  (scan, 0, *) -> (scan, 0, R)
#  (scan, 1, *) -> (scan, 1, R)
#  (scan, _, *) -> (accept, _, S)


ROW_REGEX = re.compile(
    r'^\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)'
    r'\s*->\s*'
    r'\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*,\s*([LRS])\s*\)$'
)

REQUIRED_KEYS = ('states', 'initial', 'accept', 'reject')


def parse_list(s):
    return [x.strip() for x in s.split(',') if x.strip()]


def parse_bool(s):
    s = s.strip().lower()
    if s in ('true', 'yes', '1'):
        return True
    if s in ('false', 'no', '0'):
        return False
    raise ValueError(f"Expected a boolean, got {s!r}")


def parse_params(s):
    params = {}
    for item in parse_list(s):
        key, sep, val = item.partition('=')
        if not sep:
            raise ValueError(f"Expected key=value, got {item!r}")
        params[key.strip()] = int(val)
    return params


KEY_PARSERS = {
    'name': str.strip,
    'states': parse_list,
    'initial': str.strip,
    'accept': str.strip,
    'reject': str.strip,
    'blank': str.strip,
    'alphabet': parse_list,
    'policy': str.strip,
    'policy_params': parse_params,
    'single_pass': parse_bool,
}


def text2dict(text):
    """
    Parse machine text into a dictionary of MachineSpec keyword arguments,
    with the transition rows under the 'rows' key
    """
    items = {'rows': []}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue

        if line.startswith('('):
            match = ROW_REGEX.match(line)
            if not match:
                raise MachineFormatError(f"Line {lineno}: malformed transition row {line!r}")
            items['rows'].append(match.groups())
            continue

        key, sep, val = line.partition(':')
        key = key.strip()
        if not sep or key not in KEY_PARSERS:
            raise MachineFormatError(f"Line {lineno}: unknown key or syntax in {line!r}")
        if key in items:
            raise MachineFormatError(f"Line {lineno}: key {key!r} given twice")
        try:
            items[key] = KEY_PARSERS[key](val)
        except ValueError as err:
            raise MachineFormatError(f"Line {lineno}: {err}") from None

    missing = [k for k in REQUIRED_KEYS if k not in items]
    if missing:
        raise MachineFormatError(f"Missing required keys: {missing}")
    return items


def parse_machine(text):
    """
    Build a MachineSpec from its declarative text. Raises MachineFormatError
    on syntax errors and on semantically invalid machines.
    """
    items = text2dict(text)
    try:
        return MachineSpec(**items)
    except ValueError as err:
        raise MachineFormatError(str(err)) from None


def read_machine(fname):
    """ Load a MachineSpec from a text file """
    with open(os.path.realpath(fname), 'r') as fobj:
        return parse_machine(fobj.read())
