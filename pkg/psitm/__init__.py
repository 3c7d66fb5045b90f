# NOTE: best to place this at the top in case we want to import
# it in other files
try:
    from ._version import version as __version__
except ImportError:
    __version__ = 'unknown'

### Major classes
from .depth import Word, DepthTable
from .budget import IotaSpec
from .payload import Payload, PayloadLayout, SelectorViews
from .machine import MachineSpec, Configuration, Verdict
from .ledger import BudgetLedger
from .bounds import BoundQuery, BoundResult, RelaxationParams
from .antisim import SimulationAttempt
from .languages import PointerChaseInstance, PhaseLockedInstance, TreeInstance
from .workbench.manifest import RunManifest

### Major functions
from .depth import depth_table, structural_depth, structural_depth_oracle
from .budget import budget_bits
from .payload import decode_payload
from .machine import step
from .ledger import run, count_transcripts
from .library import get_machine
from .reading import parse_machine, read_machine

from .bounds import (
    fooling_bound,
    fano_bound,
    binary_entropy,
    relaxed_bounds,
    dt_depth_bound,
    ic_gate_bound,
    lk_lb_estimate)

from .antisim import (
    antisim_threshold,
    antisim_ratio,
    antisim_violates,
    antisim_ratio_curve)

### Serialization
from .serialization import save_json, load_json

from .tests import test

__all__ = [
    'Word',
    'DepthTable',
    'IotaSpec',
    'Payload',
    'PayloadLayout',
    'SelectorViews',
    'MachineSpec',
    'Configuration',
    'Verdict',
    'BudgetLedger',
    'BoundQuery',
    'BoundResult',
    'RelaxationParams',
    'SimulationAttempt',
    'PointerChaseInstance',
    'PhaseLockedInstance',
    'TreeInstance',
    'RunManifest',
    'depth_table',
    'structural_depth',
    'structural_depth_oracle',
    'budget_bits',
    'decode_payload',
    'step',
    'run',
    'count_transcripts',
    'get_machine',
    'parse_machine',
    'read_machine',
    'fooling_bound',
    'fano_bound',
    'binary_entropy',
    'relaxed_bounds',
    'dt_depth_bound',
    'ic_gate_bound',
    'lk_lb_estimate',
    'antisim_threshold',
    'antisim_ratio',
    'antisim_violates',
    'antisim_ratio_curve',
    'save_json',
    'load_json',
    'test'
    ]
