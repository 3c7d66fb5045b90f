import copy

from schema import Schema, Use, Optional, And, Or


class InvalidStressConfig(Exception):
    pass


def strictly_positive(x):
    return x > 0


def at_least_two(x):
    return x >= 2


# Defaults of the stress matrix, overridden by any key of a YAML config
DEFAULT_STRESS_CONFIG = {
    'processes': 1,
    'ks': [2, 3, 4],
    'm': 16,
    'instances': 32,
    'family_size': 16,
    'phase_m': 8,
    'toggles': {
        'multi_pass': True,
        'advice_bits': 4,
        'stochastic': True,
        'budget_factor': 2,
    },
}


STRESS_CONFIG_SCHEMA = Schema({
    Optional('processes'): And(int, strictly_positive, error="processes must be an int > 0"),
    Optional('ks'): And(
        [And(int, at_least_two)], len, error="ks must be a non-empty list of ints >= 2"),
    Optional('m'): And(int, at_least_two, error="m must be an int >= 2"),
    Optional('instances'): And(int, strictly_positive, error="instances must be an int > 0"),
    Optional('family_size'): And(
        int, strictly_positive, error="family_size must be an int > 0"),
    Optional('phase_m'): And(int, at_least_two, error="phase_m must be an int >= 2"),
    Optional('toggles'): {
        Optional('multi_pass'): Schema(bool, error="toggles.multi_pass must be a boolean"),
        Optional('advice_bits'): Or(
            And(int, strictly_positive), None,
            error="toggles.advice_bits must be an int > 0 or null/blank"),
        Optional('stochastic'): Schema(bool, error="toggles.stochastic must be a boolean"),
        Optional('budget_factor'): Or(
            And(Use(float), lambda x: x > 1), None,
            error="toggles.budget_factor must be a number > 1 or null/blank"),
    },
})


def validate_stress_config(conf):
    """
    Validate a stress configuration dictionary and merge it onto the
    defaults.

    Parameters
    ----------
    conf : dict or None
        Configuration dictionary loaded from a YAML file; None means all
        defaults

    Returns
    -------
    validated : dict
        Complete configuration dictionary

    Raises
    ------
    InvalidStressConfig
    """
    conf = conf or {}
    try:
        validated = STRESS_CONFIG_SCHEMA.validate(conf)
    except Exception as ex:
        # Suppress long and confusing exception chain caused by schema library
        raise InvalidStressConfig(str(ex)) from None

    merged = copy.deepcopy(DEFAULT_STRESS_CONFIG)
    toggles = validated.pop('toggles', {})
    merged.update(validated)
    merged['toggles'].update(toggles)
    return merged
