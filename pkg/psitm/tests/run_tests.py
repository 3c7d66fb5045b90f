import os
import pytest


def test(*extra_args):
    """
    Run the psitm test suite. Any extra arguments are passed to pytest,
    e.g. psitm.test('-k', 'stress').

    Returns
    -------
    exit_code : int
        pytest exit code, 0 if all tests passed
    """
    tests_dir = os.path.dirname(__file__)
    args = ['--verbose', tests_dir] + list(extra_args)
    return int(pytest.main(args))
