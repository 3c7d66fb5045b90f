from .run_tests import test
