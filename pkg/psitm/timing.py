import time
import logging
from functools import wraps


log = logging.getLogger('psitm.timing')


def timing(func):
    """
    Decorator that logs the wall-clock runtime of every call to 'func' on the
    'psitm.timing' logger, at DEBUG level.
    """
    @wraps(func)
    def wrapped(*args, **kwargs):
        t0 = time.perf_counter()
        output = func(*args, **kwargs)
        dt = time.perf_counter() - t0
        log.debug(f"{func.__qualname__!r} runtime: {dt * 1000.0:.2f} ms")
        return output
    return wrapped
