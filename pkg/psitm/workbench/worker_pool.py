import logging
import multiprocessing


log = logging.getLogger('psitm.workbench.worker_pool')


class WorkerPool(object):
    """
    Map a picklable func-like object over a list of arguments, serially or
    with a multiprocessing.Pool. Results are returned in argument order, so
    the output does not depend on the number of processes.

    Parameters
    ----------
    func : callable
        Picklable callable taking a single argument
    processes : int
        Number of parallel processes; 1 means run in the calling process
    """
    def __init__(self, func, processes=1):
        if processes < 1:
            raise ValueError(f"processes must be >= 1, got {processes}")
        self.func = func
        self.processes = int(processes)

    def map(self, args):
        args = list(args)
        if self.processes == 1 or len(args) <= 1:
            log.debug(f"Processing {len(args)} jobs serially")
            return [self.func(a) for a in args]

        log.debug(f"Processing {len(args)} jobs with {self.processes} processes")
        pool = multiprocessing.Pool(processes=self.processes)
        results = pool.map(self.func, args)
        # NOTE: don't forget to close the pool to free up RAM
        # NOTE: and don't forget to join, otherwise the coverage module
        # does not properly report coverage for sub-processes spawned by
        # the pool
        pool.close()
        pool.join()
        return results
