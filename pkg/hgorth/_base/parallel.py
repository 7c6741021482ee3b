from itertools import islice
from collections import deque
from multiprocessing import Pool

calculator = None


def initializer(calc):
    global calculator
    calculator = calc


def worker(job):
    return calculator._calculate(job)


class JobPool(object):
    def __init__(self, calc, nproc):
        self.pool = Pool(nproc, initializer, (calc,))
        self.nproc = nproc

    def __enter__(self):
        return self

    def __exit__(self, *args, **kwargs):
        self.pool.terminate()

    def map(self, jobs):
        return JobIterator(self, jobs, self.nproc * 2 + 10)

    def submit(self, job):
        return self.pool.apply_async(worker, (job,))


class JobIterator(object):
    """Yields results in submission order, keeping at most buf jobs in flight."""

    def __init__(self, pool, jobs, buf):
        self.pool = pool
        self.futures = deque()
        self.jobs = iter(jobs)

        for job in islice(self.jobs, buf):
            self.submit(job)

    def submit(self, job):
        self.futures.append((job, self.pool.submit(job)))

    def __iter__(self):
        return self

    def __next__(self):
        try:
            self.submit(next(self.jobs))
        except StopIteration:
            pass

        try:
            job, fut = self.futures.popleft()
            return job, fut.get()
        except IndexError:
            raise StopIteration

    next = __next__


def parallel(calc, jobs, nproc, njobs, quiet):
    with JobPool(calc, nproc) as pool, calc._progress(quiet, njobs) as bar:
        for _, r in pool.map(jobs):
            yield r
            bar.update()
