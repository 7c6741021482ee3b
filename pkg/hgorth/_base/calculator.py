from __future__ import print_function

import sys
from contextlib import contextmanager
from multiprocessing import cpu_count

from .._util import DummyBar
from ..error import Error, Missing, HGMException, MissingValueBase
from .model import DEFAULT_MAX_DIM, ProblemSpec
from .config import IntegratorConfig
from ..probability import orthant_probability, orthant_probability_signed

try:
    from tqdm import tqdm
except ImportError:
    tqdm = DummyBar


class OrthantCalculator(object):
    r"""orthant probability calculator.

    Parameters:
        config(IntegratorConfig or dict): integrator settings
        max_dim(int): dimension cap

    >>> from hgorth import OrthantCalculator, ProblemSpec
    >>> calc = OrthantCalculator()
    >>> round(calc(ProblemSpec([0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]])).probability, 10)
    0.25

    """

    __slots__ = ("_config", "_max_dim", "_progress_bar")

    def __init__(self, config=None, max_dim=DEFAULT_MAX_DIM):
        if config is None:
            config = IntegratorConfig()
        elif isinstance(config, dict):
            config = IntegratorConfig(**config)

        self._config = config
        self._max_dim = int(max_dim)

    def __reduce_ex__(self, version):
        return self.__class__, (self._config, self._max_dim)

    def config(self, **configs):
        r"""Replace integrator settings.

        >>> calc = OrthantCalculator()
        >>> calc.config(method="rk4", initial_step=0.01)
        >>> calc.integrator_config.method
        <Method.rk4: 'rk4-fixed'>

        """
        self._config = self._config.replace(**configs)

    @property
    def integrator_config(self):
        return self._config

    @property
    def max_dim(self):
        return self._max_dim

    def __call__(self, spec, signs=None):
        r"""Calculate orthant probability.

        Parameters:
            spec(ProblemSpec): problem
            signs(Iterable[int] or None): orthant signs, positive orthant when None

        Returns:
            OrthantResult

        """
        if signs is None:
            return orthant_probability(spec, self._config, self._max_dim)

        return orthant_probability_signed(spec, signs, self._config, self._max_dim)

    @staticmethod
    def is_failure(r):
        return isinstance(r, MissingValueBase)

    def _calculate(self, job):
        spec, signs = job
        try:
            return self(spec, signs)
        except HGMException as e:
            return Missing(e, spec)
        except Exception as e:
            return Error(e, spec)

    @staticmethod
    def _job(item):
        if isinstance(item, ProblemSpec):
            return item, None

        spec, signs = item
        return spec, signs

    def _serial(self, jobs, njobs, quiet):
        with self._progress(quiet, njobs) as bar:
            for job in jobs:
                yield self._calculate(job)
                bar.update()

    @contextmanager
    def _progress(self, quiet, total):
        args = {"dynamic_ncols": True, "leave": True, "total": total}
        Bar = DummyBar if quiet else tqdm

        try:
            with Bar(**args) as self._progress_bar:
                yield self._progress_bar
        finally:
            if hasattr(self, "_progress_bar"):
                del self._progress_bar

    def echo(self, s, file=sys.stderr, end="\n"):
        """Output message without breaking the progress bar.

        Parameters:
            s(str): message to output
            file(file-like): output to
            end(str): end mark of message

        """
        p = getattr(self, "_progress_bar", None)
        if p is not None:
            p.write(s, file=file, end=end)
            return

        print(s, file=file, end=end)  # noqa: T003

    def map(self, specs, nproc=None, njobs=None, quiet=False):
        r"""Calculate orthant probabilities over problems.

        Failures do not stop the batch: known failures are wrapped in
        :py:class:`hgorth.error.Missing`, unknown ones in :py:class:`hgorth.error.Error`.

        Parameters:
            specs(Iterable[ProblemSpec or (ProblemSpec, signs)]): problems

            nproc(int): number of process to use. default: multiprocessing.cpu_count()

            njobs(int): number of problems to use in progress-bar. default: specs.__len__()

            quiet(bool): don't show progress bar. default: False

        Returns:
            Iterator[OrthantResult or MissingValueBase]

        """
        if nproc is None:
            nproc = cpu_count()

        if hasattr(specs, "__len__"):
            njobs = len(specs)

        jobs = (self._job(s) for s in specs)

        if nproc == 1:
            return self._serial(jobs, njobs=njobs, quiet=quiet)
        else:
            return self._parallel(jobs, nproc, njobs=njobs, quiet=quiet)

    def pandas(self, specs, nproc=None, njobs=None, quiet=False, timing=True):
        r"""Calculate orthant probabilities over problems.

        Returns:
            pandas.DataFrame: one row per problem, failures have NaN probability and an error

        """
        from pandas import DataFrame

        rows = []
        for r in self.map(specs, nproc, njobs, quiet):
            if self.is_failure(r):
                rows.append({"probability": float(r), "error": str(r.error)})
            else:
                row = r.asdict(timing=timing)
                row["config"] = r.config.method.value
                row.pop("path")
                row["error"] = None
                rows.append(row)

        return DataFrame(rows)
