import numpy as np
import pytest

from hgorth import ProblemSpec, OrthantCalculator
from hgorth.bench import run_bench

pytest.importorskip("pandas")


def test_calculator_pandas():
    specs = [
        ProblemSpec([0.0, 0.0], np.eye(2)),
        ProblemSpec([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]]),
    ]
    df = OrthantCalculator().pandas(specs, nproc=1, quiet=True)

    assert len(df) == 2
    assert df.loc[0, "probability"] == pytest.approx(0.25, abs=1e-14)
    assert np.isnan(df.loc[1, "probability"])
    assert "not positive definite" in df.loc[1, "error"]


def test_bench_pandas():
    df = run_bench([2, 3], trials=2, seed=1, sum_check_max_dim=2).pandas()

    assert df["dim"].tolist() == [2, 3]
    assert (df["failures"] == 0).all()


@pytest.mark.slow
def test_bench_scaling():
    df = run_bench(range(8, 13), trials=3, seed=0, sum_check_max_dim=8).pandas()
    seconds = df["mean_seconds"].values
    # per-dimension factor averaged over 8 -> 12
    growth = (seconds[-1] / seconds[0]) ** 0.25

    assert (df["failures"] == 0).all()
    assert 2 <= growth <= 6
