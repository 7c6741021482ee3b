from hgorth import OrthantCalculator, is_missing

from .problems import random_problem

specs = [random_problem(d, 30 + d, mean_scale=0.5) for d in (1, 2, 3, 4)]


def test_parallel():
    calc = OrthantCalculator()

    for serial, parallel in zip(
        calc.map(specs, nproc=1, quiet=True), calc.map(specs, nproc=2, quiet=True)
    ):
        assert not is_missing(serial)
        assert serial.probability == parallel.probability
        assert serial.steps == parallel.steps


def test_parallel_signs():
    calc = OrthantCalculator()
    jobs = [(specs[2], s) for s in ((1, 1, 1), (-1, 1, -1))]

    results = list(calc.map(jobs, nproc=2, quiet=True))
    assert [r.signs for r in results] == [(1, 1, 1), (-1, 1, -1)]
