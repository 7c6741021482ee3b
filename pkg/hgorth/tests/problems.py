import os

import yaml
import numpy as np

from hgorth import ProblemSpec
from hgorth.bench import random_correlation

try:
    from yaml import CLoader as Loader
except ImportError:
    from yaml import Loader

data_dir = os.path.join(os.path.dirname(__file__), "references")


def load_reference(name):
    with open(os.path.join(data_dir, name)) as f:
        return yaml.load(f, Loader=Loader)


def random_problem(d, seed, mean_scale=0.0):
    rng = np.random.default_rng(seed)
    cov = random_correlation(d, rng)
    return ProblemSpec(mean_scale * rng.standard_normal(d), cov)


def equicorrelated(d, rho, mean=None):
    cov = np.full((d, d), float(rho))
    np.fill_diagonal(cov, 1.0)
    return ProblemSpec(np.zeros(d) if mean is None else mean, cov)
