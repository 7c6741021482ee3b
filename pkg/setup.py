import io
import os

from setuptools import setup, find_packages

install_requires = ["six==1.*", "numpy>=1.17", "scipy>=1.0"]


def get_version():
    with open(os.path.join("hgorth", "_version.txt")) as f:
        return f.read().strip()


def get_test_data():
    for p, _, fs in os.walk(os.path.join("hgorth", "tests", "references")):
        p = p.split(os.sep)[2:]

        for f in fs:
            yield os.path.join(*(p + [f]))


README_rst = ""
fndoc = os.path.join(os.path.dirname(__file__), "README.rst")
with io.open(fndoc, mode="r", encoding="utf-8") as fd:
    README_rst = fd.read()

setup(
    name="hgorth",
    version=get_version(),
    description="multivariate normal orthant probabilities by the holonomic gradient method",
    long_description=README_rst,
    license="BSD-3-Clause",
    platforms=["any"],
    keywords="holonomic-gradient-method orthant-probability multivariate-normal",
    packages=find_packages(),
    package_data={"hgorth": ["_version.txt"], "hgorth.tests": list(get_test_data())},
    python_requires=">=3.6",
    install_requires=install_requires,
    tests_require=["pytest>=4", "PyYaml>=4.2b1"],
    extras_require={"full": ["pandas", "tqdm"]},
    entry_points={"console_scripts": ["hgorth = hgorth.__main__:main"]},
)
