# Copyright (C) 2024 twyleg
from pathlib import Path
from setuptools import find_packages, setup

from twisted_sums import __version__


def read(relative_filepath):
    return open(Path(__file__).parent / relative_filepath).read()


def read_long_description() -> str:
    return read("README.md")


# fmt: off
setup(
    name="twisted_sums",
    version=__version__,
    author="Torsten Wylegala",
    author_email="mail@twyleg.de",
    description="Exponential sums twisted by arithmetic functions, their bound envelopes, "
                "the explicit formula over zeta zeros and partitions into squarefree parts.",
    license="GPL 3.0",
    keywords="exponential sums circle method dirichlet convolution zeta zeros partitions saddle point",
    url="https://github.com/twyleg/twisted_sums",
    packages=find_packages(exclude=["tests"]),
    long_description=read_long_description(),
    long_description_content_type="text/markdown",
    include_package_data=True,
    package_data={"twisted_sums": ["resources/*.yaml", "resources/*.json", "resources/*.txt"]},
    python_requires=">=3.10",
    install_requires=[
        "pyyaml~=6.0.2",
        "types-PyYAML~=6.0.12.20240808",
        "jsonschema~=4.20.0",
        "types-jsonschema~=4.23.0.20240813",
        "prompt-toolkit~=3.0.48",
        "numpy>=1.26,<3",
        "mpmath~=1.3.0",
    ],
    entry_points={
        "console_scripts": [
            "twisted-sums = twisted_sums.cli:main",
        ],
    },
)
# fmt: on
