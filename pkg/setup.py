#!/usr/bin/env python

from setuptools import find_packages, setup

# Parse version number from fracDec/__init__.py:
with open("fracDec/__init__.py") as f:
    info = {}
    for line in f:
        if line.startswith("version"):
            exec(line, info)
            break

setup_info = dict(
    name="fracDec",
    version=info["version"],
    author="fracDec developers",
    description="fracDec - exact fractional clique decompositions of uniform hypergraphs, with certificates "
    "and a command line.",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    license="MIT",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    # Package info
    packages=find_packages(exclude=["tests"]),
    install_requires=["pydantic[dotenv]==1.9.2", "loguru", "orjson", "pyinstrument", "numpy"],
    entry_points={"console_scripts": ["fracdec=fracDec.shell:main"]},
    # Add _ prefix to the names of temporary build dirs
    options={
        "build": {"build_base": "_build"},
    },
    zip_safe=True,
)

setup(**setup_info)
