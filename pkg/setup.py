"""
Setup script for the qktdiscord package.
"""

from setuptools import setup, find_packages

# Read the long description from README.md
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="qktdiscord",
    version="0.1.0",
    description="Quantum discord of a qubit pair dephased by a quantum kicked top",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "pydantic>=2.0",
        "PyYAML>=5.4",
        "colorama>=0.4.4",
    ],
    extras_require={
        "test": ["pytest>=6.2.0", "pytest-cov>=2.10.1", "mock>=4.0.0"],
    },
    entry_points={
        "console_scripts": [
            "qktdiscord=qktdiscord.cli:main",
        ],
    },
)
