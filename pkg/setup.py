"""Setup configuration for backward compatibility."""

from setuptools import find_packages, setup

setup(
    name="virtquad",
    packages=find_packages(include=["virtquad*"]),
    python_requires=">=3.11",
)
