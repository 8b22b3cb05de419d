#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from setuptools import find_packages, setup

setup(
    name="kway_negativity",
    version="0.1.0",
    description="Négativités globales, K-way et partielles d'états quantiques multipartites",
    packages=find_packages(include=["src", "src.*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "PyYAML>=6.0",
    ],
    entry_points={
        "console_scripts": [
            "kway-negativity=src.main:main",
        ],
    },
)
