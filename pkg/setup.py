# Copyright (c) 2026 The qpslab developers
# SPDX-License-Identifier: Apache-2.0

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

# You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND,
# either express or implied.

import os
from setuptools import setup
from setuptools import find_packages

NAME = 'qpslab'
__version__ = '0.1.0'

repository_dir = os.path.dirname(__file__)

# .rst readme needed for pypi
with open(os.path.join(repository_dir, 'README.rst')) as fh:
    long_description = fh.read()

with open(os.path.join(repository_dir, 'requirements.txt')) as fh:
    requirements = fh.readlines()

setup(
    author='The qpslab developers',
    classifiers=(
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python',
        'Topic :: Scientific/Engineering :: Mathematics',
    ),
    description="Verification laboratory for quasi-Poisson and Dirac geometry of matrix groups",
    keywords="Dirac structures quasi-Poisson Grothendieck-Springer verification",
    include_package_data=True,
    install_requires=requirements,
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    license='Apache 2.0',
    long_description=long_description,
    name=NAME,
    packages=find_packages(exclude=('test', 'examples')),
    python_requires='>=3.8, <4',
    version=__version__,
    entry_points={
        'console_scripts': [
            'qpslab=qpslab.qpslab:main',
            'qpslab-cli=qpslab.qpslab:main',
        ]
    }
)
