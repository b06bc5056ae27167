# -*- coding: utf-8 -*-
import os
import setuptools
import sys
from typing import List

from gausslike import VERSION


CURDIR = os.path.dirname(os.path.abspath(__file__))


def get_readme() -> str:
    readme_filename = os.path.join(CURDIR, 'README.md')
    with open(readme_filename, 'r') as f:
        return f.read()


def get_requirements() -> List[str]:
    def read_requirements_file(filename: str) -> List[str]:
        with open(os.path.join(CURDIR, filename), 'r') as f:
            raw: str = f.read().replace(' ', '')
        return [line for line in raw.split('\n') if line]

    version_error_message: str = \
        'Python version is {}. '.format(sys.version) + \
        'gausslike needs Python 3.6 or later.'
    assert sys.version_info[:2] >= (3, 6), version_error_message

    requirements: List[str] = read_requirements_file(
        'common_requirements.txt')
    # dataclasses joined the standard library in 3.7
    if sys.version_info[:2] == (3, 6):
        requirements += read_requirements_file('py36_requirements.txt')
    return requirements


if __name__ == '__main__':
    setuptools.setup(
        name='gausslike',
        packages=setuptools.find_packages(exclude=['tests']),
        version=str(VERSION),
        python_requires='>=3.6',
        install_requires=get_requirements(),
        setup_requires=["pytest-runner"],
        tests_require=["pytest", "pytest-cov", "mpmath"],
        entry_points={
            'console_scripts': ['gausslike=gausslike.main:run']},
        include_package_data=True,
        long_description=get_readme(),
        long_description_content_type='text/markdown',
        license="GNUv3",
        classifiers=[
            'Intended Audience :: Science/Research',
            'Development Status :: 3 - Alpha',
            'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
            'Topic :: Scientific/Engineering :: Mathematics',
            'Programming Language :: Python :: 3.6',
            'Programming Language :: Python :: 3.7'])
