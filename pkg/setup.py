#!/usr/bin/env python
"""Install bpcfl; ``python setup.py test [--slow]`` runs the test suite."""
import sys

from setuptools import Command, setup

from bpcfl._version import __version__

PACKAGES = [
    'bpcfl',
    'bpcfl.bpc',
    'bpcfl.datagen',
    'bpcfl.evaluation',
    'bpcfl.federation',
    'bpcfl.nn',
    'bpcfl.posterior',
]

REQUIREMENTS = {
    # pip install .
    'install': [
        'numpy>=1.17',  # numpy.random.default_rng
        'pandas',
        'psutil',
        'pyyaml',
        'scipy',
        'yamale>=2.0',  # strict schema validation
    ],
    # python setup.py test
    'test': [
        'mock',
        'pycodestyle',
        'pytest>=3.9',
        'pytest-cov',
        'pytest-html',
        'pytest-metadata>=1.5.1',
    ],
    # pip install -e .[develop]
    'develop': [
        'isort',
        'pydocstyle',
        'pylint',
        'yamllint',
        'yapf',
    ],
}


class RunTests(Command):
    """Run the tests and the doctests with coverage and HTML reports."""

    user_options = [('slow', None, 'Also run the full sized experiments.')]

    def initialize_options(self):
        """Tests of full sized experiments are skipped by default."""
        self.slow = False

    def finalize_options(self):
        """Do nothing."""

    def run(self):
        """Run pytest and exit with its status."""
        for requirements in (self.distribution.install_requires,
                             self.distribution.tests_require):
            if requirements:
                self.distribution.fetch_build_eggs(requirements)

        import pytest

        report_dir = 'test-reports/python{}'.format(sys.version_info[0])
        args = [
            'tests',
            'bpcfl',
            '--doctest-modules',
            '--cov=bpcfl',
            '--cov-report=term',
            '--cov-report=html:{}/coverage_html'.format(report_dir),
            '--cov-report=xml:{}/coverage.xml'.format(report_dir),
            '--junit-xml={}/report.xml'.format(report_dir),
            '--html={}/report.html'.format(report_dir),
        ]
        if self.slow:
            args.append('--slow')
        sys.exit(pytest.main(args))


with open('README.md') as readme:
    setup(
        name='bpcfl',
        version=__version__,
        description='One-shot Bayesian federated learning with '
        'pseudocoresets',
        long_description=readme.read(),
        long_description_content_type='text/markdown',
        license='Apache License, Version 2.0',
        classifiers=[
            'Environment :: Console',
            'License :: OSI Approved :: Apache Software License',
            'Programming Language :: Python',
            'Programming Language :: Python :: 3',
        ],
        python_requires='>=3.6',
        packages=PACKAGES,
        package_data={
            'bpcfl': ['*.yml', 'experiments/*.yml'],
        },
        install_requires=REQUIREMENTS['install'],
        tests_require=REQUIREMENTS['test'],
        extras_require={
            'develop': REQUIREMENTS['develop'] + REQUIREMENTS['test'],
            'test': REQUIREMENTS['test'],
        },
        entry_points={
            'console_scripts': [
                'bpcfl = bpcfl._main:run',
            ],
        },
        cmdclass={
            'test': RunTests,
        },
        zip_safe=False,
    )
