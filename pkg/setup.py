# -*- coding: utf-8 -*-
from setuptools import setup  # type: ignore

with open('README.rst', 'rt') as fh:
    long_description = fh.read()

setup(
    name='simplehiggs',
    version='0.1.0',
    description='Apparent singularities, Hecke modifications and chart coordinates for rank 2 parabolic Higgs '
                'bundles and connections on the projective line',
    long_description=long_description,
    long_description_content_type='text/x-rst',
    packages=['simplehiggs'],
    package_data={'simplehiggs': ['py.typed', 'golden/*.json']},
    package_dir={'': 'src'},
    include_package_data=True,
    zip_safe=False,
    license='BSD-3-Clause',
    platforms='any',
    python_requires='>=3.8',

    install_requires=[
        'numpy',
        'sympy>=1.9',
    ],

    entry_points={
        'console_scripts': [
            'simplehiggs = simplehiggs.cli:main',
        ],
    },

    extras_require={
        'tests': [
            'mypy',
            'pylint',
            'pytest',
            'pytest-cov',
            'pytest-pylint',
        ],
        'docs': [
            'Sphinx>=2.0',
            'sphinx-autodoc-typehints',
            'sphinx-rtd-theme',
            'recommonmark>=0.5.0',
        ],
    },

    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3 :: Only',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
