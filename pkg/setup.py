"""Installation script."""
from setuptools import setup, find_packages

# To use a consistent encoding
from codecs import open
from os import path

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

# Get the current version from the VERSION file
with open(path.join(here, "src", "qpesampling", "VERSION")) as version_file:
    version = version_file.read().strip()

setup(
    name='qpesampling',
    version=version,
    description='Statevector QPE sampling, Iceberg error detection and Lorentzian spectra.',
    long_description=long_description,
    packages=find_packages("src"),
    package_dir={"": "src"},
    include_package_data=True,
    package_data={"qpesampling": ["VERSION"]},
    install_requires=[
        'decorator>=4.1.2',
        'numpy>=1.20',
        'scipy>=1.7',
        'pandas>=1.3',
    ],
    entry_points={
        'console_scripts': [
            'qpesampling=qpesampling.cli:main',
        ],
    },
    extras_require={
        'doc': [
            "Sphinx>=4.0",
            "sphinx-argparse>=0.3",
            "sphinx-rtd-theme>=1.0",
        ],
        'test': [
            'hypothesis>=6.0',
            'mock>=0.8.0'
        ]
    }
)
