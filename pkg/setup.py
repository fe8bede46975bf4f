from setuptools import setup, find_packages
from os import path


here = path.abspath(path.dirname(__file__))
about = {}
with open(path.join(here, 'pvna', 'version.py'), mode='r', encoding='utf-8') as f:
    exec(f.read(), about)

with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()


if __name__ == '__main__':
    setup(
        name='pvna',
        description='Simulator of a photonic vector network analyzer with undersampling receivers',
        keywords='VNA photonic undersampling S-parameters SOLT calibration microwave simulation',
        version=about['__version__'],
        license="Apache 2.0 license",
        long_description=long_description,
        long_description_content_type='text/markdown',
        python_requires='>=3.6',
        install_requires=[
            'jsonpickle~=1.0',
            'numpy>=1.17',
            'scipy>=1.4',
            'pint>=0.10',
        ],
        extras_require={
            'dev': [
                'pytest~=4.6',
                'pytest-cov~=2.6',
                'pylint~=1.0',
            ],
        },
        packages=find_packages(exclude=('tests', 'tests.*')),
        entry_points={
            'console_scripts': [
                'pvna = pvna.cli:main',
            ],
        },
        classifiers=[
            'Intended Audience :: Science/Research',
            'License :: OSI Approved :: Apache Software License',
            'Operating System :: OS Independent',
            'Topic :: Scientific/Engineering',
            'Topic :: Scientific/Engineering :: Physics',
            'Natural Language :: English',
            'Programming Language :: Python',
            'Programming Language :: Python :: 3.6',
            'Programming Language :: Python :: 3.7',
            'Programming Language :: Python :: 3.8',
            'Programming Language :: Python :: 3.9',
            'Programming Language :: Python :: Implementation :: CPython',
        ],
    )
