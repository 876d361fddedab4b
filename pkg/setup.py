from setuptools import setup
from os import path

here = path.abspath(path.dirname(__file__))

with open(path.join(here, 'README.rst')) as f:
    long_description = f.read()

with open(path.join(here, 'lptight/VERSION'), 'rb') as f:
    version = f.read().decode('ascii').strip()

setup(
    name='lptight',
    version=version,
    description='Measuring when LP relaxations of structured prediction models are tight.',
    long_description=long_description,
    license='MIT',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: Implementation :: CPython',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'Topic :: Scientific/Engineering :: Mathematics'
    ],
    keywords='structured prediction lp relaxation ssvm map inference',
    packages=['lptight'],
    package_data={'lptight': ['VERSION']},
    include_package_data=True,
    test_suite='tests',
    python_requires='>=3.8',
    install_requires=[
        'attrs',
        'click',
        'numpy',
        'PyYAML',
        'requests',
        'scikit-learn',
    ],
    extras_require={
        'test': [
            'mock',
            'scipy',
        ]
    },
    entry_points={
        'console_scripts': [
            'lptight=lptight.cli:main',
        ]
    }
)
