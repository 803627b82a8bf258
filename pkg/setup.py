from setuptools import setup, find_packages
import os

with open(os.path.join('README.md'), 'r') as f:
    long_description = f.read()

with open(os.path.join('pyqsvtool', 'requirements.txt')) as f:
    requirements = f.readlines()

setup(
    name='pyqsvtool',
    version='1.0.0',
    license='MIT',
    long_description=long_description,
    long_description_content_type='text/markdown',
    description='Quantum state verification with classical shadows and stabilizer measurements',
    platforms='any',
    packages=find_packages(exclude=['pyqsvtool.tests']),
    python_requires='>=3.10',
    entry_points={
        "console_scripts": [
            "pyqsvtool=pyqsvtool:main",
        ],
    },
    install_requires=requirements,
    classifiers=[
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering :: Physics',
        'Topic :: Utilities',
    ]
)
