from setuptools import setup, find_packages

version = {}
exec(open('nlca/_version.py').read(), version)

# read the contents of your README file
from pathlib import Path
this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text()

setup(
    name='nlca',
    version=version['__version__'],
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.22',
        'scipy>=1.8',
        'PyWavelets>=1.3',
        'nibabel>=4.0',
        'pandas',
        'loguru>=0.7.0',
        'pyyaml>=6.0',
        'tqdm>=4.65.0',
        'prettytable>=2.2.0',
        'python-dotenv>=1.0.0',
    ],
    extras_require={
        'test': ['pytest>=7.0.0'],
    },
    entry_points={
        'console_scripts': [
            'nlca=nlca.__main__:main'
        ]
    },
    description='Non-local conventional approach (NLCA) denoising of Rician-corrupted 3D magnitude MRI.',
    license='MIT',
    keywords='MRI, denoising, Rician noise, non-local, noise estimation, SSIM',
    long_description=long_description,
    long_description_content_type='text/markdown',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Intended Audience :: Healthcare Industry',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering :: Medical Science Apps.',
        'Topic :: Scientific/Engineering :: Image Processing',
    ]
)
