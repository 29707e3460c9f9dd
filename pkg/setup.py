from setuptools import setup, find_packages

setup(
    name='PerfectCodes',
    version='1.0.0',
    packages=find_packages(exclude=['examples', 'examples.*']),
    python_requires='>=3.10',
    install_requires=[
        'numpy',
        'psutil',
        'sympy',
        'packaging',
        'pytest'
    ],
    entry_points={
        'console_scripts': [
            'perfectcodes=src.app:main',
        ],
    },
)
