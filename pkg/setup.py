from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()


setup(
    name='uav_caching',
    version='0.1',
    description='Federated Top-k bandit caching simulator for two-tier '
                'UAV content dissemination',
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=['tests']),
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.10',
    install_requires=[
        'flake8==7.0.0',
        'pytest==8.0.0',
        'python-dotenv==1.0.0',
        'tqdm==4.66.2',
        'coverage==7.4.2',
        'pandas==2.2.0',
        'numpy==1.26.4',
        'scipy==1.12.0',
        'line_profiler==4.1.2',
    ],
)
