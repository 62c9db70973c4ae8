from setuptools import setup, find_packages

setup(
    name="ftbfs",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    include_package_data=True,
    package_data={
        "ftbfs": ["sdk/*.yaml"],
    },
    install_requires=[
        "click>=8.2",
        "toml",
        "rich",
        "pyyaml",
        "networkx",
    ],
    extras_require={
        "dev": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "ftbfs=ftbfs.cli:cli",
        ],
    },
)
