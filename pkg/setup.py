from os import path

from setuptools import setup, find_packages

with open(path.join(path.abspath(path.dirname(__file__)), "README.md"), encoding="utf-8") as f:
    readme_description = f.read()


def read_requirements(filename):
    with open(filename, "r", encoding="utf-8") as fp:
        return fp.read().strip().splitlines()


setup(
    name="normcheck",
    packages=find_packages(exclude=["tests", "tests.*"]),
    version="1.0.0",
    license="GNU General Public License v3 (GPLv3)",
    description="Parse, run and explore frame-based norms, and check their deontic logic reading for contradictions",
    keywords=[
        "python",
        "normative-reasoning",
        "deontic-logic",
        "flint",
        "tableau",
        "kripke",
        "state-space",
        "contrary-to-duty",
        "chisholm",
    ],
    install_requires=read_requirements("requirements.txt"),
    extras_require={"test": read_requirements("requirements-test.txt")},
    classifiers=[
        "Development Status :: 4 - Beta",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    long_description=readme_description,
    long_description_content_type="text/markdown",
    include_package_data=True,
    python_requires=">=3.8, <4",
    entry_points={"console_scripts": ["normcheck = normcheck.__main__:main"]},
    package_data={
        "normcheck": ["assets/*.norm", "assets/*.trace", "assets/*.sdl"],
    },
)
