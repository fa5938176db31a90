#!/usr/bin/env python
from os.path import join

from setuptools import setup, find_packages

MODULE_NAME = 'dpfacility'         # package name used to install via pip (as shown in `pip freeze` or `conda list`)
MODULE_NAME_IMPORT = 'dpfacility'  # this is how this module is imported in Python (name of the folder inside `src`)
REPO_NAME = 'dpfacility'           # repository name


def requirements_from_pip(filename='requirements.txt'):
    with open(filename, 'r') as pip:
        return [l.strip() for l in pip if not l.startswith('#') and l.strip()]

core_deps = requirements_from_pip()
test_deps = requirements_from_pip("requirements_test.txt")

tools_deps = requirements_from_pip("requirements_tools.txt")

all_deps = tools_deps
devel_deps = test_deps + all_deps

setup(name=MODULE_NAME,
      description="Facility location mechanisms for doubly peaked preferences",
      url='https://github.com/dpfacility/{:s}'.format(REPO_NAME),
      python_requires='>=3.8',
      author="dpfacility developers",
      package_dir={'': 'src'},
      packages=find_packages('src'),
      version=(open(join('src', MODULE_NAME, 'resources', 'VERSION'))
               .read().strip()),
      install_requires=core_deps,
      extras_require={"test_deps": test_deps,
                      "tools": tools_deps,
                      "devel": devel_deps,
                      "all": all_deps},
      entry_points={"console_scripts": ["dpfacility = dpfacility.cli:main"]},
      include_package_data=True,
      package_data={MODULE_NAME: ['resources/VERSION']},
      zip_safe=False,
      classifiers=['Programming Language :: Python :: 3.8'])
