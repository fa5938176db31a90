from os.path import dirname, join
from typing import Tuple

VERSION_FILE = join(dirname(__file__), "resources", "VERSION")


def version() -> str:
    """
    Package version, read from the bundled VERSION file

    Returns
    -------
    version : str
    """
    with open(VERSION_FILE) as f:
        return f.read().strip()


def version_info() -> Tuple[int, ...]:
    """
    Package version as a tuple of integers, as stamped into audit logs

    Returns
    -------
    version_info : tuple of int
    """
    return tuple(int(part) for part in version().split("."))


__version__ = version()
