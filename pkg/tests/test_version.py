import dpfacility
from dpfacility.version import version, version_info


def test_version():
    assert dpfacility.__version__ == version()
    assert version_info() == tuple(int(part) for part in version().split("."))
    assert len(version_info()) == 3
