import pvna
from pvna import __version__


def test_version():
    assert '0.3.0' == __version__


def test_version_info():
    assert (0, 3, 0) == pvna.version_info()
