"""
Version for pvna package
"""

__version__ = '0.3.0'


def version_info():
    """
    Get version of pvna package as tuple
    """
    return tuple(map(int, __version__.split('.')))
