"""
Audit logging for pvna sweeps.
"""

import logging

log = logging.getLogger(__name__)


class PointsNopMsg:
    """
    Class for converting a collection of sweep points into a string during logging.
    Returns an empty string message for the points collection.
    """
    def __init__(self, points=()):
        pass

    def __str__(self):
        return ''


class PointsFrequencyMsg:
    """
    Class for converting a collection of sweep points into a string during logging.
    Returns the frequencies of the points.
    Example message: [34.5 GHz, 34.518228 GHz]
    """
    def __init__(self, points=()):
        self.points = points

    def __str__(self):
        return '[%s]' % ', '.join('%.9g GHz' % (f / 1e9) for f in self.points)


class PointsCountMsg(PointsFrequencyMsg):
    """
    Class for converting a collection of sweep points into a string during logging.
    Returns the points count message.
    Example message: count = 3
    """
    def __str__(self):
        return 'count = %d' % len(self.points)
