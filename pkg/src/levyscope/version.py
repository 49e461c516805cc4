"""src/levyscope/version.py

Version information for Levyscope.
"""

__version__ = "0.1.0"
