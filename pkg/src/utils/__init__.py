"""
Utility functions and classes.
"""

from .system_check import SystemCheck

__all__ = ["SystemCheck"]
