"""Exact Nekrasov partition functions on the plane and checks of their wall-crossing identities."""

__version__ = "0.1.0"
