"""Exact lattice arithmetic for the twisted double plane attached to a net of quadrics in P^7."""

__version__ = "0.1.0"
