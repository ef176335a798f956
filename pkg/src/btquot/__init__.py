"""Quotients of the Bruhat-Tits tree for GL2 over F_q((1/T)) by unit groups
of maximal orders in quaternion algebras split at infinity."""

__version__ = "0.1.0"
