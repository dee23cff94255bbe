"""Toolkit for cohomogeneity-one metrics on S^3 x S^3 spaces and Hitchin orbifolds."""

__version__ = "0.1.0"
