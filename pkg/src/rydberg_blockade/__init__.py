"""Photon transport through two Rydberg-coupled atoms in a waveguide."""

__version__ = "0.1.0"
