"""
Bell lattice beables CLI

Command-line runner for the reproducible experiments of the beable SDK:
lattice spectra, pilot-state evolution, stochastic jump ensembles, the
master equation, the continuum guidance limit and the Fock-space checks.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("bell-lattice-beables")
except PackageNotFoundError:
    # Fallback if package is not installed
    __version__ = "0.0.0-dev"
