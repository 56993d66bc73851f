"""
Gausswell - Spectral Toolkit for the Gaussian-Perturbed Harmonic Oscillator

This package contains the numerical kernels, the model definition and the
two cross-validating spectral solvers (Rayleigh-Ritz and Riccati-Pade),
together with the command-line front end that drives them.
"""

__version__ = "1.0.0"
__author__ = "Gausswell Project"
