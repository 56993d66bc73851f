"""
Numerical Kernels

Precision contract, error hierarchy, polynomials and discriminants,
determinants, truncated Taylor jets and Newton root finders shared by the
solver packages.

Project: Gausswell
"""
