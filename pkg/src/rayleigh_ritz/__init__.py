"""
Rayleigh-Ritz Variational Solver

Parity-sector matrix assembly, symmetric eigen-solution with monotone
basis-size convergence, secular polynomials, critical couplings and
discriminant-based exceptional-point seeding.

Project: Gausswell
"""
