"""
Model Definition

Potential, H_0-basis matrix elements, Taylor coefficients of the Schrodinger
form, perturbation polynomials and the Hellmann-Feynman check.

Project: Gausswell
"""
