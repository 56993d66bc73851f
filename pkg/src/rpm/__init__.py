"""
Riccati-Pade Engine

Taylor recursion for the logarithmic derivative of the wavefunction,
Hankel determinants, and high-precision roots in E, in λ and in complex
(E, λ), each with a Hankel-dimension ladder.

Project: Gausswell
"""
