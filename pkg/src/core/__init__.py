"""
Core Orchestration Components

This module contains the engine that drives the spectral solvers and
the result records it produces for the Gausswell front end.

Author: Gausswell Project
Project: Gausswell
"""
