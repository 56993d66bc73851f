"""
Command Line Interface Components

This module contains the command implementations, dataset writers and
terminal display for the Gausswell front end.

Author: Gausswell Project
Project: Gausswell
"""
