"""
Shared Package
Numerical library behind the one-bit MIMO radar Rao detector.
"""
