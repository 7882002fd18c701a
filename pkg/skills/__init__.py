"""
Skills Package
Runnable tools built on the shared library (simulator).
"""
