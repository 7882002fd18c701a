"""
Utils Package
Progress display for the simulator pipeline.
"""
