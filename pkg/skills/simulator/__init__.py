"""
Simulator Skill
Monte Carlo experiments for the one-bit Rao detector, with CSV and SVG output.
"""
