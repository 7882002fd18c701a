"""Allow running as: python -m skills.simulator"""
from skills.simulator.main import main

main()
