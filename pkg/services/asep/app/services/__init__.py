"""
Numerical services of the harness.
"""

