"""
ASEP Harness - exact stationary observables of the open-boundary exclusion process
"""
__version__ = "1.0.0"
