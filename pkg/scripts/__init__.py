"""
Affine Fermions Toolkit Scripts Package

This package contains utility scripts:
- run_tests.py: Test runner
"""

__version__ = '1.0.0'
