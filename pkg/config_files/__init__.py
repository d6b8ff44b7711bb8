"""
Affine Fermions Toolkit Configuration Files Package

This package contains configuration files:
- config.env.example: Environment variables template (copy to ./config.env)
"""

__version__ = '1.0.0'
