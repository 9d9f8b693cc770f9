"""
slicexp Package

Numerical toolkit for quaternionic slice-regular functions: the *-product,
intrinsic decompositions, the *-exponential, square roots of slice-preserving
polynomials and the exponential sum rule, with a verification CLI.
"""

__version__ = "1.0.0"
__author__ = "Slicexp Team"
__description__ = "Slice-regular *-exponential toolkit"
