"""
PerfectCodes
Construction, verification and existence screening of extended 1-perfect codes in Hamming graphs.
"""

__version__ = '1.0.0'
