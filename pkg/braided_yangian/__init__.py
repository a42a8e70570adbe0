"""
Braided Yangian Verifier - exact verification of braided-Yangian identities:
R-matrices, skew-symmetrizers, R-traces, quantum symmetric polynomials and Gaudin Hamiltonians
"""

__version__ = "1.0.0"
__author__ = "Braided Yangian Verifier Team"
__description__ = "Exact-arithmetic verification library and CLI for braided Yangians and Gaudin-type models"
