"""Krylov bases, characteristic polynomials and Kalman controllability forms over GF(p)."""

from .charpoly import (
    HessenbergPolycyclic,
    Polynomial,
    charpoly_kg,
    charpoly_of_hessenberg,
    oracle_charpoly,
    poly_mul,
    recover_hessenberg,
)
from .densemat import DenseMatrix, Permutation, apply_permutation, block, matmul, strassen_mul, submatrix
from .errors import *  # noqa: F401,F403
from .factor import LupFactorization, col_reduced_form, dependency_coefficients, lup, solve_triangular
from .ffield import DEFAULT_PRIME, PrimeField
from .kalman import (
    KalmanForm,
    VerificationReport,
    complete_basis,
    kalman_kg,
    kalman_luk,
    naive_kalman,
    verify_kalman_form,
)
from .krylov import CompressedKrylov, compressed_krylov_kg, naive_compressed_krylov

__version__ = "0.1.0"
