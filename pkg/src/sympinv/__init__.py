"""Invariants and orbits of linear symplectic forms under Sp(2n) congruence."""

from .matrix import (
    InvariantVector,
    SkewMatrix,
    invariants,
    pfaffian,
    pfaffian_oracle,
    s_k_direct,
    sigma_k,
    standard_j,
    sum_function,
)
from .orbit4 import OrbitLabel, classify, same_orbit, witness
from .scalar import DEFAULT_EPS, Mode
from .symplectic import (
    SymplecticBasis,
    SymplecticMatrix,
    act,
    basis_values,
    equivalence_from_bases,
    is_symplectic,
    random_symplectic,
    symplectic_gram_schmidt,
)

__version__ = "0.1.0"
