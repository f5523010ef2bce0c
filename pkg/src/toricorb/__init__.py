"""Exact computations for the cohomology of toric orbifolds.

Modules:
    linalg      exact integer/rational matrices, SNF, HNF, lattices
    polytope    simple polytopes and vertex-deleted subcomplexes
    charpair    characteristic pairs and local groups
    retraction  retraction sequences and r-vectors
    evenness    the relatively-prime certificate
    fan         simplicial fans and integrality matrices
    gradedring  integral Stanley-Reisner quotients and ring presentations
    towers      weighted projective towers and orbifold Hirzebruch surfaces
    cli         command-line front end
"""

__version__ = "0.1.0"
