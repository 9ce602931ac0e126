"""Expected values derived once from tests/oracles.py and frozen here.

test_oracles.py recomputes every entry, so a drift in the oracle shows up
as a failure there rather than silently changing what the package is held to.
"""

from fractions import Fraction

# ∫ over the standard simplex of t^a dt_1..dt_n (iterated symbolic integration)
SIMPLEX_INTEGRALS = {
    (0,): Fraction(1),
    (1,): Fraction(1, 2),
    (4,): Fraction(1, 5),
    (0, 0): Fraction(1, 2),
    (1, 0): Fraction(1, 6),
    (2, 1): Fraction(1, 60),
    (3, 1): Fraction(1, 120),
    (0, 0, 0): Fraction(1, 6),
    (1, 1, 1): Fraction(1, 720),
    (2, 0, 2): Fraction(1, 1260),
}

# simplicial Betti numbers via sympy ranks of boundary matrices
COMPLEX_TOPS = {
    "simplex1": [[0, 1]],
    "simplex2": [[0, 1, 2]],
    "simplex3": [[0, 1, 2, 3]],
    "boundary2": [[0, 1], [1, 2], [0, 2]],
    "boundary3": [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
    "path2": [[0, 1], [1, 2]],
    "mixed": [[0, 1, 2], [2, 3], [3, 4], [2, 4], [5]],
}
SIMPLICIAL_BETTI = {
    "simplex1": (1, 0),
    "simplex2": (1, 0, 0),
    "simplex3": (1, 0, 0, 0),
    "boundary2": (1, 1),
    "boundary3": (1, 0, 1),
    "path2": (1, 0),
    "mixed": (2, 1, 0),
}

# CE Betti numbers from the alternating-map formula
ALGEBRAS = {
    "sl2": (3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}),
    "h3": (3, {(0, 1): {2: 1}}),
    "abelian2": (2, {}),
    "aff1": (2, {(0, 1): {1: 1}}),
}
CE_BETTI = {
    "sl2": (1, 0, 0, 1),
    "h3": (1, 2, 2, 1),
    "abelian2": (1, 2, 1),
    "aff1": (1, 1, 0),
}

# [[x0,x1],x2] + cyclic for [x0,x1]=x2, [x0,x2]=x1, [x1,x2]=x1
NON_LIE = (3, {(0, 1): {2: 1}, (0, 2): {1: 1}, (1, 2): {1: 1}})
NON_LIE_JACOBI = (0, 0, -1)

# Betti convolutions for the tensor complex
KUNNETH = {
    ("boundary2", "sl2"): (1, 1, 0, 1, 1),
    ("simplex2", "h3"): (1, 2, 2, 1, 0, 0),
    ("simplex1", "h3"): (1, 2, 2, 1, 0),
    ("boundary3", "aff1"): (1, 1, 1, 1, 0),
}
