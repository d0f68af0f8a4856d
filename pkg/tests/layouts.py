"""Golden block layouts for composite sections.

Each table lists, position by position, which input blocks multiply into
that entry of the composite payload.  Feeding every input block a
distinct prime makes every expected entry a unique product, so a single
misplaced block changes the factorization and fails the comparison.

Entries are tuples of (field, section_index) factors; section indices
follow the diagram numbering (1 top-left, 2 top-right, 3 bottom-left,
4 bottom-right).
"""

import numpy as np

from fellbundle.dfell import LAYOUT, SquareSection

FIELDS = tuple(name for row in LAYOUT for name in row)

PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311,
)


def prime_section(square, index):
    """A line-bundle square section whose 16 blocks are distinct primes."""
    vals = {name: complex(PRIMES[16 * (index - 1) + k]) for k, name in enumerate(FIELDS)}
    blocks = {name: np.array([[vals[name]]], dtype=np.complex128) for name in FIELDS}
    return SquareSection(square, (1, 1, 1, 1), **blocks), vals


def expected_matrix(table, values):
    """Evaluate a factor table against per-section value dicts."""
    out = np.zeros((len(table), len(table[0])), dtype=np.complex128)
    for i, row in enumerate(table):
        for j, factors in enumerate(row):
            prod = complex(1.0)
            for field, idx in factors:
                prod *= values[idx][field]
            out[i, j] = prod
    return out


def _e(*factors):
    return tuple(factors)


# a_{alpha1} a_{alpha2}: horizontal composition of squares 1 and 2,
# including the corrected (1,3) entry (r1 r2)* in place of the printed r1*.
HCOMPOSE_12 = (
    (_e(("a", 1)), _e(("m_star", 1)), _e(("d_star", 1), ("d_star", 2)),
     _e(("alpha_star", 1), ("alpha_star", 2))),
    (_e(("m", 1)), _e(("b", 1)), _e(("alphap_star", 1), ("alphap_star", 2)),
     _e(("r_star", 1), ("r_star", 2))),
    (_e(("d", 1), ("d", 2)), _e(("alphap", 1), ("alphap", 2)), _e(("a2", 2)),
     _e(("n_star", 2))),
    (_e(("alpha", 1), ("alpha", 2)), _e(("r", 1), ("r", 2)), _e(("n", 2)),
     _e(("b2", 2))),
)

# a_{alpha3} a_{alpha4}: the lower horizontal composition (squares 3, 4),
# same shape with the corrected (1,3) entry (r3 r4)*.
HCOMPOSE_34 = (
    (_e(("a", 3)), _e(("m_star", 3)), _e(("d_star", 3), ("d_star", 4)),
     _e(("alpha_star", 3), ("alpha_star", 4))),
    (_e(("m", 3)), _e(("b", 3)), _e(("alphap_star", 3), ("alphap_star", 4)),
     _e(("r_star", 3), ("r_star", 4))),
    (_e(("d", 3), ("d", 4)), _e(("alphap", 3), ("alphap", 4)), _e(("a2", 4)),
     _e(("n_star", 4))),
    (_e(("alpha", 3), ("alpha", 4)), _e(("r", 3), ("r", 4)), _e(("n", 4)),
     _e(("b2", 4))),
)

# a_{alpha1} a_{alpha3}: vertical composition (square 3 below square 1).
VCOMPOSE_13 = (
    (_e(("a", 1)), _e(("m_star", 1), ("m_star", 3)), _e(("d_star", 1)),
     _e(("alpha_star", 1), ("alpha_star", 3))),
    (_e(("m", 1), ("m", 3)), _e(("b", 3)), _e(("alphap_star", 1), ("alphap_star", 3)),
     _e(("r_star", 3))),
    (_e(("d", 1)), _e(("alphap", 1), ("alphap", 3)), _e(("a2", 1)),
     _e(("n_star", 1), ("n_star", 3))),
    (_e(("alpha", 1), ("alpha", 3)), _e(("r", 3)), _e(("n", 1), ("n", 3)),
     _e(("b2", 3))),
)

# the full 2x2 block; both composition orders must produce exactly this.
COMPOSE4 = (
    (_e(("a", 1)), _e(("m_star", 1), ("m_star", 3)), _e(("d_star", 1), ("d_star", 2)),
     _e(("alpha_star", 1), ("alpha_star", 2), ("alpha_star", 3), ("alpha_star", 4))),
    (_e(("m", 1), ("m", 3)), _e(("b", 3)),
     _e(("alphap_star", 1), ("alphap_star", 2), ("alphap_star", 3), ("alphap_star", 4)),
     _e(("r_star", 3), ("r_star", 4))),
    (_e(("d", 1), ("d", 2)),
     _e(("alphap", 1), ("alphap", 2), ("alphap", 3), ("alphap", 4)), _e(("a2", 2)),
     _e(("n_star", 2), ("n_star", 4))),
    (_e(("alpha", 1), ("alpha", 2), ("alpha", 3), ("alpha", 4)),
     _e(("r", 3), ("r", 4)), _e(("n", 2), ("n", 4)), _e(("b2", 4))),
)

# horizontal union over vertices (A, B, A', B', A'', B'').
HUNION_12 = (
    (_e(("a", 1)), _e(("m_star", 1)), _e(("d_star", 1)), _e(("alpha_star", 1)),
     _e(("d_star", 1), ("d_star", 2)), _e(("alpha_star", 1), ("alpha_star", 2))),
    (_e(("m", 1)), _e(("b", 1)), _e(("alphap_star", 1)), _e(("r_star", 1)),
     _e(("alphap_star", 1), ("alphap_star", 2)), _e(("r_star", 1), ("r_star", 2))),
    (_e(("d", 1)), _e(("alphap", 1)), _e(("a2", 1)), _e(("n_star", 1)),
     _e(("d_star", 2)), _e(("alpha_star", 2))),
    (_e(("alpha", 1)), _e(("r", 1)), _e(("n", 1)), _e(("b2", 1)),
     _e(("alphap_star", 2)), _e(("r_star", 2))),
    (_e(("d", 1), ("d", 2)), _e(("alphap", 1), ("alphap", 2)), _e(("d", 2)),
     _e(("alphap", 2)), _e(("a2", 2)), _e(("n_star", 2))),
    (_e(("alpha", 1), ("alpha", 2)), _e(("r", 1), ("r", 2)), _e(("alpha", 2)),
     _e(("r", 2)), _e(("n", 2)), _e(("b2", 2))),
)

# vertical union over vertices (A, B, C, A', B', C'); the shared edge row
# and column carry the lower square's top-edge data (d3, d3*).
VUNION_13 = (
    (_e(("a", 1)), _e(("m_star", 1)), _e(("m_star", 1), ("m_star", 3)),
     _e(("d_star", 1)), _e(("alpha_star", 1)), _e(("alpha_star", 1), ("alpha_star", 3))),
    (_e(("m", 1)), _e(("a", 3)), _e(("m_star", 3)), _e(("alphap_star", 1)),
     _e(("d_star", 3)), _e(("alpha_star", 3))),
    (_e(("m", 1), ("m", 3)), _e(("m", 3)), _e(("b", 3)),
     _e(("alphap_star", 1), ("alphap_star", 3)), _e(("alphap_star", 3)), _e(("r_star", 3))),
    (_e(("d", 1)), _e(("alphap", 1)), _e(("alphap", 1), ("alphap", 3)), _e(("a2", 1)),
     _e(("n_star", 1)), _e(("n_star", 1), ("n_star", 3))),
    (_e(("alpha", 1)), _e(("d", 3)), _e(("alphap", 3)), _e(("n", 1)), _e(("a2", 3)),
     _e(("n_star", 3))),
    (_e(("alpha", 1), ("alpha", 3)), _e(("alpha", 3)), _e(("r", 3)),
     _e(("n", 1), ("n", 3)), _e(("n", 3)), _e(("b2", 3))),
)
