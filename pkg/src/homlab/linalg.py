"""Exact linear algebra mod p and graded-piece bookkeeping.

Graded pieces of free modules over a quotient ring are spanned by pairs
(position, standard monomial); presented modules quotient these by the span
of all monomial multiples of their relation columns.  Everything here is a
dimension or rank count; the Groebner layer owns exact zero-certificates.
"""

from __future__ import annotations

import numpy as np

from .groebner import reduce_elem_mod_ideal
from .ring import mono_mul


def rank_mod(rows, p):
    """Rank of a matrix (list of rows or ndarray) over F_p."""
    A = np.array(rows, dtype=np.int64)
    if A.size == 0:
        return 0
    A = A % p
    nrows, ncols = A.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        below = A[r + 1:, c].nonzero()[0]
        if below.size:
            idx = below + r + 1
            A[idx] = (A[idx] - np.outer(A[idx, c], A[r])) % p
        r += 1
    return r


def rref_mod(rows, p):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    A = np.array(rows, dtype=np.int64)
    if A.size == 0:
        return A.reshape(0, 0 if A.ndim < 2 else A.shape[1]), []
    A = A % p
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        others = [i for i in range(nrows) if i != r and A[i, c]]
        if others:
            idx = np.array(others)
            A[idx] = (A[idx] - np.outer(A[idx, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace_mod(rows, ncols, p):
    """Basis of the right nullspace of the matrix, as vectors of length ncols."""
    R, pivots = rref_mod(rows, p)
    if R.size == 0 and not pivots:
        return [np.eye(ncols, dtype=np.int64)[i] for i in range(ncols)]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r, f]) % p
        basis.append(v)
    return basis


def solve_mod(columns, b, p):
    """Solve A x = b over F_p, with A given by columns; None if insolvable."""
    ncols = len(columns)
    if ncols == 0:
        return [] if not any(int(v) % p for v in b) else None
    A = np.array(columns, dtype=np.int64).T % p
    bb = np.array(b, dtype=np.int64).reshape(-1, 1) % p
    aug = np.hstack([A, bb])
    R, pivots = rref_mod(aug, p)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, c in enumerate(pivots):
        x[c] = int(R[r, ncols])
    return x


# ---------------------------------------------------------------------------
# graded pieces


def free_basis(ring, twists, d):
    """Basis of the degree-d piece of the free module over the quotient ring."""
    out = []
    for pos, t in enumerate(twists):
        for m in ring.standard_monomials(d - t):
            out.append((pos, m))
    return out


def elem_to_vec(el, index, length, p):
    """Coordinate vector of an element already reduced modulo the ideal."""
    v = np.zeros(length, dtype=np.int64)
    for t, c in el.items():
        j = index.get(t)
        if j is None:
            raise KeyError(f"term {t} outside the graded piece basis")
        v[j] = c % p
    return v


def relation_rows(ring, twists, rels, d, rel_degs=None):
    """Row vectors spanning the degree-d piece of the relation submodule.

    One row per (relation, standard monomial of complementary degree);
    products are reduced modulo the quotient ideal first.
    """
    from .groebner import edeg, emul_term

    basis = free_basis(ring, twists, d)
    index = {t: j for j, t in enumerate(basis)}
    rows = []
    if rel_degs is None:
        rel_degs = [edeg(r, twists, ring.weights) for r in rels]
    for r, rd in zip(rels, rel_degs):
        if rd is None:
            continue
        for m in ring.standard_monomials(d - rd):
            prod = emul_term(r, m, 1, ring.p)
            prod = reduce_elem_mod_ideal(prod, ring)
            rows.append(elem_to_vec(prod, index, len(basis), ring.p))
    return basis, index, rows


def module_dim(ring, twists, rels, d):
    """k-dimension of the degree-d piece of coker(rels) over the quotient."""
    basis, _, rows = relation_rows(ring, twists, rels, d)
    if not basis:
        return 0
    return len(basis) - rank_mod(rows, ring.p) if rows else len(basis)


def map_rows(ring, src_twists, cols, tgt_twists, d):
    """Images of the degree-d source basis under the column map, as rows.

    Returns (src_basis, tgt_basis, rows); rows[j] is the coordinate vector
    of the image of src_basis[j] in the target graded piece.
    """
    from .groebner import emul_term

    src_basis = free_basis(ring, src_twists, d)
    tgt_basis = free_basis(ring, tgt_twists, d)
    index = {t: j for j, t in enumerate(tgt_basis)}
    rows = []
    for (pos, m) in src_basis:
        img = emul_term(cols[pos], m, 1, ring.p)
        img = reduce_elem_mod_ideal(img, ring)
        rows.append(elem_to_vec(img, index, len(tgt_basis), ring.p))
    return src_basis, tgt_basis, rows


def induced_map_rank(ring, src_twists, cols, tgt_twists, tgt_rel_rows, d,
                     src_rows=None, tgt_basis_len=None):
    """Rank of the induced map between graded pieces of presented modules."""
    if src_rows is None:
        _, tgt_basis, src_rows = map_rows(ring, src_twists, cols, tgt_twists, d)
        tgt_basis_len = len(tgt_basis)
    p = ring.p
    stacked = list(src_rows) + list(tgt_rel_rows)
    if not stacked:
        return 0
    base = rank_mod(tgt_rel_rows, p) if tgt_rel_rows else 0
    return rank_mod(stacked, p) - base
