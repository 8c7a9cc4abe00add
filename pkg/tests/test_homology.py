"""Tor/Ext reports, zero certificates, finite length, socle."""

import pytest

import oracle
from homlab import (
    GradedModule,
    ext,
    finite_length_test,
    parse_ring,
    socle_dimension,
    tor,
    tor_symmetry_check,
)
from homlab.harness import random_module, residue_field_of
from homlab.homology import _HomComplex, _TensorComplex

XY = parse_ring("p=32003; vars x,y; ci: x*y")
SQ = parse_ring("p=32003; vars x,y; ci: x^2, y^2")
Z3 = parse_ring("p=32003; vars x,y,z; ci: x^2, y^2, z^2")


def test_paper_pair_tor_parity():
    M = GradedModule.cyclic(XY, ["x"], name="A/(x)")
    N = GradedModule.cyclic(XY, ["y"], name="A/(y)")
    rep = tor(M, N, (0, 12))
    for i in range(13):
        assert rep.is_zero[i] == (i % 2 == 1 and i >= 1)


def test_paper_pair_ext_parity():
    M = GradedModule.cyclic(XY, ["x"], name="A/(x)")
    N = GradedModule.cyclic(XY, ["y"], name="A/(y)")
    rep = ext(M, N, (0, 12))
    for i in range(13):
        assert rep.is_zero[i] == (i % 2 == 0)


def test_betti_equals_tor_and_ext_against_k():
    """beta_n = dim Tor_n(M,k) = dim Ext^n(M,k) for corpus modules."""
    from homlab import betti_table

    for ring, seed in ((XY, 2), (SQ, 3), (Z3, 1)):
        M = random_module(ring, seed)
        k = residue_field_of(ring)
        bt = betti_table(M, 5)
        t = tor(M, k, (0, 5), exact=False)
        e = ext(M, k, (0, 5), exact=False)
        for n in range(6):
            assert bt.total(n) == t.total_dim(n) == e.total_dim(n)


@pytest.mark.parametrize("kind,Cx", [("Tor", _TensorComplex),
                                     ("Ext", _HomComplex)])
def test_homology_dims_match_oracle(kind, Cx):
    """Graded Tor/Ext dims recomputed by the brute-force oracle."""
    fn = tor if kind == "Tor" else ext
    for ring, seed in ((SQ, 4), (XY, 5)):
        M = random_module(ring, seed)
        N = random_module(ring, seed + 20)
        if M.is_zero or N.is_zero:
            continue
        hi = 3
        cap = 12
        rep = fn(M, N, (0, hi), cap=cap, exact=False)
        cx = Cx(M, N, hi)
        for i in range(hi + 1):
            here = cx.space(i)
            if not here[0]:
                assert not rep.dims.get(i)
                continue
            prev = cx.space(i - 1) if i else None
            nxt = cx.space(i + 1)
            outm = cx.out_map(i)
            inm = cx.in_map(i)
            want = {}
            for d in range(min(here[0]), cap + 1):
                h = oracle.presented_homology_dim(
                    ring,
                    cx.space(outm[1]) if outm else None,
                    inm[0] if inm else None,
                    here,
                    outm[0] if outm else None,
                    cx.space(inm[1]) if inm else None,
                    d,
                )
                if h:
                    want[d] = h
            assert rep.dims.get(i, {}) == want, (kind, ring.key(), i)


def test_tor_zero_iff_dims_zero_artinian():
    """Over artinian rings is_zero agrees with the graded dimensions."""
    for seed in range(4):
        M = random_module(SQ, seed)
        N = random_module(SQ, seed + 31)
        if M.is_zero or N.is_zero:
            continue
        rep = tor(M, N, (0, 5), exact=True, dims=True)
        for i in range(6):
            assert rep.is_zero[i] == (not rep.dims.get(i))


def test_free_partner_shortcuts_are_exact():
    """Tor_i(M, free) = 0 and Ext^i(M, free) = 0 (Gorenstein artinian)
    for i >= 1, and index 0 carries honest dimensions."""
    A = GradedModule.free(SQ, [0], name="A")
    M = random_module(SQ, 6)
    t = tor(M, A, (0, 8))
    e = ext(M, A, (0, 8))
    for i in range(1, 9):
        assert t.is_zero[i] and e.is_zero[i]
    # Tor_0(M, A) = M: same Hilbert function
    for d, v in t.dims[0].items():
        assert v == M.hilbert_function(d)


def test_tor_symmetry():
    for ring in (XY, SQ):
        M = random_module(ring, 8)
        N = random_module(ring, 9)
        if M.is_zero or N.is_zero:
            continue
        assert tor_symmetry_check(M, N, (0, 3))


def test_ext_nonsymmetric_report_fields():
    M = GradedModule.residue_field(SQ)
    rep = ext(M, M, (0, 3))
    assert rep.kind == "Ext" and rep.range == (0, 3)
    assert "Ext" in rep.strip()
    j = rep.to_json()
    assert set(j) >= {"kind", "range", "is_zero", "dims", "cap"}


def test_finite_length():
    k = GradedModule.residue_field(XY)
    r = finite_length_test(k)
    assert r.finite and r.length == 1 and r.top_degree == 0
    Ax = GradedModule.cyclic(XY, ["x"])
    assert not finite_length_test(Ax).finite
    A = GradedModule.free(SQ, [0])
    r = finite_length_test(A)
    assert r.finite and r.length == 4 and r.top_degree == 2


def test_socle_dimension():
    assert socle_dimension(SQ) == 1
    assert socle_dimension(Z3) == 1
    assert socle_dimension(XY) is None
    # non-Gorenstein check: socle of k[x,y]/(x^2, x*y, y^2)... not a CI;
    # instead verify the k-dual count on the CI socle degree
    assert SQ.hilbert(SQ.top_degree()) == 1


def test_homology_range_validation():
    M = GradedModule.residue_field(SQ)
    with pytest.raises(ValueError):
        tor(M, M, (3, 1))
    with pytest.raises(ValueError):
        ext(M, M, (-1, 2))
