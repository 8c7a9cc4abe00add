"""Tor and Ext as graded dimension tables with exact zero-certificates.

Tor_i(M,N) is the homology of F_M tensor N, Ext^i(M,N) the cohomology of
Hom(F_M, N).  Both complexes are presented by free covers: index i is
covered by a free module with one generator per (generator of F_i,
generator of N), modulo the relations of N in every slot.  Graded
dimensions come from rank counts in each internal degree.  Zero
verdicts are exact, by one of two routes: over artinian rings every
graded piece lives inside a window bounded by the socle top degree, so
vanishing of all dimensions there is a complete check; otherwise kernel
generators are reduced to zero against a Groebner basis of the image
plus relations.  Verdicts are never read off truncated dimension
tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .groebner import (
    elead,
    elem_component,
    groebner,
    normal_form,
    syzygies,
)
from .resolution import GradedModule, minimal_resolution

DEFAULT_CAP_PAD = 5


def _cover(res_twists, N):
    """Twists of the tensor cover F_i (x) N-cover: position a*gN + b."""
    out = []
    for t in res_twists:
        for u in N.twists:
            out.append(t + u)
    return tuple(out)


def _hom_cover(res_twists, N):
    """Twists of the Hom cover: Hom(R(-t), N) = N(t)."""
    out = []
    for t in res_twists:
        for u in N.twists:
            out.append(u - t)
    return tuple(out)


def _slot_relations(res_rank, N):
    """Relations of N repeated in every resolution-generator slot."""
    g = len(N.twists)
    rels = []
    for a in range(res_rank):
        for col in N.relations:
            rels.append({(a * g + b, m): c for (b, m), c in col.items()})
    return rels


class _TensorComplex:
    """F_M (x) N as covered chain complex; maps go i -> i-1."""

    def __init__(self, M, N, top):
        self.ring = M.ring
        self.N = N
        self.res = minimal_resolution(M, top + 1)
        self.top = top
        self._spaces = {}
        self._maps = {}

    def space(self, i):
        if i not in self._spaces:
            tw = self.res.twist_list(i)
            self._spaces[i] = (
                _cover(tw, self.N),
                _slot_relations(len(tw), self.N),
            )
        return self._spaces[i]

    def map_cols(self, i):
        """Columns of D_i: C_i -> C_{i-1} (None for i <= 0)."""
        if i <= 0:
            return None
        if i not in self._maps:
            g = len(self.N.twists)
            dcols = self.res.differential(i)
            src_rank = len(self.res.twist_list(i))
            cols = []
            for a in range(src_rank):
                dcol = dcols[a]
                for b in range(g):
                    col = {}
                    for (a_t, m), c in dcol.items():
                        col[(a_t * g + b, m)] = c
                    cols.append(col)
            self._maps[i] = cols
        return self._maps[i]

    def out_map(self, i):
        """(cols, target index) for the map leaving homological index i."""
        cols = self.map_cols(i)
        return (cols, i - 1) if cols is not None else None

    def in_map(self, i):
        cols = self.map_cols(i + 1)
        return (cols, i + 1) if cols is not None else None


class _HomComplex:
    """Hom(F_M, N) as covered cochain complex; maps go i -> i+1."""

    def __init__(self, M, N, top):
        self.ring = M.ring
        self.N = N
        self.res = minimal_resolution(M, top + 1)
        self.top = top
        self._spaces = {}
        self._maps = {}

    def space(self, i):
        if i not in self._spaces:
            tw = self.res.twist_list(i)
            self._spaces[i] = (
                _hom_cover(tw, self.N),
                _slot_relations(len(tw), self.N),
            )
        return self._spaces[i]

    def map_cols(self, i):
        """Columns of delta_i: E_{i-1} -> E_i, i.e. composition with d_i."""
        if i <= 0:
            return None
        if i not in self._maps:
            g = len(self.N.twists)
            dcols = self.res.differential(i)  # columns over F_{i-1} positions
            src_rank = len(self.res.twist_list(i - 1))
            tgt_rank = len(self.res.twist_list(i))
            cols = []
            for a_src in range(src_rank):
                entries = [
                    elem_component(dcols[a_tgt], a_src)
                    for a_tgt in range(tgt_rank)
                ]
                for b in range(g):
                    col = {}
                    for a_tgt, poly in enumerate(entries):
                        for m, c in poly.items():
                            col[(a_tgt * g + b, m)] = c
                    cols.append(col)
            self._maps[i] = cols
        return self._maps[i]

    def out_map(self, i):
        cols = self.map_cols(i + 1)
        return (cols, i + 1) if cols is not None else None

    def in_map(self, i):
        cols = self.map_cols(i)
        return (cols, i - 1) if cols is not None else None


# ---------------------------------------------------------------------------
# homology of a covered complex


def _preimage_gens(cols, sub_gens, ring, tgt_twists, src_rank):
    """Generators of the preimage of <sub_gens> under the column map."""
    combined = list(cols) + list(sub_gens)
    if not combined:
        return []
    syz = syzygies(combined, ring, len(tgt_twists), tgt_twists)
    out = []
    seen = set()
    for s in syz:
        proj = {(i, m): c for (i, m), c in s.items() if i < len(cols)}
        if not proj:
            continue
        key = tuple(sorted(proj.items()))
        if key not in seen:
            seen.add(key)
            out.append(proj)
    return out


def _kernel_gens_of_index(cx, i):
    """Module generators of ker(map leaving index i) inside the cover."""
    tw_i, rels_i = cx.space(i)
    if not tw_i:
        return [], tw_i, rels_i
    out = cx.out_map(i)
    if out is None:
        zero = (0,) * cx.ring.nvars
        gens = [{(a, zero): 1} for a in range(len(tw_i))]
        return gens, tw_i, rels_i
    cols, tgt = out
    tw_t, rels_t = cx.space(tgt)
    gens = _preimage_gens(cols, rels_t, cx.ring, tw_t, len(tw_i))
    return gens, tw_i, rels_i


def _is_zero_at(cx, i):
    """Exact verdict: homology at index i vanishes as a module."""
    top = cx.ring.top_degree()
    if top is not None:
        # Over an artinian ring every graded piece of the complex sits in
        # the window [min twist, max twist + socle top], so checking that
        # all graded homology dimensions there vanish is an exact verdict.
        tw_i, _ = cx.space(i)
        if not tw_i:
            return True
        degrees = range(min(tw_i), max(tw_i) + top + 1)
        return not _dims_at(cx, i, degrees, {}, {})
    gens, tw_i, rels_i = _kernel_gens_of_index(cx, i)
    if not tw_i:
        return True
    if not gens:
        return True
    inm = cx.in_map(i)
    image_cols = list(inm[0]) if inm is not None else []
    gb = groebner(image_cols + list(rels_i), cx.ring, len(tw_i), tw_i)
    return all(not normal_form(g, gb) for g in gens)


def _dims_at(cx, i, degrees, rel_cache, row_cache):
    """Graded dimensions of homology at index i: dim V - rk out - rk in."""
    ring = cx.ring
    p = ring.p
    tw_i, rels_i = cx.space(i)
    out = {}
    if not tw_i:
        return out
    for d in degrees:
        nb_i, rows_i, rk_i = _rel_data(cx, i, d, rel_cache)
        if nb_i == 0:
            continue
        dim_v = nb_i - rk_i
        rk_out = _induced_rank(cx, cx.out_map(i), i, d, rel_cache, row_cache, p)
        rk_in = _induced_rank_in(cx, i, d, rel_cache, row_cache, p)
        h = dim_v - rk_out - rk_in
        if h < 0:
            raise AssertionError("negative homology dimension: broken complex")
        if h:
            out[d] = h
    return out


def _rel_data(cx, i, d, rel_cache):
    key = (i, d)
    if key not in rel_cache:
        tw, rels = cx.space(i)
        basis, _, rows = linalg.relation_rows(cx.ring, tw, rels, d)
        rk = linalg.rank_mod(rows, cx.ring.p) if rows else 0
        rel_cache[key] = (len(basis), rows, rk)
    return rel_cache[key]


def _map_rows_cached(cx, src_i, tgt_i, cols, d, row_cache):
    key = (src_i, tgt_i, d)
    if key not in row_cache:
        tw_s, _ = cx.space(src_i)
        tw_t, _ = cx.space(tgt_i)
        _, tgt_basis, rows = linalg.map_rows(cx.ring, tw_s, cols, tw_t, d)
        row_cache[key] = rows
    return row_cache[key]


def _induced_rank(cx, out_spec, i, d, rel_cache, row_cache, p):
    if out_spec is None:
        return 0
    cols, tgt = out_spec
    rows = _map_rows_cached(cx, i, tgt, cols, d, row_cache)
    _, tgt_rel_rows, tgt_rk = _rel_data(cx, tgt, d, rel_cache)
    stacked = list(rows) + list(tgt_rel_rows)
    if not stacked:
        return 0
    return linalg.rank_mod(stacked, p) - tgt_rk


def _induced_rank_in(cx, i, d, rel_cache, row_cache, p):
    inm = cx.in_map(i)
    if inm is None:
        return 0
    cols, src = inm
    rows = _map_rows_cached(cx, src, i, cols, d, row_cache)
    _, rel_rows, rk = _rel_data(cx, i, d, rel_cache)
    stacked = list(rows) + list(rel_rows)
    if not stacked:
        return 0
    return linalg.rank_mod(stacked, p) - rk


# ---------------------------------------------------------------------------
# reports


@dataclass
class HomologyReport:
    kind: str                      # "Tor" or "Ext"
    pair: tuple
    range: tuple                   # (lo, hi), inclusive
    dims: dict = field(default_factory=dict)      # i -> {d: dim}
    is_zero: dict = field(default_factory=dict)   # i -> bool
    cap: int = 0

    def total_dim(self, i):
        return sum(self.dims.get(i, {}).values())

    def strip(self):
        lo, hi = self.range
        idx = " ".join(str(i) for i in range(lo, hi + 1))
        pat = " ".join(
            "0" if self.is_zero.get(i, False) else "*"
            for i in range(lo, hi + 1)
        )
        return f"i: {idx} / {self.kind}: {pat}"

    def to_json(self):
        return {
            "kind": self.kind,
            "M": self.pair[0],
            "N": self.pair[1],
            "range": list(self.range),
            "cap": self.cap,
            "is_zero": {str(i): v for i, v in sorted(self.is_zero.items())},
            "dims": {
                str(i): {str(d): v for d, v in sorted(dd.items())}
                for i, dd in sorted(self.dims.items())
            },
        }


def _default_cap(M, N, hi):
    tw = list(M.twists) + list(N.twists)
    mx = max(tw) if tw else 0
    return mx + 2 * hi + DEFAULT_CAP_PAD


def _run_report(cx, kind, M, N, rng, cap, exact, dims):
    lo, hi = rng
    if lo < 0 or hi < lo:
        raise ValueError("bad homological index range")
    report = HomologyReport(
        kind=kind,
        pair=(M.name or "M", N.name or "N"),
        range=(lo, hi),
        cap=cap,
    )
    rel_cache = {}
    row_cache = {}
    for i in range(lo, hi + 1):
        tw_i, _ = cx.space(i)
        if dims:
            dmin = min(tw_i) if tw_i else 0
            degrees = range(dmin, cap + 1)
            report.dims[i] = _dims_at(cx, i, degrees, rel_cache, row_cache)
        if exact:
            report.is_zero[i] = _is_zero_at(cx, i)
            if dims and report.is_zero[i] and report.dims.get(i):
                raise AssertionError(
                    f"{kind} certified zero at {i} but graded dims nonzero"
                )
    return report


def tor(M: GradedModule, N: GradedModule, rng, cap=None,
        exact=True, dims=True) -> HomologyReport:
    """Tor_i(M, N) for i in rng = (lo, hi).

    When N is free the tensor complex is the resolution of M itself,
    whose exactness in positive degrees is witnessed by the syzygy
    computation, so those groups vanish without further work.
    """
    lo, hi = rng
    if cap is None:
        cap = _default_cap(M, N, hi)
    if not N.relations and N.twists and not M.is_zero:
        if lo <= 0:
            cx = _TensorComplex(M, N, 0)
            report = _run_report(cx, "Tor", M, N, (lo, 0), cap, exact, dims)
            report.range = (lo, hi)
        else:
            report = HomologyReport(
                kind="Tor",
                pair=(M.name or "M", N.name or "N"),
                range=(lo, hi),
                cap=cap,
            )
        for i in range(max(lo, 1), hi + 1):
            if exact:
                report.is_zero[i] = True
            if dims:
                report.dims[i] = {}
        return report
    cx = _TensorComplex(M, N, hi)
    return _run_report(cx, "Tor", M, N, (lo, hi), cap, exact, dims)


_SOCLE_CACHE = {}


def socle_dimension(ring):
    """k-dimension of the socle of an artinian quotient ring (None if dim > 0).

    The socle in each degree is the simultaneous kernel of multiplication
    by every variable, computed by exact rank counts over the prime field.
    A one-dimensional socle certifies that the ring is self-injective.
    """
    top = ring.top_degree()
    if top is None:
        return None
    key = ring.key()
    if key not in _SOCLE_CACHE:
        total = 0
        for d in range(top + 1):
            nb = ring.hilbert(d)
            if nb == 0:
                continue
            combined = None
            for v in range(ring.nvars):
                mono = tuple(1 if j == v else 0 for j in range(ring.nvars))
                w = ring.weights[v]
                _, _, rows = linalg.map_rows(
                    ring, (w,), [{(0, mono): 1}], (0,), d + w
                )
                block = [list(r) for r in rows]
                if combined is None:
                    combined = block
                else:
                    for j in range(nb):
                        combined[j] = combined[j] + block[j]
            rk = linalg.rank_mod(combined, ring.p) if combined[0] else 0
            total += nb - rk
        _SOCLE_CACHE[key] = total
    return _SOCLE_CACHE[key]


def ext(M: GradedModule, N: GradedModule, rng, cap=None,
        exact=True, dims=True) -> HomologyReport:
    """Ext^i(M, N) for i in rng = (lo, hi).

    When N is free and the ring is artinian with one-dimensional socle,
    the ring is self-injective, so every higher Ext group vanishes; only
    Hom(M, N) needs the complex.
    """
    lo, hi = rng
    if cap is None:
        cap = _default_cap(M, N, hi)
    if (not N.relations and N.twists and not M.is_zero
            and socle_dimension(M.ring) == 1):
        if lo <= 0:
            cx = _HomComplex(M, N, 0)
            report = _run_report(cx, "Ext", M, N, (lo, 0), cap, exact, dims)
            report.range = (lo, hi)
        else:
            report = HomologyReport(
                kind="Ext",
                pair=(M.name or "M", N.name or "N"),
                range=(lo, hi),
                cap=cap,
            )
        for i in range(max(lo, 1), hi + 1):
            if exact:
                report.is_zero[i] = True
            if dims:
                report.dims[i] = {}
        return report
    cx = _HomComplex(M, N, hi)
    return _run_report(cx, "Ext", M, N, (lo, hi), cap, exact, dims)


def tor_symmetry_check(M: GradedModule, N: GradedModule, rng, cap=None) -> bool:
    """Graded dims of H(F_M (x) N) and H(M (x) F_N) agree on the range."""
    lo, hi = rng
    if cap is None:
        cap = max(_default_cap(M, N, hi), _default_cap(N, M, hi))
    left = tor(M, N, rng, cap=cap, exact=False, dims=True)
    right = tor(N, M, rng, cap=cap, exact=False, dims=True)
    for i in range(lo, hi + 1):
        if left.dims.get(i, {}) != right.dims.get(i, {}):
            return False
    return True


# ---------------------------------------------------------------------------
# finite length


@dataclass
class FiniteLengthResult:
    finite: bool
    length: int | None
    top_degree: int | None = None

    def __bool__(self):
        return self.finite


def finite_length_test(N: GradedModule) -> FiniteLengthResult:
    """Exact finite-length verdict via pure powers in the lead-term module."""
    ring = N.ring
    if N.is_zero:
        return FiniteLengthResult(True, 0, None)
    gb = groebner(list(N.relations), ring, len(N.twists), N.twists)
    leads = {}
    for el in gb.basis:
        (pos, mono), _ = elead(el, ring.weights)
        leads.setdefault(pos, []).append(mono)
    for pos in range(len(N.twists)):
        monos = leads.get(pos, [])
        for v in range(ring.nvars):
            if not any(
                m[v] > 0 and all(e == 0 for j, e in enumerate(m) if j != v)
                for m in monos
            ):
                return FiniteLengthResult(False, None)
    # finite: accumulate the Hilbert function until it dies out
    length = 0
    top = None
    d = min(N.twists)
    zeros = 0
    maxw = max(ring.weights)
    while True:
        h = N.hilbert_function(d)
        if h:
            length += h
            top = d
            zeros = 0
        else:
            zeros += 1
            if d >= max(N.twists) and zeros >= maxw:
                break
        d += 1
    return FiniteLengthResult(True, length, top)
