"""Equivalence deciders for characteristic pairs.

Two notions are decided:

* strong: a poset isomorphism matching facet labels exactly;
* weak: a poset isomorphism matching labels up to one torus automorphism
  A in GL(k, Z) applied to all labels at once.

Searches are exact backtracking over faces, pruned by an iterated color
refinement of the Hasse diagram (codimension, cover degrees, and label data
that is invariant for the mode).  Every positive verdict carries a witness
that is re-verified by an independent recomputation before being returned.

``canonical_form`` produces a string equal across a mode's equivalence class
by minimizing a deterministic serialization over an individualization-
refinement tree (and, for weak mode, over a finite equivariant family of
label transforms).  It is bounded to posets with at most 64 faces; the
deciders have no such bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .charpair import CharacteristicPair
from .lattice import (
    Matrix,
    PrimitiveVector,
    apply_auto,
    canonical_sign,
    det_int,
    hnf_with_transform,
    solve_unimodular,
    transpose,
)

CANONICAL_FORM_MAX_FACES = 64


class CanonicalFormError(ValueError):
    """Raised when a pair exceeds the supported canonical-form size."""


@dataclass(frozen=True)
class IsoWitness:
    """A face bijection, plus the torus automorphism for weak equivalence."""

    phi: dict[str, str]
    auto: Optional[Matrix] = None


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    mode: str
    witness: Optional[IsoWitness] = None
    reason: str = ""
    hypotheses: dict[str, bool] = field(default_factory=dict)
    conclusion: str = ""
    witness_unique: Optional[bool] = None


# ---------------------------------------------------------------------------
# Refined backtracking search for poset isomorphisms.


class _SearchPoset:
    """Preprocessed view of one pair for the isomorphism search."""

    def __init__(self, cp: CharacteristicPair, mode: str):
        p = cp.poset
        self.ids = p.ids()
        self.codim = {f: p.codim(f) for f in self.ids}
        self.up = {f: frozenset(p.covering(f)) for f in self.ids}
        self.down = {f: frozenset(p.covered_by(f)) for f in self.ids}
        labels = cp.labels()
        by_label: dict[tuple[int, ...], list[str]] = {}
        for f, v in labels.items():
            by_label.setdefault(v.coords, []).append(f)
        # Facets carrying the same label as f (excluding f itself).
        self.mates = {
            f: frozenset(x for x in by_label.get(labels[f].coords, ()) if x != f)
            if f in labels
            else frozenset()
            for f in self.ids
        }
        # Color keys are nested integer tuples so rounds sort structurally.
        self.init_key = {}
        for f in self.ids:
            if f in labels:
                if mode == "strong":
                    label_part = (1,) + labels[f].coords
                else:
                    label_part = (2, len(by_label[labels[f].coords]))
            else:
                label_part = (0,)
            self.init_key[f] = (
                self.codim[f],
                len(self.up[f]),
                len(self.down[f]),
                label_part,
            )


def _joint_refine(structs: Sequence[_SearchPoset]) -> list[dict[str, int]]:
    """Stable color refinement with ids shared across all the structs.

    Keys are comparable tuples and each round keeps the previous color as
    the leading component, so dense re-indexing preserves the color order
    and the iteration reaches a genuine fixed point.
    """

    def intern_round(keys: list[list[tuple]]) -> list[dict[str, int]]:
        flat = sorted({k for ks in keys for k in ks})
        table = {k: i for i, k in enumerate(flat)}
        return [
            {f: table[k] for f, k in zip(s.ids, ks)}
            for s, ks in zip(structs, keys)
        ]

    colors = intern_round([[s.init_key[f] for f in s.ids] for s in structs])
    while True:
        keys = []
        for s, col in zip(structs, colors):
            ks = []
            for f in s.ids:
                sig = (
                    col[f],
                    tuple(sorted(col[g] for g in s.up[f])),
                    tuple(sorted(col[g] for g in s.down[f])),
                    tuple(sorted(col[g] for g in s.mates[f])),
                )
                ks.append(sig)
            keys.append(ks)
        new = intern_round(keys)
        if new == colors:
            return colors
        colors = new


def _histogram(colors: dict[str, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for c in colors.values():
        out[c] = out.get(c, 0) + 1
    return out


def _iso_candidates(
    sa: _SearchPoset, sb: _SearchPoset
) -> Iterator[dict[str, str]]:
    """Yield poset isomorphisms (mate-consistent) in deterministic order."""
    if len(sa.ids) != len(sb.ids):
        return
    col_a, col_b = _joint_refine([sa, sb])
    if _histogram(col_a) != _histogram(col_b):
        return

    by_color_b: dict[int, list[str]] = {}
    for f in sb.ids:
        by_color_b.setdefault(col_b[f], []).append(f)

    hist_a = _histogram(col_a)
    order = sorted(sa.ids, key=lambda f: (hist_a[col_a[f]], col_a[f], f))
    phi: dict[str, str] = {}
    used: set[str] = set()

    def consistent(u: str, v: str) -> bool:
        for rel_a, rel_b in ((sa.up, sb.up), (sa.down, sb.down), (sa.mates, sb.mates)):
            count = 0
            for w in rel_a[u]:
                if w in phi:
                    count += 1
                    if phi[w] not in rel_b[v]:
                        return False
            if sum(1 for w in rel_b[v] if w in used) != count:
                return False
        return True

    def extend(i: int) -> Iterator[dict[str, str]]:
        if i == len(order):
            yield dict(phi)
            return
        u = order[i]
        for v in sorted(by_color_b.get(col_a[u], ())):
            if v in used or not consistent(u, v):
                continue
            phi[u] = v
            used.add(v)
            yield from extend(i + 1)
            del phi[u]
            used.discard(v)

    yield from extend(0)


# ---------------------------------------------------------------------------
# Verdicts.


def _shape_mismatch(a: CharacteristicPair, b: CharacteristicPair) -> Optional[str]:
    if a.k != b.k:
        return f"k differs ({a.k} vs {b.k})"
    if a.dim_orbit != b.dim_orbit:
        return f"dim_orbit differs ({a.dim_orbit} vs {b.dim_orbit})"
    counts_a = sorted(a.poset.codim(f) for f in a.poset.ids())
    counts_b = sorted(b.poset.codim(f) for f in b.poset.ids())
    if counts_a != counts_b:
        return "face counts per codimension differ"
    return None


def has_four_dim_faces(cp: CharacteristicPair) -> bool:
    d = cp.dim_orbit
    return any(d - cp.poset.codim(f) == 4 for f in cp.poset.ids())


def _hypotheses(a: CharacteristicPair, b: CharacteristicPair) -> dict[str, bool]:
    aa, bb = a.attestations, b.attestations
    vacuous = not has_four_dim_faces(a) and not has_four_dim_faces(b)
    return {
        "sections_exist": aa.sections_exist and bb.sections_exist,
        "faces_contractible": aa.faces_contractible and bb.faces_contractible,
        "four_faces_matched": aa.four_faces_matched and bb.four_faces_matched,
        "four_faces_vacuous": vacuous,
    }


def _conclusion(equivalent: bool, mode: str, hyp: dict[str, bool]) -> str:
    if not equivalent:
        return "not equivalent"
    kind = (
        "equivariantly diffeomorphic"
        if mode == "strong"
        else "weakly equivariantly diffeomorphic"
    )
    four_ok = hyp["four_faces_matched"] or hyp["four_faces_vacuous"]
    if hyp["faces_contractible"] and four_ok:
        return (
            f"combinatorially equivalent; with the attested hypotheses the "
            f"underlying manifolds are {kind}"
        )
    missing = []
    if not hyp["faces_contractible"]:
        missing.append("faces_contractible")
    if not four_ok:
        missing.append("four_faces_matched")
    return (
        "combinatorially equivalent; geometric conclusion additionally needs "
        + ", ".join(missing)
    )


def strong_equivalence(a: CharacteristicPair, b: CharacteristicPair) -> Verdict:
    """Decide equivalence with facet labels matched exactly."""
    hyp = _hypotheses(a, b)
    reason = _shape_mismatch(a, b)
    if reason is None:
        multiset_a = sorted(v.coords for v in a.labels().values())
        multiset_b = sorted(v.coords for v in b.labels().values())
        if multiset_a != multiset_b:
            reason = "facet label multisets differ"
    if reason is not None:
        return Verdict(False, "strong", reason=reason, hypotheses=hyp,
                       conclusion="not equivalent")
    sa = _SearchPoset(a, "strong")
    sb = _SearchPoset(b, "strong")
    labels_a, labels_b = a.labels(), b.labels()
    for phi in _iso_candidates(sa, sb):
        if all(labels_a[f] == labels_b[phi[f]] for f in labels_a):
            witness = IsoWitness(phi=phi, auto=None)
            assert verify_witness(a, b, witness, "strong")
            return Verdict(
                True,
                "strong",
                witness=witness,
                hypotheses=hyp,
                conclusion=_conclusion(True, "strong", hyp),
                witness_unique=True,
            )
    return Verdict(
        False,
        "strong",
        reason="no label-preserving poset isomorphism",
        hypotheses=hyp,
        conclusion="not equivalent",
    )


def weak_equivalence(a: CharacteristicPair, b: CharacteristicPair) -> Verdict:
    """Decide equivalence with labels matched up to one A in GL(k, Z)."""
    hyp = _hypotheses(a, b)
    reason = _shape_mismatch(a, b)
    if reason is None:
        sizes_a = sorted(_label_class_sizes(a))
        sizes_b = sorted(_label_class_sizes(b))
        if sizes_a != sizes_b:
            reason = "label-class size multisets differ"
    if reason is not None:
        return Verdict(False, "weak", reason=reason, hypotheses=hyp,
                       conclusion="not equivalent")
    sa = _SearchPoset(a, "weak")
    sb = _SearchPoset(b, "weak")
    facets = a.poset.facets()
    labels_a, labels_b = a.labels(), b.labels()
    for phi in _iso_candidates(sa, sb):
        src = [labels_a[f] for f in facets]
        dst = [labels_b[phi[f]] for f in facets]
        sol = solve_unimodular(src, dst, a.k)
        if sol is None:
            continue
        witness = IsoWitness(phi=phi, auto=sol.matrix)
        assert verify_witness(a, b, witness, "weak")
        return Verdict(
            True,
            "weak",
            witness=witness,
            hypotheses=hyp,
            conclusion=_conclusion(True, "weak", hyp),
            witness_unique=sol.unique,
        )
    return Verdict(
        False,
        "weak",
        reason="no poset isomorphism admits a compatible torus automorphism",
        hypotheses=hyp,
        conclusion="not equivalent",
    )


def _label_class_sizes(cp: CharacteristicPair) -> list[int]:
    counts: dict[tuple[int, ...], int] = {}
    for v in cp.labels().values():
        counts[v.coords] = counts.get(v.coords, 0) + 1
    return list(counts.values())


def verify_witness(
    a: CharacteristicPair,
    b: CharacteristicPair,
    witness: IsoWitness,
    mode: str,
) -> bool:
    """Recheck a witness from scratch; False (never an exception) on any flaw.

    Independent of the search: only the claimed bijection and matrix are
    used, against the raw poset and label data.
    """
    if mode not in ("strong", "weak"):
        return False
    if a.k != b.k or a.dim_orbit != b.dim_orbit:
        return False
    phi = witness.phi
    ids_a, ids_b = a.poset.ids(), b.poset.ids()
    if sorted(phi) != ids_a:
        return False
    if sorted(phi.values()) != ids_b or len(set(phi.values())) != len(ids_b):
        return False
    for f in ids_a:
        if a.poset.codim(f) != b.poset.codim(phi[f]):
            return False
    mapped = {(phi[lo], phi[up]) for lo, up in a.poset.covers()}
    if mapped != set(b.poset.covers()):
        return False
    labels_a, labels_b = a.labels(), b.labels()
    if mode == "strong":
        return all(labels_a[f] == labels_b[phi[f]] for f in labels_a)
    auto = witness.auto
    if auto is None or len(auto) != a.k or any(len(r) != a.k for r in auto):
        return False
    if any(not isinstance(x, int) for r in auto for x in r):
        return False
    if abs(det_int(auto)) != 1:
        return False
    return all(
        apply_auto(auto, labels_a[f]) == labels_b[phi[f]] for f in labels_a
    )


# ---------------------------------------------------------------------------
# Canonical forms.


def canonical_form(cp: CharacteristicPair, mode: str) -> str:
    """String equal across the strong (or weak) equivalence class.

    Supported for posets with at most 64 faces; beyond that a
    CanonicalFormError is raised and the pairwise deciders remain usable.
    """
    if mode not in ("strong", "weak"):
        raise ValueError(f"mode must be 'strong' or 'weak', got {mode!r}")
    if len(cp.poset) > CANONICAL_FORM_MAX_FACES:
        raise CanonicalFormError(
            f"no canonical form: poset has {len(cp.poset)} faces "
            f"(limit {CANONICAL_FORM_MAX_FACES})"
        )
    if mode == "strong":
        return _canon_strong(cp)
    return _canon_weak(cp)


def _canon_strong(cp: CharacteristicPair) -> str:
    struct = _SearchPoset(cp, "strong")
    labels = cp.labels()

    def serialize(order: list[str]) -> str:
        index = {f: i for i, f in enumerate(order)}
        codims = ",".join(str(struct.codim[f]) for f in order)
        covers = sorted(
            (index[lo], index[up])
            for lo, up in cp.poset.covers()
        )
        cov = ";".join(f"{lo}>{up}" for lo, up in covers)
        lam = ";".join(
            f"{index[f]}:" + ",".join(str(x) for x in labels[f].coords)
            for f in sorted(labels, key=lambda f: index[f])
        )
        return f"k={cp.k}|d={cp.dim_orbit}|c={codims}|cov={cov}|lam={lam}"

    def refine(colors: dict[str, object]) -> dict[str, int]:
        col = _intern({f: colors[f] for f in struct.ids})
        while True:
            sig = {
                f: (
                    col[f],
                    tuple(sorted(col[g] for g in struct.up[f])),
                    tuple(sorted(col[g] for g in struct.down[f])),
                    tuple(sorted(col[g] for g in struct.mates[f])),
                )
                for f in struct.ids
            }
            new = _intern(sig)
            if new == col:
                return col
            col = new

    def descend(col: dict[str, int]) -> str:
        cells: dict[int, list[str]] = {}
        for f, c in col.items():
            cells.setdefault(c, []).append(f)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = c
                break
        if target is None:
            order = sorted(struct.ids, key=lambda f: col[f])
            return serialize(order)
        best = None
        for f in sorted(cells[target]):
            branched = refine({g: (col[g], 1 if g == f else 0) for g in struct.ids})
            s = descend(branched)
            if best is None or s < best:
                best = s
        return best

    return descend(refine(dict(struct.init_key)))


def _intern(keyed: dict[str, tuple]) -> dict[str, int]:
    table = {k: i for i, k in enumerate(sorted(set(keyed.values())))}
    return {f: table[k] for f, k in keyed.items()}


def _canon_weak(cp: CharacteristicPair) -> str:
    labels = cp.labels()
    head = f"k={cp.k}|d={cp.dim_orbit}"
    if not labels:
        bare = CharacteristicPair(cp.poset, cp.k, {})
        return f"{head}|r=0|{_canon_strong(bare)}"

    from .lattice import coords_in_basis, saturate

    rows = tuple(v.coords for v in labels.values())
    sat = saturate(rows)
    r = sat.rank
    coord_labels = {
        f: PrimitiveVector(coords_in_basis(sat.basis, v.coords))
        for f, v in labels.items()
    }
    transforms = _weak_transforms(cp, coord_labels, r)

    best_key = None
    survivors = []
    for t in transforms:
        multiset = tuple(
            sorted(_row_transform(v.coords, t) for v in coord_labels.values())
        )
        if best_key is None or multiset < best_key:
            best_key = multiset
            survivors = [t]
        elif multiset == best_key:
            survivors.append(t)

    best = None
    for t in survivors:
        relabeled = CharacteristicPair(
            cp.poset,
            r,
            {f: PrimitiveVector(_row_transform(v.coords, t)) for f, v in coord_labels.items()},
        )
        s = _canon_strong(relabeled)
        if best is None or s < best:
            best = s
    mk = ";".join(",".join(str(x) for x in v) for v in best_key)
    return f"{head}|r={r}|m={mk}|{best}"


def _row_transform(v: tuple[int, ...], t: Matrix) -> tuple[int, ...]:
    return canonical_sign(
        tuple(sum(v[i] * t[i][j] for i in range(len(v))) for j in range(len(t[0])))
    )


def _frame_transform(frame: Sequence[tuple[int, ...]]) -> Matrix:
    """Transform T sending the frame rows to their column-Hermite image.

    For the row-stacked frame B there is a unique decomposition B = H @ W
    with W unimodular and H the canonical column-form; T = W^{-1} makes
    B @ T = H, so T is equivariant under right multiplication.
    """
    _, u = hnf_with_transform(transpose(tuple(frame)))
    return transpose(u)


def _weak_transforms(
    cp: CharacteristicPair,
    coord_labels: dict[str, PrimitiveVector],
    r: int,
) -> list[Matrix]:
    """Equivariant family of GL(r, Z) relabelings to minimize over.

    Frames come from the facet stars of full-rank (codimension == k) faces
    when those exist; otherwise from every rationally independent ordered
    tuple of signed distinct label vectors.
    """
    frames: list[tuple[tuple[int, ...], ...]] = []
    full_rank_faces = (
        cp.poset.faces_of_codim(cp.k) if r == cp.k else []
    )
    if full_rank_faces:
        for face in full_rank_faces:
            star = cp.poset.facets_containing(face)
            vecs = [coord_labels[f].coords for f in star]
            for perm in itertools.permutations(vecs):
                for signs in itertools.product((1, -1), repeat=r):
                    frames.append(
                        tuple(
                            tuple(e * x for x in row)
                            for e, row in zip(signs, perm)
                        )
                    )
    else:
        distinct = sorted({v.coords for v in coord_labels.values()})
        signed = [row for v in distinct for row in ((v), tuple(-x for x in v))]
        for combo in itertools.permutations(signed, r):
            if _rational_rank_rows(combo) == r:
                frames.append(tuple(combo))
    out: dict[Matrix, None] = {}
    for frame in frames:
        if _rational_rank_rows(frame) < r:
            continue
        out.setdefault(_frame_transform(frame))
    return sorted(out)


def _rational_rank_rows(rows: Sequence[tuple[int, ...]]) -> int:
    from fractions import Fraction

    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c] / mat[rank][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank
