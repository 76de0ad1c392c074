"""Exhaustive census of valid characteristic functions over a poset.

Labels range over the primitive sign-canonical vectors with entries in
[-B, B].  That box is a user choice: the full label space is infinite and
no finite bound can be complete, so census counts are always relative to B.

Enumeration is exact backtracking facet by facet, in an order compatible
with the face ordering by reverse inclusion, pruning a branch as soon as
some face has all of its facets labeled and the labels fail the
direct-summand condition.  Results are deterministic: identical inputs give
identical outputs regardless of thread count.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .charpair import CharacteristicPair
from .classify import (
    CANONICAL_FORM_MAX_FACES,
    canonical_form,
    strong_equivalence,
    weak_equivalence,
)
from .faceposet import FacePoset
from .lattice import PrimitiveVector, is_direct_summand

DEFAULT_BUDGET = 10 ** 9

Labeling = tuple[tuple[int, ...], ...]  # label per facet, in facet order


class CensusError(ValueError):
    pass


class BudgetExceededError(CensusError):
    def __init__(self, estimate: int, budget: int):
        super().__init__(
            f"estimated search space {estimate} exceeds budget {budget}"
        )
        self.estimate = estimate
        self.budget = budget


def primitive_vectors_in_box(k: int, bound: int) -> list[PrimitiveVector]:
    """All primitive sign-canonical vectors with entries in [-bound, bound]."""
    if k < 1 or bound < 1:
        raise CensusError("need k >= 1 and bound >= 1 for a nonempty label box")
    out = []
    for t in itertools.product(range(-bound, bound + 1), repeat=k):
        if not any(t):
            continue
        g = 0
        for x in t:
            g = gcd(g, x)
        if g != 1:
            continue
        v = PrimitiveVector(t)
        if v.coords == t:
            out.append(v)
    return sorted(out, key=lambda v: v.coords)


@dataclass(frozen=True)
class CensusSpec:
    poset: FacePoset
    k: int
    entry_bound: int
    dedup: str = "none"
    budget: int = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        if self.k < 1:
            raise CensusError("torus rank must be >= 1")
        if self.entry_bound < 1:
            raise CensusError("entry bound must be >= 1 (no primitive vectors)")
        if self.dedup not in ("none", "strong", "weak"):
            raise CensusError(f"unknown dedup mode {self.dedup!r}")
        if self.budget < 1:
            raise CensusError("budget must be positive")


@dataclass(frozen=True)
class CensusClass:
    representative: Labeling
    size: int


@dataclass(frozen=True)
class CensusResult:
    total_valid: int
    classes: tuple[CensusClass, ...]
    faces_per_codim: dict[int, int]
    euler_count: int
    facet_order: tuple[str, ...]

    def pair_for(self, spec: CensusSpec, labeling: Labeling) -> CharacteristicPair:
        return CharacteristicPair(
            spec.poset,
            spec.k,
            {f: PrimitiveVector(v) for f, v in zip(self.facet_order, labeling)},
        )


def enumerate_labelings(
    spec: CensusSpec, first_choices: Optional[Sequence[int]] = None
) -> list[Labeling]:
    """All valid labelings in lexicographic vocabulary order.

    ``first_choices`` restricts the vocabulary indices tried for the first
    facet; the thread splitter uses it to partition the tree.
    """
    poset = spec.poset
    ext = poset.linear_extension()
    facets = [f for f in ext if poset.codim(f) == 1]
    vocab = primitive_vectors_in_box(spec.k, spec.entry_bound)
    pos = {f: i for i, f in enumerate(facets)}
    # Every face is checked the moment its last facet gets a label.
    check_at: dict[int, list[tuple[str, list[int]]]] = {i: [] for i in range(len(facets))}
    for f in poset.ids():
        star = poset.facets_containing(f)
        if not star:
            continue
        positions = [pos[x] for x in star]
        check_at[max(positions)].append((f, positions))

    out: list[Labeling] = []
    chosen: list[tuple[int, ...]] = []

    def extend(i: int) -> None:
        if i == len(facets):
            out.append(tuple(chosen))
            return
        choices = first_choices if (i == 0 and first_choices is not None) else range(len(vocab))
        for vi in choices:
            vec = vocab[vi].coords
            chosen.append(vec)
            ok = True
            for _, positions in check_at[i]:
                rows = tuple(chosen[p] for p in positions)
                if len(rows) > spec.k or not is_direct_summand(rows):
                    ok = False
                    break
            if ok:
                extend(i + 1)
            chosen.pop()

    if not facets:
        return [()]
    extend(0)
    return out


def enumerate_census(spec: CensusSpec, threads: int = 1) -> CensusResult:
    """Run the census; deterministic for any thread count."""
    report = spec.poset.validate()
    if not report.valid:
        raise CensusError("poset is invalid; run validation for details")
    if threads < 1:
        raise CensusError("thread count must be >= 1")
    ext = spec.poset.linear_extension()
    facets = tuple(f for f in ext if spec.poset.codim(f) == 1)
    vocab = primitive_vectors_in_box(spec.k, spec.entry_bound)
    estimate = len(vocab) ** len(facets)
    if estimate > spec.budget:
        raise BudgetExceededError(estimate, spec.budget)

    if threads == 1 or not facets:
        labelings = enumerate_labelings(spec)
    else:
        chunks = [list(range(i, len(vocab), threads)) for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(lambda ch: enumerate_labelings(spec, ch), chunks)
            )
        merged = [lab for part in results for lab in part]
        labelings = sorted(merged)

    classes = _deduplicate(spec, facets, labelings)
    faces_per_codim: dict[int, int] = {}
    for f in spec.poset.ids():
        c = spec.poset.codim(f)
        faces_per_codim[c] = faces_per_codim.get(c, 0) + 1
    euler_codim = min(spec.k, spec.poset.dim_orbit)
    return CensusResult(
        total_valid=len(labelings),
        classes=classes,
        faces_per_codim=faces_per_codim,
        euler_count=faces_per_codim.get(euler_codim, 0),
        facet_order=facets,
    )


def _deduplicate(
    spec: CensusSpec, facets: tuple[str, ...], labelings: list[Labeling]
) -> tuple[CensusClass, ...]:
    if spec.dedup == "none":
        return tuple(CensusClass(lab, 1) for lab in labelings)

    def pair_of(lab: Labeling) -> CharacteristicPair:
        return CharacteristicPair(
            spec.poset,
            spec.k,
            {f: PrimitiveVector(v) for f, v in zip(facets, lab)},
        )

    groups: dict[object, list[Labeling]]
    if len(spec.poset) <= CANONICAL_FORM_MAX_FACES:
        groups = {}
        for lab in labelings:
            key = canonical_form(pair_of(lab), spec.dedup)
            groups.setdefault(key, []).append(lab)
        buckets = list(groups.values())
    else:
        decide = strong_equivalence if spec.dedup == "strong" else weak_equivalence
        buckets = []
        reps: list[CharacteristicPair] = []
        for lab in labelings:
            cp = pair_of(lab)
            for bucket, rep in zip(buckets, reps):
                if decide(rep, cp).equivalent:
                    bucket.append(lab)
                    break
            else:
                buckets.append([lab])
                reps.append(cp)
    classes = [CensusClass(min(bucket), len(bucket)) for bucket in buckets]
    return tuple(sorted(classes, key=lambda c: c.representative))


def orbit_count_invariants(cp: CharacteristicPair) -> dict:
    """Face counts per codimension; fixed-point count in the half-dimensional
    case (d == k), where vertices of the orbit space are the fixed points."""
    faces_per_codim: dict[int, int] = {}
    for f in cp.poset.ids():
        c = cp.poset.codim(f)
        faces_per_codim[c] = faces_per_codim.get(c, 0) + 1
    fixed_points = None
    if cp.dim_orbit == cp.k:
        fixed_points = faces_per_codim.get(cp.dim_orbit, 0)
    return {
        "faces_per_codim": faces_per_codim,
        "fixed_points": fixed_points,
    }
