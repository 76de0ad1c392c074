"""Characteristic pairs: facet-labeled face posets.

A pair assigns a primitive weight vector in Z^k to every facet.  The deeper
strata get their isotropy subtorus from the facets through them, so labels
are stored on facets only and extended by saturation.  The pair is valid
when the labels at every codimension-n face span a rank-n direct summand,
which is exactly the condition for a standard linear effective local chart.

The three attestation flags record analytic hypotheses that no finite input
can certify (existence of sections, contractibility of closed faces, and the
matching of four-dimensional faces after smoothing); they are echoed into
every verdict so reports state exactly what has been assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .faceposet import FacePoset, ValidityReport, Violation
from .lattice import (
    Matrix,
    PrimitiveVector,
    Subtorus,
    apply_auto,
    is_direct_summand,
    saturate,
)


class CharPairError(ValueError):
    """Structurally broken characteristic pair input."""


@dataclass(frozen=True)
class Attestations:
    sections_exist: bool = False
    faces_contractible: bool = False
    four_faces_matched: bool = False

    def as_dict(self) -> dict[str, bool]:
        return {
            "sections_exist": self.sections_exist,
            "faces_contractible": self.faces_contractible,
            "four_faces_matched": self.four_faces_matched,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, bool]) -> "Attestations":
        known = {"sections_exist", "faces_contractible", "four_faces_matched"}
        extra = set(d) - known
        if extra:
            raise CharPairError(f"unknown attestation keys {sorted(extra)}")
        vals = {}
        for key in known:
            v = d.get(key, False)
            if not isinstance(v, bool):
                raise CharPairError(f"attestation {key} must be a boolean")
            vals[key] = v
        return cls(**vals)


class CharacteristicPair:
    """A face poset with torus rank k and a primitive label on every facet."""

    def __init__(
        self,
        poset: FacePoset,
        k: int,
        facet_lambda: Mapping[str, PrimitiveVector | Sequence[int]],
        attestations: Attestations = Attestations(),
    ):
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise CharPairError(f"torus rank must be a positive integer, got {k!r}")
        facets = poset.facets()
        labels: dict[str, PrimitiveVector] = {}
        for fid, value in facet_lambda.items():
            if fid not in facets:
                raise CharPairError(f"label on {fid!r}, which is not a facet")
            vec = value if isinstance(value, PrimitiveVector) else PrimitiveVector(value)
            if vec.k != k:
                raise CharPairError(
                    f"label on {fid!r} has length {vec.k}, expected {k}"
                )
            labels[fid] = vec
        missing = [f for f in facets if f not in labels]
        if missing:
            raise CharPairError(f"missing facet label for {missing}")
        self.poset = poset
        self.k = k
        self.attestations = attestations
        self._labels = labels

    @property
    def dim_orbit(self) -> int:
        return self.poset.dim_orbit

    def label(self, facet: str) -> PrimitiveVector:
        if facet not in self._labels:
            raise CharPairError(f"{facet!r} is not a labeled facet")
        return self._labels[facet]

    def labels(self) -> dict[str, PrimitiveVector]:
        return dict(self._labels)

    def star_matrix(self, fid: str) -> Matrix:
        """Labels of the facets containing fid, stacked in facet-id order."""
        return tuple(self._labels[f].coords for f in self.poset.facets_containing(fid))

    def __repr__(self) -> str:
        return f"CharacteristicPair(k={self.k}, {self.poset!r})"


def lambda_of_face(cp: CharacteristicPair, fid: str) -> Subtorus:
    """Isotropy subtorus of the stratum fid: saturation of its facet labels."""
    rows = cp.star_matrix(fid)
    if not rows:
        return Subtorus.trivial(cp.k)
    return saturate(rows)


def validate_characteristic(cp: CharacteristicPair) -> ValidityReport:
    """Check the direct-summand condition at every face.

    The underlying poset must already be valid; niceness is what makes the
    facet stars the right data to test.
    """
    poset_report = cp.poset.validate()
    if not poset_report.valid:
        raise CharPairError(
            "poset is invalid; validate the poset before the labeling"
        )
    violations: list[Violation] = []
    for fid in cp.poset.ids():
        n = cp.poset.codim(fid)
        if n == 0:
            continue
        if n > cp.k:
            violations.append(
                Violation(
                    "codim-rank",
                    (fid,),
                    f"codimension {n} exceeds torus rank {cp.k}",
                )
            )
            continue
        rows = cp.star_matrix(fid)
        if not is_direct_summand(rows):
            violations.append(
                Violation(
                    "summand",
                    (fid,),
                    f"facet labels {list(rows)} do not span a rank-{n} "
                    f"direct summand",
                )
            )
    return ValidityReport(not violations, tuple(violations))


def is_valid_pair(cp: CharacteristicPair) -> bool:
    return cp.poset.validate().valid and validate_characteristic(cp).valid


def local_signature(cp: CharacteristicPair, fid: str) -> tuple[int, int, int]:
    """Chart dimensions (n, k - n, d - n) at the stratum fid."""
    n = cp.poset.codim(fid)
    if n > cp.k or n > cp.dim_orbit:
        raise CharPairError(
            f"face {fid!r} has codimension {n} beyond the local model bounds "
            f"(k={cp.k}, d={cp.dim_orbit}); the pair is invalid"
        )
    return (n, cp.k - n, cp.dim_orbit - n)


def relabel(cp: CharacteristicPair, auto: Matrix) -> CharacteristicPair:
    """Apply a torus automorphism A to every facet label."""
    return CharacteristicPair(
        cp.poset,
        cp.k,
        {f: apply_auto(auto, v) for f, v in cp.labels().items()},
        cp.attestations,
    )


def rename_faces(cp: CharacteristicPair, mapping: Mapping[str, str]) -> CharacteristicPair:
    """Rebuild the pair with renamed face ids (mapping must be a bijection)."""
    ids = cp.poset.ids()
    if sorted(mapping) != ids or len(set(mapping.values())) != len(ids):
        raise CharPairError("rename mapping must be a bijection on all faces")
    poset = FacePoset(
        [(mapping[f], cp.poset.codim(f)) for f in ids],
        [(mapping[lo], mapping[up]) for lo, up in cp.poset.covers()],
        cp.poset.dim_orbit,
    )
    return CharacteristicPair(
        poset,
        cp.k,
        {mapping[f]: v for f, v in cp.labels().items()},
        cp.attestations,
    )
