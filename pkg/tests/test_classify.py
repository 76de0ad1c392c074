import random

import pytest

from lstorus.charpair import CharacteristicPair, relabel, rename_faces
from lstorus.classify import (
    CanonicalFormError,
    IsoWitness,
    canonical_form,
    has_four_dim_faces,
    strong_equivalence,
    verify_witness,
    weak_equivalence,
)
from lstorus.fixtures import (
    cp_pair,
    cube_poset,
    half_plane_pair,
    hirzebruch_pair,
    pentagon_poset,
    square_pair,
)
from lstorus.lattice import (
    PrimitiveVector,
    apply_auto,
    mat_mul,
    random_unimodular,
)

from oracles import exhaustive_pair_equivalent


SQUARE_STD = [(1, 0), (0, 1), (1, 0), (0, 1)]


def shuffled_copy(cp, rng):
    """Same pair with fresh ids, exercising id-independence of everything."""
    ids = cp.poset.ids()
    perm = ids[:]
    rng.shuffle(perm)
    return rename_faces(cp, {f: f"n{i}_{p}" for i, (f, p) in enumerate(zip(ids, perm))})


def test_pair_vs_itself_identity_witness():
    cp = cp_pair(2)
    verdict = strong_equivalence(cp, cp)
    assert verdict.equivalent
    assert verdict.witness.phi == {f: f for f in cp.poset.ids()}
    assert verify_witness(cp, cp, verdict.witness, "strong")


def test_square_cyclic_relabeling_equivalent():
    a = square_pair(SQUARE_STD)
    b = square_pair([(0, 1), (1, 0), (0, 1), (1, 0)])
    verdict = strong_equivalence(a, b)
    assert verdict.equivalent
    assert verify_witness(a, b, verdict.witness, "strong")
    assert exhaustive_pair_equivalent(a, b, "strong")


def test_square_distinct_multisets_not_equivalent():
    a = square_pair(SQUARE_STD)
    b = square_pair([(1, 0), (0, 1), (1, 0), (1, 1)])
    verdict = strong_equivalence(a, b)
    assert not verdict.equivalent
    assert not exhaustive_pair_equivalent(a, b, "strong")
    # Also weakly inequivalent: 2 distinct labels vs 3 is a GL-invariant.
    weak = weak_equivalence(a, b)
    assert not weak.equivalent
    assert "class size" in weak.reason


def test_weak_shear_equivalent():
    a = square_pair(SQUARE_STD)
    shear = ((1, 1), (0, 1))
    b = relabel(a, shear)
    verdict = weak_equivalence(a, b)
    assert verdict.equivalent
    assert verdict.witness.auto is not None
    assert verify_witness(a, b, verdict.witness, "weak")
    # Strong equivalence must fail: (1,1) is not among the original labels.
    assert not strong_equivalence(a, b).equivalent


def test_strong_implies_weak():
    a = square_pair(SQUARE_STD)
    b = square_pair([(0, 1), (1, 0), (0, 1), (1, 0)])
    assert strong_equivalence(a, b).equivalent
    assert weak_equivalence(a, b).equivalent


def test_mismatched_k_is_verdict_not_exception():
    a = half_plane_pair(k=2)
    b = half_plane_pair(k=3)
    verdict = strong_equivalence(a, b)
    assert not verdict.equivalent
    assert "k differs" in verdict.reason


def test_mismatched_dim_orbit():
    tri = cp_pair(2)
    half = CharacteristicPair(
        half_plane_pair(2).poset, 2, {"E": PrimitiveVector((1, 0))}
    )
    verdict = strong_equivalence(tri, half)
    assert not verdict.equivalent
    assert verdict.reason


def test_verify_witness_rejects_identity_between_distinct():
    a = square_pair(SQUARE_STD)
    b = square_pair([(1, 0), (0, 1), (1, 2), (0, 1)])
    ident = IsoWitness(phi={f: f for f in a.poset.ids()})
    assert not verify_witness(a, b, ident, "strong")


def test_verify_witness_rejects_wrong_auto():
    a = square_pair(SQUARE_STD)
    b = relabel(a, ((1, 1), (0, 1)))
    verdict = weak_equivalence(a, b)
    assert verdict.equivalent
    bad = IsoWitness(phi=verdict.witness.phi, auto=((1, 0), (0, 1)))
    assert not verify_witness(a, b, bad, "weak")


def test_verify_witness_rejects_malformed():
    a = square_pair(SQUARE_STD)
    assert not verify_witness(a, a, IsoWitness(phi={}), "strong")
    partial = {f: f for f in a.poset.ids()[:-1]}
    assert not verify_witness(a, a, IsoWitness(phi=partial), "strong")
    ident = {f: f for f in a.poset.ids()}
    assert not verify_witness(a, a, IsoWitness(phi=ident), "weak")  # no auto
    assert not verify_witness(
        a, a, IsoWitness(phi=ident, auto=((2, 0), (0, 1))), "weak"
    )
    assert not verify_witness(a, a, IsoWitness(phi=ident), "sideways")


def test_decider_matches_oracle_randomized():
    rng = random.Random(101)
    fixtures = [
        cp_pair(2),
        square_pair(SQUARE_STD),
        square_pair([(1, 0), (0, 1), (1, 2), (0, 1)]),
        hirzebruch_pair(1),
        half_plane_pair(),
        CharacteristicPair(
            pentagon_poset(),
            2,
            {
                "E0": (1, 0),
                "E1": (0, 1),
                "E2": (1, 0),
                "E3": (0, 1),
                "E4": (1, 1),
            },
        ),
    ]
    for _ in range(40):
        base = rng.choice(fixtures)
        mode = rng.choice(["strong", "weak"])
        other = shuffled_copy(base, rng)
        if mode == "weak" and rng.random() < 0.7:
            other = relabel(other, random_unimodular(base.k, rng))
        if rng.random() < 0.5:
            # Mutate one facet label to a different primitive vector.
            labels = other.labels()
            facet = rng.choice(other.poset.facets())
            for candidate in [(1, 2), (2, 1), (1, 3), (1, 1), (0, 1), (1, 0)]:
                vec = PrimitiveVector(candidate)
                if vec != labels[facet]:
                    labels[facet] = vec
                    break
            other = CharacteristicPair(other.poset, other.k, labels, other.attestations)
        decide = strong_equivalence if mode == "strong" else weak_equivalence
        verdict = decide(base, other)
        assert verdict.equivalent == exhaustive_pair_equivalent(base, other, mode)
        if verdict.equivalent:
            assert verify_witness(base, other, verdict.witness, mode)


def test_verdict_symmetry_and_transitivity():
    rng = random.Random(103)
    for mode in ("strong", "weak"):
        for _ in range(10):
            a = hirzebruch_pair(rng.randrange(-2, 3))
            b = shuffled_copy(a, rng)
            c = shuffled_copy(b, rng)
            if mode == "weak":
                b = relabel(b, random_unimodular(2, rng))
                c = relabel(c, random_unimodular(2, rng))
            decide = strong_equivalence if mode == "strong" else weak_equivalence
            vab, vbc, vac = decide(a, b), decide(b, c), decide(a, c)
            vba = decide(b, a)
            assert vab.equivalent and vbc.equivalent and vac.equivalent
            assert vba.equivalent
            composed_phi = {f: vbc.witness.phi[v] for f, v in vab.witness.phi.items()}
            if mode == "strong":
                composed = IsoWitness(phi=composed_phi)
            else:
                composed = IsoWitness(
                    phi=composed_phi,
                    auto=mat_mul(vbc.witness.auto, vab.witness.auto),
                )
            assert verify_witness(a, c, composed, mode)


def test_gl_invariance_weak_always_equivalent():
    rng = random.Random(107)
    for cp in (cp_pair(2), square_pair(SQUARE_STD), hirzebruch_pair(2), half_plane_pair()):
        for _ in range(25):
            a = random_unimodular(cp.k, rng)
            assert weak_equivalence(cp, relabel(cp, a)).equivalent


def test_gl_strong_iff_subtorus_fixing_on_constant_pair():
    # With all facets sharing one label, strong equivalence with the
    # relabeled pair holds exactly when A fixes that label's subtorus.
    cp = square_pair([(1, 0), (1, 0), (1, 0), (1, 0)])
    rng = random.Random(109)
    hits = {True: 0, False: 0}
    for _ in range(120):
        a = random_unimodular(2, rng)
        fixes = apply_auto(a, PrimitiveVector((1, 0))) == PrimitiveVector((1, 0))
        verdict = strong_equivalence(cp, relabel(cp, a))
        assert verdict.equivalent == fixes
        hits[fixes] += 1
    assert hits[True] > 0 and hits[False] > 0


def test_gl_strong_fixing_implies_equivalent():
    rng = random.Random(113)
    cp = cp_pair(2)
    for _ in range(60):
        a = random_unimodular(2, rng)
        labels = cp.labels()
        if all(apply_auto(a, v) == v for v in labels.values()):
            assert strong_equivalence(cp, relabel(cp, a)).equivalent
        else:
            verdict = strong_equivalence(cp, relabel(cp, a))
            assert verdict.equivalent == exhaustive_pair_equivalent(
                cp, relabel(cp, a), "strong"
            )


def test_hypotheses_and_conclusion():
    a = cp_pair(2)  # fully attested fixture
    verdict = strong_equivalence(a, a)
    assert verdict.hypotheses["faces_contractible"]
    assert "equivariantly diffeomorphic" in verdict.conclusion
    bare = CharacteristicPair(a.poset, a.k, a.labels())
    verdict = strong_equivalence(bare, bare)
    assert not verdict.hypotheses["faces_contractible"]
    assert "needs" in verdict.conclusion
    assert not has_four_dim_faces(a)
    assert verdict.hypotheses["four_faces_vacuous"]


def test_canonical_form_equal_iff_equivalent_strong():
    rng = random.Random(127)
    pairs = [
        square_pair(SQUARE_STD),
        square_pair([(0, 1), (1, 0), (0, 1), (1, 0)]),
        square_pair([(1, 0), (0, 1), (1, 2), (0, 1)]),
        square_pair([(1, 0), (0, 1), (1, 0), (1, 1)]),
        hirzebruch_pair(3),
    ]
    for x in pairs:
        for y in pairs:
            same = canonical_form(x, "strong") == canonical_form(y, "strong")
            assert same == strong_equivalence(x, y).equivalent, (x, y)
    for cp in pairs:
        assert canonical_form(shuffled_copy(cp, rng), "strong") == canonical_form(
            cp, "strong"
        )


def test_canonical_form_weak():
    rng = random.Random(131)
    base = square_pair(SQUARE_STD)
    twisted = relabel(shuffled_copy(base, rng), random_unimodular(2, rng))
    assert canonical_form(base, "weak") == canonical_form(twisted, "weak")
    other = square_pair([(1, 0), (0, 1), (1, 0), (1, 1)])
    assert canonical_form(base, "weak") != canonical_form(other, "weak")
    # Strong classes refine weak classes.
    assert canonical_form(base, "strong") != canonical_form(twisted, "strong")


def test_canonical_form_weak_matches_decider_randomized():
    rng = random.Random(139)
    bases = [
        square_pair(SQUARE_STD),
        square_pair([(1, 0), (0, 1), (1, 2), (0, 1)]),
        square_pair([(1, 0), (0, 1), (1, 3), (0, 1)]),
        square_pair([(1, 0), (0, 1), (1, 0), (1, 1)]),
        CharacteristicPair(
            pentagon_poset(),
            2,
            {"E0": (1, 0), "E1": (0, 1), "E2": (1, 0), "E3": (0, 1), "E4": (1, 1)},
        ),
        CharacteristicPair(
            pentagon_poset(),
            2,
            {"E0": (1, 0), "E1": (0, 1), "E2": (1, 1), "E3": (0, 1), "E4": (1, 1)},
        ),
        cp_pair(2),
    ]
    pool = []
    for cp in bases:
        pool.append(cp)
        pool.append(relabel(shuffled_copy(cp, rng), random_unimodular(2, rng)))
    forms = {id(cp): canonical_form(cp, "weak") for cp in pool}
    for x in pool:
        for y in pool:
            same_form = forms[id(x)] == forms[id(y)]
            assert same_form == weak_equivalence(x, y).equivalent, (
                x.labels(),
                y.labels(),
            )


def test_canonical_form_weak_rank_deficient():
    rng = random.Random(137)
    base = half_plane_pair(3)
    twisted = relabel(base, random_unimodular(3, rng))
    assert canonical_form(base, "weak") == canonical_form(twisted, "weak")


def test_rank_deficient_strip_cases():
    from lstorus.faceposet import FacePoset
    from oracles import exhaustive_pair_equivalent as oracle

    strip = FacePoset(
        [("T", 0), ("E0", 1), ("E1", 1)], [("E0", "T"), ("E1", "T")], 2
    )
    a = CharacteristicPair(strip, 2, {"E0": (1, 0), "E1": (1, 0)})
    b = CharacteristicPair(strip, 2, {"E0": (0, 1), "E1": (0, 1)})
    c = CharacteristicPair(strip, 2, {"E0": (1, 0), "E1": (0, 1)})
    verdict = weak_equivalence(a, b)
    assert verdict.equivalent
    assert verdict.witness_unique is False  # labels span rank 1 < k
    assert verify_witness(a, b, verdict.witness, "weak")
    assert oracle(a, b, "weak")
    assert not weak_equivalence(a, c).equivalent
    assert not oracle(a, c, "weak")
    assert not strong_equivalence(a, b).equivalent
    assert canonical_form(a, "weak") == canonical_form(b, "weak")
    assert canonical_form(a, "weak") != canonical_form(c, "weak")


def test_canonical_form_size_bound():
    poset = cube_poset(4)
    labels = {}
    for f in poset.facets():
        axis = next(i for i, part in enumerate(f.split("|")) if part != "T")
        labels[f] = PrimitiveVector(tuple(1 if j == axis else 0 for j in range(4)))
    cp = CharacteristicPair(poset, 4, labels)
    with pytest.raises(CanonicalFormError):
        canonical_form(cp, "strong")
    # The deciders stay usable above the canonical-form bound.
    assert strong_equivalence(cp, cp).equivalent


def test_canonical_form_mode_validation():
    with pytest.raises(ValueError):
        canonical_form(cp_pair(2), "loose")
