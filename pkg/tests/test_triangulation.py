import numpy as np
import pytest

from pl4torsion.errors import MoveRejected, ValidationError
from pl4torsion.triangulation import (
    Triangulation,
    apply_move,
    boundary_5simplex_s4,
    build_skeleton,
    canonical_s4,
    check_realization,
    move_1_5,
    move_2_4,
    move_3_3,
    move_4_2,
    move_5_1,
    move_candidates,
    validate_closed_oriented,
)

Q = 1e-4


def faces(t):
    sk = build_skeleton(t)
    return [set(sk.faces(d)) for d in range(4)] + [set(t.canonical())]


def assert_record_matches(t0, t1, rec):
    f0, f1 = faces(t0), faces(t1)
    for d in range(4):
        assert set(map(tuple, rec.created[d])) == f1[d] - f0[d]
        assert set(map(tuple, rec.deleted[d])) == f0[d] - f1[d]


def first_applicable(t, r, kind, rng=None):
    for arg in move_candidates(t)[kind]:
        try:
            return apply_move(t, r, kind, arg, rng or np.random.default_rng(0), min_quality=Q)
        except MoveRejected:
            continue
    raise AssertionError(f"no applicable {kind} move")


def test_counts(s4, s4b):
    assert build_skeleton(s4[0]).counts == (5, 10, 10, 5, 2)
    assert build_skeleton(s4b[0]).counts == (6, 15, 20, 15, 6)


def test_canonical_geometry(s4):
    t, r = s4
    sk = build_skeleton(t)
    L = sorted(r.squared_length(*e) for e in sk.edges)
    assert L == [1.0] * 4 + [2.0] * 6
    for verts, _ in t.simplices:
        assert abs(r.volume(verts)) == pytest.approx(1 / 24)


def test_validation_cases(s4, s4b):
    assert validate_closed_oriented(s4[0]).valid
    assert validate_closed_oriented(s4b[0]).valid
    v = tuple("ABCDE")
    same = Triangulation.from_simplices(v, [(v, 1), (v, 1)])
    rep = validate_closed_oriented(same)
    assert not rep.valid
    assert len(rep.violating_tetrahedra) == 5
    single = Triangulation.from_simplices(v, [(v, 1)])
    rep = validate_closed_oriented(single)
    assert not rep.valid
    assert any("not closed" in p for p in rep.problems)


def test_duplicate_simplex_rejected_by_skeleton():
    v = tuple("ABCDE")
    with pytest.raises(ValidationError):
        build_skeleton(Triangulation.from_simplices(v, [(v, 1), (v, 1)]))


def test_from_simplices_normalizes_orientation():
    v = tuple("ABCDE")
    t = Triangulation.from_simplices(v, [(("B", "A", "C", "D", "E"), 1)])
    assert t.simplices == ((v, -1),)


def test_move_1_5_counts_and_round_trip(s4):
    t, r = s4
    t1, r1, rec = move_1_5(t, r, 0, [0.2] * 5)
    assert build_skeleton(t1).counts == (6, 15, 20, 15, 6)
    assert [len(x) for x in rec.created] == [1, 5, 10, 10, 5]
    assert validate_closed_oriented(t1).valid
    check_realization(t1, r1)
    assert_record_matches(t, t1, rec)
    (f,) = rec.created[0][0]
    t2, r2, back = move_5_1(t1, r1, f)
    assert t2.same_as(t)
    assert t2.canonical() == t.canonical()
    assert back.kind == "5-1"
    assert back.created == rec.deleted and back.deleted == rec.created
    assert back.created_volumes == pytest.approx(rec.deleted_volumes)
    assert sorted(back.deleted_volumes) == pytest.approx(sorted(rec.created_volumes))


def test_move_1_5_rejections(s4):
    t, r = s4
    with pytest.raises(MoveRejected):
        move_1_5(t, r, 0, [0.5, 0.5, 0, 0, 0])
    with pytest.raises(MoveRejected):
        move_1_5(t, r, 5, [0.2] * 5)
    with pytest.raises(MoveRejected):
        move_1_5(t, r, 0, [0.96, 0.01, 0.01, 0.01, 0.01], min_quality=1e-3)


def test_move_5_1_rejected_on_canonical(s4):
    t, r = s4
    for v in t.vertices:
        with pytest.raises(MoveRejected):
            move_5_1(t, r, v)
    assert move_candidates(t)["5-1"] == []


def test_move_2_4_and_back(s4b):
    t, r = s4b
    t1, r1, _ = move_1_5(t, r, 0, [0.2] * 5)
    t2, r2, rec = first_applicable(t1, r1, "2-4")
    n1, n2 = build_skeleton(t1).counts, build_skeleton(t2).counts
    assert n2[1] == n1[1] + 1 and n2[2] == n1[2] + 4
    assert n2[4] == n1[4] + 2
    assert validate_closed_oriented(t2).valid
    assert_record_matches(t1, t2, rec)
    assert len(rec.created_lengths) == 1 and len(rec.created_areas) == 4
    (ab,) = rec.created[1]
    t3, r3, back = move_4_2(t2, r2, ab)
    assert t3.same_as(t1)
    for d in range(5):
        assert set(back.created[d]) == set(rec.deleted[d])


def test_move_4_2_then_2_4(s4b):
    t, r = s4b
    t1, r1, _ = move_1_5(t, r, 0, [0.2] * 5)
    t2, r2, _ = first_applicable(t1, r1, "2-4")
    t3, r3, rec = first_applicable(t2, r2, "4-2")
    assert validate_closed_oriented(t3).valid
    (tet,) = rec.created[3]
    t4, _, _ = move_2_4(t3, r3, tet)
    assert t4.same_as(t2)


def test_move_3_3(s4b):
    t, r = s4b
    t1, r1, _ = move_1_5(t, r, 0, [0.2] * 5)
    t2, r2, _ = first_applicable(t1, r1, "2-4")
    t3, r3, rec = first_applicable(t2, r2, "3-3")
    assert build_skeleton(t3).counts == build_skeleton(t2).counts
    (abc,), (def_,) = rec.deleted[2], rec.created[2]
    sk = build_skeleton(t3)
    assert abc not in sk.triangle_index and def_ in sk.triangle_index
    assert_record_matches(t2, t3, rec)
    t4, _, _ = move_3_3(t3, r3, def_)
    assert t4.same_as(t2)


def test_move_preconditions(s4, s4b):
    t, r = s4
    with pytest.raises(MoveRejected):
        move_2_4(t, r, ("A", "B", "C", "D"))
    t, r = s4b
    with pytest.raises(MoveRejected):
        move_4_2(t, r, ("A", "B"))
    with pytest.raises(MoveRejected):
        move_3_3(t, r, ("A", "B", "C"))


@pytest.mark.parametrize("seed", range(10))
def test_random_moves_keep_manifold(seed, builtin):
    t, r = builtin
    rng = np.random.default_rng(seed)
    for _ in range(8):
        cands = move_candidates(t)
        kinds = [k for k, v in cands.items() if v]
        kind = kinds[rng.integers(len(kinds))]
        arg = cands[kind][rng.integers(len(cands[kind]))]
        try:
            t1, r1, rec = apply_move(t, r, kind, arg, rng, min_quality=Q)
        except MoveRejected:
            continue
        assert validate_closed_oriented(t1).valid
        n = build_skeleton(t1).counts
        assert 5 * n[4] == 2 * n[3]
        check_realization(t1, r1)
        assert_record_matches(t, t1, rec)
        t, r = t1, r1
