"""Cubes: face relations, compositions, odd/even composites, HCL harnesses."""
import itertools

import pytest

from cubal import models
from cubal.errors import NotComposable
from cubal.models import indiscrete_groupoid, square_key
from cubal.morphisms import validate_morphism
from cubal.shells import (
    Cube3,
    Shell2,
    all_cubes,
    boundary_shell,
    compose_cubes,
    cube_ok,
    degenerate_cube,
    even_composite,
    hcl_agreement,
    hcl_prime_holds,
    is_commutative,
    map_cube,
    odd_composite,
    shell_commutes,
    theorem25_harness,
    triple_interchange_check,
)


def brute_force_cube_count_z2():
    # independent count: 12 boundary edges over Z2, one parity equation per face
    count = 0
    for bits in itertools.product(range(2), repeat=12):
        e = dict(zip(["tmm", "tmp", "tpm", "tpp", "fmm", "fmp", "fpm", "fpp", "gmm", "gmp", "gpm", "gpp"], bits))
        faces = [
            e["tmm"] + e["tmp"] + e["fmm"] + e["fmp"],  # f1m
            e["tpm"] + e["tpp"] + e["fpm"] + e["fpp"],  # f1p
            e["tmm"] + e["tpm"] + e["gmm"] + e["gmp"],  # f2m
            e["tmp"] + e["tpp"] + e["gpm"] + e["gpp"],  # f2p
            e["fmm"] + e["fpm"] + e["gmm"] + e["gpm"],  # f3m
            e["fmp"] + e["fpp"] + e["gmp"] + e["gpp"],  # f3p
        ]
        if all(f % 2 == 0 for f in faces):
            count += 1
    return count


def test_cube_enumeration_matches_brute_force(zz2):
    cubes = all_cubes(zz2)
    assert len(cubes) == brute_force_cube_count_z2() == 128
    assert all(cube_ok(zz2, c) for c in cubes)


def test_boundary_shell_examples(zz2):
    s = square_key("1", "0", "1", "0")
    assert boundary_shell(zz2, s) == Shell2(left="1", bottom="0", top="1", right="0")
    e1 = zz2.eps1["1"]
    assert boundary_shell(zz2, e1) == Shell2(left="0", bottom="1", top="1", right="0")
    dd = zz2.eps1["0"]
    assert boundary_shell(zz2, dd) == Shell2(left="0", bottom="0", top="0", right="0")


def test_shell_commutes_z2_arithmetic(zz2):
    assert shell_commutes(zz2, Shell2(left="1", bottom="1", top="0", right="0"))
    assert not shell_commutes(zz2, Shell2(left="1", bottom="0", top="0", right="0"))
    assert shell_commutes(zz2, boundary_shell(zz2, zz2.eps1["0"]))


def test_compose_cubes_identity(zz2):
    for c in all_cubes(zz2)[::17]:
        for d in (1, 2, 3):
            ident = degenerate_cube(zz2, d, c.face(d, "+"))
            assert compose_cubes(zz2, d, c, ident) == c
            pre = degenerate_cube(zz2, d, c.face(d, "-"))
            assert compose_cubes(zz2, d, pre, c) == c


def test_compose_cubes_dir3_face_rule(zz2):
    # direction 3 composes the direction-1 and direction-2 faces with +2
    cubes = all_cubes(zz2)
    pairs = [
        (a, b) for a in cubes for b in cubes if a.f3p == b.f3m
    ]
    a, b = pairs[5]
    out = compose_cubes(zz2, 3, a, b)
    assert out.f1m == zz2.compose2[(a.f1m, b.f1m)]
    assert out.f2p == zz2.compose2[(a.f2p, b.f2p)]
    assert out.f3m == a.f3m and out.f3p == b.f3p


def test_compose_cubes_rejects_mismatch(zz2):
    cubes = all_cubes(zz2)
    a = cubes[0]
    b = next(c for c in cubes if c.f1m != a.f1p)
    with pytest.raises(NotComposable):
        compose_cubes(zz2, 1, a, b)


def test_all_dd_cube_composites_are_dd(zz2):
    dd = zz2.eps1["0"]
    c = Cube3(dd, dd, dd, dd, dd, dd)
    assert odd_composite(zz2, c) == dd
    assert even_composite(zz2, c) == dd
    assert is_commutative(zz2, c)


def test_odd_even_share_boundary_shell_exhaustive(zz2):
    for c in all_cubes(zz2):
        assert boundary_shell(zz2, odd_composite(zz2, c)) == boundary_shell(
            zz2, even_composite(zz2, c)
        )


def test_every_zz2_cube_is_commutative(zz2):
    # in a commuting-squares model a square is its shell, and the two
    # composites always share a shell, so no non-commutative cube can exist
    assert all(is_commutative(zz2, c) for c in all_cubes(zz2))


def test_commutativity_in_box_matches_shell_oracle(box_ind2):
    # direct-evaluation oracle for commuting-squares models
    for c in all_cubes(box_ind2)[::7]:
        odd = odd_composite(box_ind2, c)
        even = even_composite(box_ind2, c)
        assert (odd == even) == (
            box_ind2.squares[odd] == box_ind2.squares[even]
        )
        assert is_commutative(box_ind2, c)


def test_shift_commutativity_matches_xor_oracle(shift2):
    val = lambda s: int(s[1:])
    seen_non_commutative = 0
    for c in all_cubes(shift2):
        odd = (val(c.f1m) + val(c.f3m) + val(c.f2p)) % 2
        even = (val(c.f2m) + val(c.f1p) + val(c.f3p)) % 2
        assert is_commutative(shift2, c) == (odd == even)
        seen_non_commutative += odd != even
    assert seen_non_commutative == 32  # frozen witness count


def test_hcl_prime_agrees_everywhere(zz2, shift2):
    for model in (zz2, shift2):
        for c in all_cubes(model):
            assert hcl_prime_holds(model, c) == is_commutative(model, c)


def test_hcl_agreement_report(zz2):
    rep = hcl_agreement(zz2, exhaustive=True)
    assert rep.ok
    assert rep.checked_count["hcl-agreement"] == 128
    assert rep.checked_count["shared-boundary-shell"] == 128


def test_hcl_agreement_sampled_above_cutoff(box_ind3):
    rep = hcl_agreement(box_ind3, samples=150, seed=1)
    assert rep.ok
    assert rep.checked_count["hcl-agreement"] == 150


def test_solver_confirms_derived_slot_species(zz2):
    # the thin slots the solver resolves coincide with the derived table
    for c in all_cubes(zz2)[::11]:
        assert odd_composite(zz2, c, via_solver=True) == odd_composite(zz2, c)
        assert even_composite(zz2, c, via_solver=True) == even_composite(zz2, c)
        assert hcl_prime_holds(zz2, c, via_solver=True) == hcl_prime_holds(zz2, c)


def test_theorem25_exhaustive_zz2(zz2):
    rep = theorem25_harness(zz2)
    assert rep.ok
    assert rep.checked_count["closure-dir1"] == 2048
    assert rep.checked_count["closure-dir2"] == 2048
    assert rep.checked_count["closure-dir3"] == 2048


def test_theorem25_sampled_indiscrete(box_ind3):
    rep = theorem25_harness(box_ind3, samples=300, seed=0)
    assert rep.ok
    assert all(n == 300 for n in rep.checked_count.values())


def test_theorem25_closure_on_shift(shift2):
    rep = theorem25_harness(shift2)
    assert rep.ok


def test_triple_interchange_zz2(zz2):
    rep = triple_interchange_check(zz2, samples=200, seed=0)
    assert rep.ok
    assert all(
        rep.checked_count.get(f"associativity-dir{d}", 0) > 0 for d in (1, 2, 3)
    )
    assert all(
        rep.checked_count.get(f"interchange-dir{i}{j}", 0) > 0
        for i, j in ((1, 2), (1, 3), (2, 3))
    )


def test_morphism_image_of_commutative_cube(box_ind2, box_ind3):
    obj_map = {"0": "0", "1": "1"}
    arrow_map = {a: a for a in indiscrete_groupoid(2).arrows}
    f = models.induced_square_morphism(obj_map, arrow_map, box_ind2, box_ind3)
    assert validate_morphism(f).ok
    for c in all_cubes(box_ind2)[::13]:
        if is_commutative(box_ind2, c):
            assert is_commutative(box_ind3, map_cube(f, c))
