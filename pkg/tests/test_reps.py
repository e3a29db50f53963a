"""Representations: Hom/Ext against a brute-force morphism enumeration,
reflection-built indecomposables, direct sums, sub- and quotient objects."""

from itertools import product

import pytest

from flagmann import (
    Matrix,
    PrimeField,
    QQ,
    Representation,
    RootMultiset,
    build_rep,
    direct_sum,
    euler_form,
    ext1_dim,
    hom_dim,
    hom_space,
    indecomposable_for_root,
    is_rigid,
    is_subrepresentation,
    parse_rep_spec,
    positive_roots,
    quotient_representation,
    simple_representation,
    subrepresentation,
    zero_representation,
)
from flagmann.errors import InputError
from flagmann.reps import admissible_vertex_order

from helpers import all_orientations, quiver_a, quiver_d, quiver_e

A2 = quiver_a(2)
F2 = PrimeField(2)


def rep_a2(dims, entries, field=QQ):
    """An A2 representation from the single arrow matrix given as rows."""
    m = Matrix.from_rows(field, entries) if entries else Matrix.zeros(field, dims[1], dims[0])
    return Representation(A2, field, dims, (m,))


def hom_dim_by_enumeration(w_rep, v_rep):
    """Oracle: count all commuting matrix tuples over F_2 and take log2."""
    assert w_rep.field == F2 and v_rep.field == F2
    quiver = w_rep.quiver
    shapes = [(v_rep.dims[i], w_rep.dims[i]) for i in range(quiver.n)]
    spaces = [list(product(range(2), repeat=r * c)) for r, c in shapes]
    count = 0
    for combo in product(*spaces):
        mats = [
            Matrix(F2, r, c, tuple(tuple(flat[a * c + b] for b in range(c)) for a in range(r)))
            for (r, c), flat in zip(shapes, combo)
        ]
        ok = True
        for (s, t), wm, vm in zip(quiver.arrow_indices, w_rep.arrow_maps, v_rep.arrow_maps):
            if mats[t] * wm != vm * mats[s]:
                ok = False
                break
        if ok:
            count += 1
    dim = count.bit_length() - 1
    assert 2**dim == count
    return dim


class TestHomDim:
    def test_a2_worked_examples(self):
        p = rep_a2((1, 1), [[1]])
        s1 = rep_a2((1, 0), None)
        assert hom_dim(p, s1) == 1
        assert hom_dim(s1, p) == 0
        assert hom_dim(p, p) == 1

    def test_matches_enumeration_oracle(self):
        reps = [
            rep_a2((1, 1), [[1]], F2),
            rep_a2((1, 0), None, F2),
            rep_a2((0, 1), None, F2),
            rep_a2((1, 1), [[0]], F2),
            rep_a2((2, 1), [[1, 0]], F2),
            rep_a2((1, 2), [[1], [0]], F2),
        ]
        for w in reps:
            for v in reps:
                assert hom_dim(w, v) == hom_dim_by_enumeration(w, v)

    def test_hom_space_elements_commute(self):
        p = rep_a2((1, 1), [[1]])
        s2 = rep_a2((0, 1), None)
        basis = hom_space(p, s2)
        assert len(basis) == hom_dim(p, s2)
        w = rep_a2((2, 2), [[1, 0], [0, 1]])
        basis = hom_space(w, w)
        assert len(basis) == hom_dim(w, w) == 4
        for mats in basis:
            for (s, t), wm, vm in zip(A2.arrow_indices, w.arrow_maps, w.arrow_maps):
                assert mats[t] * wm == vm * mats[s]

    def test_field_mismatch_rejected(self):
        with pytest.raises(InputError):
            hom_dim(rep_a2((1, 0), None, F2), rep_a2((1, 0), None, QQ))


class TestExt1:
    def test_a2_examples(self):
        s1 = rep_a2((1, 0), None)
        s2 = rep_a2((0, 1), None)
        p = rep_a2((1, 1), [[1]])
        assert ext1_dim(s1, s2) == 1
        assert ext1_dim(s2, s1) == 0
        for root in positive_roots(A2):
            x = indecomposable_for_root(A2, root, QQ)
            assert ext1_dim(p, x) == 0  # (1,1) is projective

    def test_rigidity(self):
        s1 = rep_a2((1, 0), None)
        s2 = rep_a2((0, 1), None)
        p = rep_a2((1, 1), [[1]])
        assert is_rigid(p)
        assert is_rigid(s1) and is_rigid(s2)
        assert not is_rigid(direct_sum(s1, s2))


class TestIndecomposables:
    @pytest.mark.parametrize(
        "quiver", [quiver_a(2), quiver_a(3), quiver_d(4), quiver_e(6)]
    )
    def test_all_roots_give_bricks(self, quiver):
        for root in positive_roots(quiver):
            rep = indecomposable_for_root(quiver, root, QQ)
            assert rep.dims == root
            assert hom_dim(rep, rep) == 1
            assert ext1_dim(rep, rep) == 0

    def test_every_orientation_of_d4(self):
        for quiver in all_orientations(quiver_d(4)):
            root = max(positive_roots(quiver), key=sum)
            rep = indecomposable_for_root(quiver, root, QQ)
            assert rep.dims == root
            assert hom_dim(rep, rep) == 1

    def test_a2_arrow_map_invertible(self):
        rep = indecomposable_for_root(A2, (1, 1), QQ)
        assert rep.arrow_maps[0].rank() == 1

    def test_simple_roots_give_simples(self):
        rep = indecomposable_for_root(A2, (1, 0), QQ)
        assert rep.dims == (1, 0)
        assert rep.arrow_maps[0].is_zero()

    def test_d4_highest_root_maps(self):
        quiver = quiver_d(4)  # arrows 1->2, 3->2, 4->2
        rep = indecomposable_for_root(quiver, (1, 2, 1, 1), QQ)
        images = []
        for (s, t), m in zip(quiver.arrow_indices, rep.arrow_maps):
            if t == 1:
                assert m.rank() == 1
                images.append(tuple(m.entries[r][0] for r in range(2)))
        # the three image lines in the middle plane are pairwise distinct
        for i in range(3):
            for j in range(i + 1, 3):
                m = Matrix.from_rows(QQ, [images[i], images[j]])
                assert m.rank() == 2

    def test_field_independence(self):
        for quiver in (quiver_a(3), quiver_d(4)):
            roots = positive_roots(quiver)
            for a in roots:
                for b in roots:
                    expected = hom_dim(
                        indecomposable_for_root(quiver, a, QQ),
                        indecomposable_for_root(quiver, b, QQ),
                    )
                    for p in (2, 3, 5):
                        fp = PrimeField(p)
                        got = hom_dim(
                            indecomposable_for_root(quiver, a, fp),
                            indecomposable_for_root(quiver, b, fp),
                        )
                        assert got == expected

    def test_euler_identity_exhaustive(self):
        for quiver in (quiver_a(3), quiver_d(4)):
            roots = positive_roots(quiver)
            reps = {r: indecomposable_for_root(quiver, r, QQ) for r in roots}
            for a in roots:
                for b in roots:
                    lhs = hom_dim(reps[a], reps[b]) - ext1_dim(reps[a], reps[b])
                    assert lhs == euler_form(quiver, a, b)

    def test_non_root_rejected(self):
        with pytest.raises(InputError):
            indecomposable_for_root(A2, (2, 1), QQ)


class TestRootMultisetAndBuild:
    def test_canonical_merge(self):
        ms = RootMultiset(A2, (((1, 1), 1), ((1, 0), 2), ((1, 1), 1)))
        assert ms.items == (((1, 0), 2), ((1, 1), 2))
        assert ms.total == (4, 2)
        assert len(ms) == 4

    def test_invalid_root_rejected(self):
        with pytest.raises(InputError):
            RootMultiset(A2, (((2, 0), 1),))

    def test_sum_of_simples(self):
        ms = RootMultiset(A2, (((1, 0), 1), ((0, 1), 1)))
        rep = build_rep(ms, QQ)
        assert rep.dims == (1, 1)
        assert rep.arrow_maps[0].is_zero()

    def test_double_projective(self):
        ms = RootMultiset(A2, (((1, 1), 2),))
        rep = build_rep(ms, QQ)
        assert rep.dims == (2, 2)
        assert rep.arrow_maps[0].rank() == 2

    def test_empty_multiset(self):
        rep = build_rep(RootMultiset(A2, ()), QQ)
        assert rep.dims == (0, 0)

    def test_hom_additive_in_sums(self):
        roots = positive_roots(A2)
        reps = {r: indecomposable_for_root(A2, r, QQ) for r in roots}
        for a in roots:
            for b in roots:
                for c in roots:
                    lhs = hom_dim(direct_sum(reps[a], reps[b]), reps[c])
                    assert lhs == hom_dim(reps[a], reps[c]) + hom_dim(reps[b], reps[c])
                    rhs = hom_dim(reps[a], direct_sum(reps[b], reps[c]))
                    assert rhs == hom_dim(reps[a], reps[b]) + hom_dim(reps[a], reps[c])

    def test_parse_rep_spec(self):
        ms = parse_rep_spec("# rep\nsummand: 1,1 x 2\nsummand: 0,1\n", A2)
        assert ms.items == (((0, 1), 1), ((1, 1), 2))
        with pytest.raises(InputError):
            parse_rep_spec("summand: 9,9\n", A2)
        with pytest.raises(InputError):
            parse_rep_spec("blob: 1,1\n", A2)


class TestSubAndQuotient:
    def test_zero_and_full_are_stable(self):
        p = rep_a2((1, 1), [[1]])
        zero = ((), ())
        full = (((1,),), ((1,),))
        assert is_subrepresentation(p, zero)
        assert is_subrepresentation(p, full)

    def test_image_line_constraint(self):
        p = rep_a2((1, 1), [[1]])
        assert not is_subrepresentation(p, (((1,),), ()))
        assert is_subrepresentation(p, ((), ((1,),)))

    def test_subrep_and_quotient_shapes(self):
        w = build_rep(RootMultiset(A2, (((1, 1), 1), ((1, 0), 1))), F2)
        subs = (((1, 0),), ((1,),))  # the projective summand
        assert is_subrepresentation(w, subs)
        sub = subrepresentation(w, subs)
        assert sub.dims == (1, 1)
        quot = quotient_representation(w, subs)
        assert quot.dims == (1, 0)
        assert hom_dim(quot, quot) == 1

    def test_unstable_subspaces_rejected(self):
        p = rep_a2((1, 1), [[1]])
        with pytest.raises(InputError):
            quotient_representation(p, (((1,),), ()))


class TestAdmissibleOrder:
    def test_sinks_first(self):
        quiver = quiver_a(3, [0, 0])  # 1 -> 2 -> 3
        order = admissible_vertex_order(quiver)
        assert order == (2, 1, 0)

    def test_cycle_rejected(self):
        from flagmann.errors import UnsupportedQuiverError

        cyc = __import__("flagmann").Quiver(
            ("1", "2", "3"), (("1", "2"), ("2", "3"), ("3", "1"))
        )
        with pytest.raises(UnsupportedQuiverError):
            admissible_vertex_order(cyc)

    def test_zero_rep(self):
        z = zero_representation(A2, QQ)
        assert hom_dim(z, z) == 0
        s = simple_representation(A2, "1", QQ)
        assert hom_dim(z, s) == 0
