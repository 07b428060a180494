import math
import random

import pytest

from bdfkalc import (
    RING_MODULE,
    ZERO,
    DirectSum,
    FreeModule,
    Monomial,
    MonomialIdeal,
    MonomialQuotient,
    RingSpec,
    ShiftedModule,
    Window,
    add,
    degree,
    eq_on_window,
    graded_piece,
    hilbert,
    kseries,
    monomial_series,
    monomials_of_degree,
    mul,
    mul_q,
    ring_hilbert,
    series_from_terms,
    truncate,
    unit,
    validate_ring,
    var_action,
)
from oracles import count_monomials
from bdfkalc.linalg import matmul

KXY = RingSpec.standard(2)
W44 = Window.of([degree(4, 4)])
XY = MonomialQuotient.of([Monomial(((1, 1), (2, 1)))])
XY_IDEAL = MonomialIdeal.of([Monomial(((1, 1), (2, 1)))])


class TestValidateRing:
    def test_matrix_ring_is_valid(self):
        ring = RingSpec.matrix_ring([2, 3, 1])
        assert validate_ring(ring, Window.of([degree(2, 2, 2)])).ok
        assert [v.name for v in ring.variables][:3] == ["x[1,1]", "x[2,1]", "x[1,2]"]

    def test_degree_zero_variable_breaks_connectedness(self):
        ring = RingSpec.of([("a", ZERO)])
        report = validate_ring(ring)
        assert not report.ok
        assert "a" in report.problems[0]

    def test_mixed_sign_degree_is_not_pointed(self):
        ring = RingSpec.of([("a", degree(1, -1))])
        assert not validate_ring(ring).ok

    def test_duplicate_names_flagged(self):
        ring = RingSpec.of([("a", unit(1)), ("a", unit(2))])
        assert not validate_ring(ring).ok

    def test_truncation_drops_unreachable_columns(self):
        ring = RingSpec.matrix_ring([1, 1, 2])
        kept = ring.truncated(Window.of([degree(3, 3)]))
        assert [v.name for v in kept.variables] == ["x[1,1]", "x[1,2]"]


class TestRingHilbert:
    def test_two_variables_single_monomial_per_degree(self):
        h = ring_hilbert(KXY)
        for a in range(4):
            for b in range(4):
                assert h.coeff(degree(a, b)) == 1

    def test_constant_term_is_one(self):
        assert ring_hilbert(RingSpec.matrix_ring([2, 3, 1])).coeff(ZERO) == 1

    def test_matrix_ring_matches_stars_and_bars(self):
        columns = [2, 3, 1]
        ring = RingSpec.matrix_ring(columns)
        h = ring_hilbert(ring)
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    expected = 1
                    for j, n in enumerate(columns):
                        alpha = (a, b, c)[j]
                        expected *= math.comb(alpha + n - 1, n - 1)
                    assert h.coeff(degree(a, b, c)) == expected

    def test_matrix_ring_matches_brute_enumeration(self):
        ring = RingSpec.matrix_ring([2, 2])
        var_degrees = [(v.degree.coeff(1), v.degree.coeff(2)) for v in ring.variables]
        for a in range(4):
            for b in range(4):
                assert ring_hilbert(ring).coeff(degree(a, b)) == count_monomials(
                    var_degrees, (a, b)
                )


class TestGradedPiece:
    def test_shifted_ring_at_its_shift(self):
        piece = graded_piece(FreeModule.of([unit(1)]), KXY, unit(1))
        assert piece.dimension == 1
        assert piece.basis[0].monomial == Monomial()

    def test_quotient_by_xy_kills_mixed_degrees(self):
        # independent oracle: survivors are the pure powers
        for a in range(4):
            for b in range(4):
                expected = 1 if a == 0 or b == 0 else 0
                assert graded_piece(XY, KXY, degree(a, b)).dimension == expected

    def test_ideal_and_quotient_split_the_ring(self):
        g = degree(1, 1)
        assert graded_piece(XY_IDEAL, KXY, g).dimension == 1
        assert graded_piece(XY, KXY, g).dimension == 0
        assert graded_piece(RING_MODULE, KXY, g).dimension == 1

    def test_dimension_additivity_random_ideals(self):
        rng = random.Random(3)
        for _ in range(30):
            gens = []
            for _ in range(rng.randint(1, 4)):
                g = Monomial.of(
                    [(1, rng.randint(0, 3)), (2, rng.randint(0, 3))]
                )
                if g.exps:
                    gens.append(g)
            reduced = [
                g
                for g in set(gens)
                if not any(o != g and g.divisible_by(o) for o in set(gens))
            ]
            if not reduced:
                continue
            ideal = MonomialIdeal.of(reduced)
            quotient = MonomialQuotient.of(reduced)
            for a in range(4):
                for b in range(4):
                    g = degree(a, b)
                    total = (
                        graded_piece(ideal, KXY, g).dimension
                        + graded_piece(quotient, KXY, g).dimension
                    )
                    assert total == graded_piece(RING_MODULE, KXY, g).dimension

    def test_direct_sum_concatenates(self):
        m = DirectSum.of([RING_MODULE, FreeModule.of([unit(1)])])
        piece = graded_piece(m, KXY, unit(1))
        assert piece.dimension == 2
        assert {label.path[0] for label in piece.basis} == {0, 1}

    def test_shift_moves_the_piece(self):
        shifted = ShiftedModule(XY, degree(1, 1))
        for a in range(3):
            for b in range(3):
                assert (
                    graded_piece(shifted, KXY, degree(a + 1, b + 1)).dimension
                    == graded_piece(XY, KXY, degree(a, b)).dimension
                )

    def test_unreduced_generators_rejected(self):
        with pytest.raises(ValueError):
            MonomialIdeal.of([Monomial(((1, 1),)), Monomial(((1, 2),))])


class TestVarAction:
    def test_inclusion_of_x_at_origin(self):
        assert var_action(RING_MODULE, KXY, "x1", ZERO) == [[1]]

    def test_quotient_kills_the_relation(self):
        # y * x = xy = 0 in k[x,y]/(xy): target piece at (1,1) is empty
        matrix = var_action(XY, KXY, "x2", degree(1, 0))
        assert matrix == []

    def test_actions_commute(self):
        rng = random.Random(5)
        modules = [RING_MODULE, XY, XY_IDEAL, FreeModule.of([unit(1), degree(0, 1)])]
        for module in modules:
            for _ in range(10):
                g = degree(rng.randint(0, 2), rng.randint(0, 2))
                xy_path = matmul(
                    var_action(module, KXY, "x2", g + unit(1)),
                    var_action(module, KXY, "x1", g),
                )
                yx_path = matmul(
                    var_action(module, KXY, "x1", g + unit(2)),
                    var_action(module, KXY, "x2", g),
                )
                assert xy_path == yx_path


class TestHilbert:
    def test_free_sum_identity(self):
        # H(R + R(-e1)) = H(R) * (1 + t1)
        free = FreeModule.of([ZERO, unit(1)])
        lhs = hilbert(free, KXY, W44)
        factor = series_from_terms({ZERO: 1, unit(1): 1}, W44)
        rhs = mul(truncate(ring_hilbert(KXY), W44), factor)
        assert eq_on_window(lhs, rhs, rhs.window)

    def test_ideal_plus_quotient_is_ring(self):
        total = add(hilbert(XY_IDEAL, KXY, W44), hilbert(XY, KXY, W44))
        assert eq_on_window(total, truncate(ring_hilbert(KXY), W44), W44)

    def test_zero_module(self):
        assert hilbert(FreeModule.of([]), KXY, W44).is_zero

    def test_shift_identity(self):
        g = degree(1, 2)
        lhs = hilbert(ShiftedModule(XY, g), KXY, W44)
        rhs = mul(monomial_series(g, W44), hilbert(XY, KXY, W44))
        assert eq_on_window(lhs, rhs, rhs.window)


class TestKSeries:
    def test_shifted_ring_is_a_monomial(self):
        g = degree(2, 1)
        result = kseries(FreeModule.of([g]), KXY, W44)
        assert eq_on_window(result, monomial_series(g, W44), W44)

    def test_free_module_multiplicities(self):
        shifts = [ZERO, unit(1), unit(1), degree(2, 2)]
        result = kseries(FreeModule.of(shifts), KXY, W44)
        expected = series_from_terms({ZERO: 1, unit(1): 2, degree(2, 2): 1}, W44)
        assert eq_on_window(result, expected, W44)

    def test_quotient_by_xy_via_convolution_oracle(self):
        from oracles import convolve

        # K = H(R/(xy)) * (1-t1)(1-t2), assembled independently
        h_table = {g: c for g, c in hilbert(XY, KXY, W44).terms}
        factor = {
            ZERO: 1,
            unit(1): -1,
            unit(2): -1,
            degree(1, 1): 1,
        }
        expected = convolve(h_table, factor)
        got = kseries(XY, KXY, W44)
        for g, c in got.terms:
            assert expected.get(g, 0) == c
        assert expected[ZERO] == 1 and expected[degree(1, 1)] == -1

    def test_equal_shift_multisets_iff_equal_series(self):
        a = FreeModule.of([unit(1), unit(2)])
        b = FreeModule.of([unit(2), unit(1)])
        c = FreeModule.of([unit(1), unit(1)])
        assert kseries(a, KXY, W44) == kseries(b, KXY, W44)
        assert not eq_on_window(
            kseries(a, KXY, W44), kseries(c, KXY, W44), W44
        )

    def test_hilbert_recovers_from_kseries(self):
        # H(R) * K(M) = H(M): the defining identity read backwards
        k = kseries(XY, KXY, W44)
        recovered = mul_q(ring_hilbert(KXY), k)
        assert eq_on_window(recovered, hilbert(XY, KXY, W44), W44)

    def test_division_by_ring_series_round_trips(self):
        from bdfkalc import ring_hilbert_inverse

        rng = random.Random(47)
        spots = [degree(a, b) for a in range(5) for b in range(5)]
        for _ in range(15):
            terms = {rng.choice(spots): rng.choice([-2, -1, 1, 2]) for _ in range(4)}
            s = series_from_terms(terms, W44)
            through = mul_q(ring_hilbert_inverse(KXY), mul_q(ring_hilbert(KXY), s))
            assert eq_on_window(through, s, W44)


class TestMonomialEnumeration:
    def test_sorted_and_distinct(self):
        ring = RingSpec.matrix_ring([2, 2])
        mons = monomials_of_degree(ring, degree(2, 1))
        assert len(set(mons)) == len(mons)
        totals = [m.total() for m in mons]
        assert totals == sorted(totals)

    def test_out_of_quadrant_degree_has_no_monomials(self):
        assert monomials_of_degree(KXY, degree(-1, 2)) == ()
