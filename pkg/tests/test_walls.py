import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings

from _oracles import random_class, wall_points
from _strategies import classes
from wallforge.chern import ChernChar, dualize, euler_characteristic, line_bundle
from wallforge.stability import NotInHeartConeError, Ordering, StabPoint, compare_slopes
from wallforge.walls import (
    Actuality,
    DegenerateWallError,
    Side,
    Wall,
    WallKind,
    _along_wall_nonneg,
    default_max_rank,
    enumerate_flip_candidates,
    enumerate_rank1_walls,
    flip_chi_range,
    merge_walls,
    numerical_walls,
    radius_sq_from_rank_chi,
    rank1_c1_solutions,
    reflect_wall,
    scan_walls,
    side_of_wall,
    special_walls,
    total_class,
    wall_from_pair,
)

F = Fraction
O = line_bundle(0)
O_MINUS_1 = line_bundle(-1)


def test_closed_form_against_symbolic_slope_difference():
    a0, a1, a2, e0, e1, e2, s, t = sp.symbols("a0 a1 a2 e0 e1 e2 s t", real=True)

    def z(r, c, x):
        return -x + c * s - r / 2 * (s**2 - t**2), t * (c - r * s)

    re_a, im_a = z(a0, a1, a2)
    re_e, im_e = z(e0, e1, e2)
    cleared = sp.expand((re_e * im_a - re_a * im_e) / t)
    d_rc, d_rd, d_cd = a0 * e1 - e0 * a1, a0 * e2 - e0 * a2, a1 * e2 - e1 * a2
    center = d_rd / d_rc
    circle = (s - center) ** 2 + t**2 - (center**2 - 2 * d_cd / d_rc)
    assert sp.simplify(cleared + d_rc / 2 * circle) == 0
    # vertical case
    assert sp.expand(cleared.subs(a0, 0).subs(e0, 0) - (d_rd * s - d_cd).subs({a0: 0, e0: 0})) == 0


class TestWallFromPair:
    @pytest.mark.parametrize("d", [3, 5, 7, 9, 11])
    def test_special_walls(self, d):
        v = total_class(d) if d >= 5 else ChernChar(0, d, F(-3 * d, 2))
        wc = wall_from_pair(O_MINUS_1, v)
        assert (wc.kind, wc.center, wc.radius_sq) == (WallKind.SEMICIRCLE, F(-3, 2), F(1, 4))
        wt = wall_from_pair(O, v)
        assert (wt.kind, wt.center, wt.radius_sq) == (WallKind.SEMICIRCLE, F(-3, 2), F(9, 4))

    @given(classes(), classes(rank=(1, 4)).map(lambda c: c.ch0))
    def test_proportional_is_degenerate(self, e, lam):
        assert wall_from_pair(lam * e, e).kind is WallKind.DEGENERATE_ALL

    def test_vertical_and_empty(self):
        w = wall_from_pair(ChernChar(1, 0, 0), ChernChar(2, 0, -1))
        assert w.kind is WallKind.VERTICAL_LINE and w.line_s == 0
        assert wall_from_pair(ChernChar(0, 1, 0), ChernChar(0, 2, 1)).kind is WallKind.EMPTY
        # center 0, radius_sq = 0 - 2*D_cd/D_rc = -2
        assert wall_from_pair(ChernChar(1, 0, -1), ChernChar(0, 1, 0)).kind is WallKind.EMPTY
        assert wall_from_pair(ChernChar(1, 0, 1), ChernChar(0, 1, 0)).radius_sq == 2

    def test_sampling_oracle_on_random_pairs(self):
        rng = random.Random(7)
        checked = 0
        while checked < 150:
            a, e = random_class(rng), random_class(rng)
            w = wall_from_pair(a, e)
            if w.kind is not WallKind.SEMICIRCLE:
                continue
            pts = wall_points(w.center, w.radius_sq, 20)
            if pts is None:
                continue
            for p in pts:
                try:
                    assert compare_slopes(a, e, p) is Ordering.EQUAL
                    off = StabPoint(p.s, p.t * F(11, 10))
                    assert compare_slopes(a, e, off) is not Ordering.EQUAL
                except NotInHeartConeError:
                    pass
            checked += 1

    @pytest.mark.parametrize("e", [ChernChar(1, 0, 0), ChernChar(1, 1, 0), ChernChar(2, -1, 3)])
    def test_point_wall_is_vertical_at_mu(self, e):
        w = wall_from_pair(ChernChar(0, 0, 1), e)
        assert w.kind is WallKind.VERTICAL_LINE
        assert w.line_s == F(e.ch1, e.ch0)


class TestSideOfWall:
    def test_orientation_is_pinned(self):
        v = total_class(5)
        assert side_of_wall(O_MINUS_1, v, StabPoint(F(-3, 2), F(1, 4))) is Side.A_ABOVE
        assert side_of_wall(O_MINUS_1, v, StabPoint(F(-3, 2), F(1, 2))) is Side.EQUAL
        assert side_of_wall(O_MINUS_1, v, StabPoint(F(-3, 2), 2)) is Side.A_BELOW

    def test_flips_between_half_and_double_radius(self):
        v = total_class(7)
        for cand in enumerate_flip_candidates(7, 2):
            w = wall_from_pair(cand.cls, v)
            r = sp.sqrt(sp.Rational(w.radius_sq.numerator, w.radius_sq.denominator))
            if not r.is_rational:
                continue
            r = F(int(r.p), int(r.q))
            inside = side_of_wall(cand.cls, v, StabPoint(w.center, r / 2))
            outside = side_of_wall(cand.cls, v, StabPoint(w.center, 2 * r))
            assert {inside, outside} == {Side.A_ABOVE, Side.A_BELOW}

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateWallError):
            side_of_wall(O, 3 * O, StabPoint(0, 1))


class TestRadiusFormula:
    def test_examples(self):
        assert radius_sq_from_rank_chi(5, 1, 0) == F(1, 4)
        assert radius_sq_from_rank_chi(5, 1, 1) == F(9, 4)
        for d in (5, 7, 9, 11):
            chi = (d * d - 1) // 8
            assert radius_sq_from_rank_chi(d, 1, chi) == F(d * d, 4)
            sub = line_bundle((d - 3) // 2)
            assert euler_characteristic(sub) == chi
            assert wall_from_pair(sub, total_class(d)).radius_sq == F(d * d, 4)

    @given(classes(rank=(1, 6)))
    def test_agrees_with_closed_form(self, a):
        for d in (5, 7, 9):
            w = wall_from_pair(a, total_class(d))
            expected = radius_sq_from_rank_chi(d, a.ch0, euler_characteristic(a))
            if w.kind is WallKind.SEMICIRCLE:
                assert w.radius_sq == expected and w.center == F(-3, 2)
            else:
                assert w.kind is WallKind.EMPTY and expected <= 0


class TestFlipChiRange:
    @staticmethod
    def brute(d, r):
        out = []
        for chi in range(-50, 200):
            root = sp.sqrt(sp.Rational(1, 4) + sp.Rational(2 * chi, r)) if 8 * chi + r >= 0 else None
            if root is not None and sp.Rational(3, 2) < root <= sp.Rational(d, 2 * r):
                out.append(chi)
        return out

    def test_examples(self):
        assert list(flip_chi_range(5, 1)) == [2, 3]
        assert list(flip_chi_range(5, 2)) == []
        assert list(flip_chi_range(9, 2)) == [3, 4]

    @pytest.mark.parametrize("d", [5, 7, 9, 11, 13])
    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_matches_brute_force(self, d, r):
        assert list(flip_chi_range(d, r)) == self.brute(d, r)

    @pytest.mark.parametrize("d", [5, 7, 9, 11, 13, 15, 17])
    def test_default_max_rank_is_last_nonempty(self, d):
        m = default_max_rank(d)
        assert all(not flip_chi_range(d, r) for r in range(m + 1, m + 6))
        assert list(flip_chi_range(d, 1))


class TestRank1C1:
    @staticmethod
    def brute(d, ell):
        root = sp.sqrt(sp.Rational(d * d, 4) - 2 * ell)
        lo, hi = root - sp.Rational(3, 2), -sp.Rational(3, 2) + d - root
        return [c for c in range(-3 * d, 3 * d) if lo <= c <= hi]

    def test_examples(self):
        assert rank1_c1_solutions(5, 0) == [1]
        assert rank1_c1_solutions(5, 1) == [1]
        assert rank1_c1_solutions(7, 3) == [1, 2, 3]

    @pytest.mark.parametrize("d", [5, 7, 9, 11, 13])
    def test_matches_exact_sqrt(self, d):
        for ell in range(0, d * d // 8 + 1):
            assert rank1_c1_solutions(d, ell) == self.brute(d, ell)

    @pytest.mark.parametrize("d", [5, 7, 9, 11, 13])
    def test_middle_always_solution_and_symmetric(self, d):
        for ell in range((d * d - 1) // 8 - 1):
            sols = rank1_c1_solutions(d, ell)
            assert (d - 3) // 2 in sols
            assert sorted(d - 3 - c for c in sols) == sols
            assert (len(sols) == 1) == (ell < (d - 1) / 2)

    def test_negative_radicand(self):
        with pytest.raises(ValueError):
            rank1_c1_solutions(5, 4)


class TestEnumerateRank1:
    @pytest.mark.parametrize("d, count", [(5, 2), (7, 5), (9, 9), (11, 14), (13, 20)])
    def test_count(self, d, count):
        assert len(enumerate_rank1_walls(d)) == count == (d * d - 9) // 8

    def test_d5(self):
        walls = enumerate_rank1_walls(5)
        assert [w.radius_sq for w, _ in walls] == [F(25, 4), F(17, 4)]
        assert [[c.cls for c in cs] for _, cs in walls] == [
            [ChernChar(1, 1, F(1, 2))],
            [ChernChar(1, 1, F(-1, 2))],
        ]

    def test_d7_ell3(self):
        (wall, cands), = [(w, cs) for w, cs in enumerate_rank1_walls(7) if cs[0].ell == 3]
        assert wall.radius_sq == F(49, 4) - 6
        assert [c.i for c in cands] == [-1, 0, 1]
        # length(W) = ell + i(d+i)/2 gives 0, 3, 7
        assert [c.len_W for c in cands] == [0, 3, 7]
        assert [c.len_Y for c in cands] == [7, 3, 0]

    @pytest.mark.parametrize("d", [5, 7, 9, 11, 13])
    def test_invariants(self, d):
        walls = enumerate_rank1_walls(d)
        radii = [w.radius_sq for w, _ in walls]
        assert radii == sorted(radii, reverse=True) and len(set(radii)) == len(radii)
        for wall, cands in walls:
            assert wall.center == F(-3, 2)
            for c in cands:
                assert c.actuality is Actuality.CERTIFIED_RANK1
                assert euler_characteristic(c.cls) == (d * d - 1) // 8 - c.ell
                assert c.len_W >= 0 and c.len_Y >= 0
                assert wall_from_pair(c.cls, total_class(d)).key == wall.key

    def test_rejects_bad_d(self):
        for d in (3, 4, 6):
            with pytest.raises(ValueError):
                enumerate_rank1_walls(d)


class TestFlipCandidates:
    def test_d5(self):
        cands = enumerate_flip_candidates(5, 3)
        assert [c.cls for c in cands] == [ChernChar(1, 1, F(1, 2)), ChernChar(1, 1, F(-1, 2))]

    @pytest.mark.parametrize("d", [5, 7, 9, 11])
    def test_rank1_part_matches_rank1_walls(self, d):
        expected = sorted((c for _, cs in enumerate_rank1_walls(d) for c in cs), key=lambda c: c.sort_key())
        got = sorted((c for c in enumerate_flip_candidates(d, 3) if c.rank == 1), key=lambda c: c.sort_key())
        assert got == expected

    def test_d7_has_only_rank1(self):
        assert {c.rank for c in enumerate_flip_candidates(7, 3)} == {1}
        assert len({c.radius_sq for c in enumerate_flip_candidates(7, 3)}) == 5

    def test_d9_rank2(self):
        cands = enumerate_flip_candidates(9, 2)
        rank2 = [c for c in cands if c.rank == 2]
        assert rank2
        assert all(c.actuality is Actuality.NUMERICAL_CANDIDATE for c in rank2)
        hit = [c for c in rank2 if c.chi == 3]
        assert hit and all(c.radius_sq == F(13, 4) for c in hit)
        rank1_radii = {w.radius_sq for w, _ in enumerate_rank1_walls(9)}
        assert F(13, 4) not in rank1_radii

    @pytest.mark.parametrize("d", [9, 11, 13])
    def test_all_on_wall_and_bounded(self, d):
        v = total_class(d)
        for c in enumerate_flip_candidates(d, default_max_rank(d)):
            w = wall_from_pair(c.cls, v)
            assert w.radius_sq == c.radius_sq
            assert F(9, 4) < c.radius_sq <= F(d * d, 4 * c.rank * c.rank)
            assert 2 * c.rank * c.cls.ch2 <= c.cls.ch1**2

    def test_sorted_outermost_first(self):
        radii = [c.radius_sq for c in enumerate_flip_candidates(13, 4)]
        assert radii == sorted(radii, reverse=True)


class TestSpecialAndReflect:
    @pytest.mark.parametrize("d", [5, 7, 9])
    def test_special_walls(self, d):
        theta, coll = special_walls(d)
        assert (theta.radius_sq, coll.radius_sq) == (F(9, 4), F(1, 4))
        assert theta.center == coll.center == F(-3, 2)
        assert "DIVISORIAL" in theta.tags and "COLLAPSING" in coll.tags
        for w in (theta, coll):
            assert wall_from_pair(*w.pair).key == w.key

    def test_collapsing_wall_fixed(self):
        _, coll = special_walls(7)
        r = reflect_wall(coll)
        assert r.key == coll.key
        assert r.pair[1] == coll.pair[1]

    @pytest.mark.parametrize("n", [2, 3])
    def test_reflect_matches_dual_pair(self, n):
        e = ChernChar(1, 0, F(-n))
        for a in (O, O_MINUS_1, line_bundle(-2), ChernChar(1, -1, F(-1, 2))):
            w = wall_from_pair(a, e)
            r = reflect_wall(w)
            direct = wall_from_pair(dualize(e - a), dualize(e))
            assert r.key == direct.key
            assert (r.pair[0], r.pair[1]) == (direct.pair[0], direct.pair[1])

    def test_vertical_line(self):
        w = Wall(WallKind.VERTICAL_LINE, (O, ChernChar(2, 0, -1)), line_s=F(0))
        assert reflect_wall(w).line_s == -3

    @given(classes(), classes())
    @settings(max_examples=200)
    def test_reflection_is_dual_wall(self, a, e):
        w = wall_from_pair(a, e)
        if w.kind is WallKind.DEGENERATE_ALL:
            return
        assert reflect_wall(w).key == wall_from_pair(dualize(e - a), dualize(e)).key


class TestMerge:
    def test_d9_rank2_merges_on_shared_radius(self):
        walls = scan_walls(9, 2)
        radii = [w.radius_sq for w, _ in walls]
        assert len(radii) == len(set(radii))
        assert radii == sorted(radii, reverse=True)
        assert F(13, 4) in radii

    def test_merge_keeps_first_pair_and_unions_tags(self):
        v = total_class(5)
        w1 = wall_from_pair(O, v)
        w2 = Wall(w1.kind, (ChernChar(1, 2, -3), v), w1.center, w1.radius_sq, tags=("X",))
        (merged, cands), = merge_walls([(w1, []), (w2, [])])
        assert merged.pair[0] == O and merged.tags == ("X",)


def _brute_walls(v, n, c1_range, twice_ch2_range):
    found = {}
    for r in range(-n, n + 1):
        if abs(v.ch0 - r) > n:
            continue
        for c in range(*c1_range):
            for x in range(*twice_ch2_range):
                a = ChernChar(r, c, F(x, 2))
                w = wall_from_pair(a, v)
                if w.kind is not WallKind.SEMICIRCLE:
                    continue
                if _along_wall_nonneg(a, w.center, w.radius_sq) and _along_wall_nonneg(
                    v - a, w.center, w.radius_sq
                ):
                    found[w.key] = w
    return sorted(found)


class TestNumericalWalls:
    @pytest.mark.parametrize(
        "v, n",
        [
            (ChernChar(1, 0, -2), 2),
            (ChernChar(1, 0, -3), 2),
            (ChernChar(2, -1, F(-3, 2)), 2),
            (ChernChar(-1, 3, F(-5, 2)), 2),
            (total_class(5), 2),
            (ChernChar(0, 3, F(-1, 2)), 2),
        ],
    )
    def test_matches_box_search(self, v, n):
        got = sorted(w.key for w in numerical_walls(v, n))
        assert got == _brute_walls(v, n, (-25, 26), (-80, 81))

    def test_hilbert_square(self):
        walls = numerical_walls(ChernChar(1, 0, -2), 1)
        assert [(w.center, w.radius_sq) for w in walls] == [(F(-5, 2), F(9, 4))]

    @pytest.mark.parametrize(
        "v", [ChernChar(1, 0, -2), ChernChar(1, 0, -4), ChernChar(2, -1, F(-5, 2)), total_class(5)]
    )
    def test_duality_reflects_wall_set(self, v):
        for n in (1, 2):
            ws = numerical_walls(v, n)
            reflected = sorted((-3 - w.center, w.radius_sq) for w in ws)
            dual = sorted((w.center, w.radius_sq) for w in numerical_walls(dualize(v), n))
            assert reflected == dual

    def test_outside_heart(self):
        assert numerical_walls(ChernChar(0, -3, 0), 2) == []
        assert numerical_walls(ChernChar(1, 0, 1), 2) == []
