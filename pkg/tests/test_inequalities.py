import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from posetcorr import inequalities as ineq
from posetcorr.counting import count
from posetcorr.inequalities import (
    CheckDef, PreconditionViolated, SweepConfig, SweepReport, UnknownCheck, bruhat_bindings, check, check_ids,
    corr_del_via_strong, get_check, iter_verdicts, minimal_records, sweep, to_jsonl,
)
from posetcorr.poset import (
    antichain, chain, delete, from_relations, linear_sum, minimals, parallel_sum, permutation_poset,
)
from posetcorr.verdict import EQUALITY, FAILS, HOLDS, VACUOUS, judge, product_verdict, ratio_verdict

from conftest import all_posets, posets

F = Fraction
CONJECTURES = {"ext-stanley-conj", "cpc-conj", "reverse-conj"}


class TestRegistry:
    def test_ids(self):
        ids = check_ids()
        assert len(ids) == 28
        assert set(check_ids(conjecture=True)) == CONJECTURES
        assert not CONJECTURES & set(check_ids(conjecture=False))

    def test_unknown(self):
        with pytest.raises(UnknownCheck):
            check("no-such-check", chain(3), x=0)
        with pytest.raises(UnknownCheck):
            get_check("nope")

    def test_missing_parameter(self):
        with pytest.raises(PreconditionViolated):
            check("corr-del-lower", antichain(3), x=0)

    @pytest.mark.parametrize("params", [{"x": 0, "y": 0}, {"x": 0, "y": 2}, {"x": 0, "y": 9}])
    def test_precondition(self, params):
        P = from_relations(3, [(1, 2)])
        with pytest.raises(PreconditionViolated):
            check("corr-del-lower", P, params)

    def test_register_conflict(self):
        spec = get_check("stanley")
        with pytest.raises(ValueError):
            ineq.register(spec)

    def test_every_check_has_bindings(self):
        seen = {cid: 0 for cid in check_ids()}
        for P in all_posets(5):
            for cid in seen:
                seen[cid] += sum(1 for _ in get_check(cid).bindings(P, SweepConfig()))
        seen.pop("bruhat-bounds")
        assert all(seen.values()), [c for c, v in seen.items() if not v]


class TestExamples:
    def test_corr_del_lower_antichain(self):
        v = check("corr-del-lower", antichain(3), x=0, y=1)
        assert v.status == EQUALITY
        assert v.lhs == v.rhs == F(3, 2)

    @pytest.mark.parametrize("n", range(3, 8))
    def test_antichain_tightness(self, n):
        v = check("corr-del-lower", antichain(n), x=0, y=1)
        assert (v.status, v.lhs) == (EQUALITY, F(n, n - 1))

    @pytest.mark.parametrize("n", range(4, 9))
    def test_linear_sum_tightness(self, n):
        v = check("corr-del-upper", linear_sum(antichain(2), chain(n - 2)), x=0, y=1)
        assert (v.status, v.lhs) == (EQUALITY, 2)

    def test_stanley_on_chain(self):
        for x in range(4):
            assert check("stanley", chain(4), x=x, k=2).status in (HOLDS, EQUALITY)

    def test_sweep_chain(self):
        assert sweep(chain(3)).fails() == []

    def test_sweep_antichain_ext_stanley(self):
        rep = sweep(antichain(4), ["ext-stanley-conj"])
        assert rep.fails() == []
        assert sum(rep.summary["ext-stanley-conj"].values()) > 0

    def test_ext_stanley_counterexample(self):
        # two minima under a common top, plus an isolated point
        P = from_relations(4, [(0, 3), (1, 3)])
        v = check("ext-stanley-conj", P, A={2, 3}, k=2)
        assert v.status == FAILS
        assert check("ext-stanley-conj", P, A={2, 3}, k=2, method="enum").status == FAILS
        assert (v.lhs, v.rhs) == (F(1, 16), F(1, 8))

    def test_reverse_conj_extremal(self):
        # C_{n-2} + C_2 attains n/(2(n-1)) with x, y the bottom and top of C_2
        for n in range(4, 9):
            P = parallel_sum(chain(n - 2), chain(2))
            v = check("reverse-conj", P, x=n - 2, y=n - 1)
            assert v.lhs == F(n, 2 * (n - 1))

    def test_second_moment_chain(self):
        v = check("second-moment", chain(3), x=1)
        assert v.status == EQUALITY and v.lhs == 1

    def test_three_perm_reports_good_permutations(self):
        v = check("three-perm", antichain(4), A={0}, B={1}, C={2})
        assert v.status != FAILS
        assert set(v.detail["satisfied_C"]) <= set("ABC")


class TestVerdictPolicy:
    def test_judge(self):
        assert judge(1, 2, "<=") == HOLDS
        assert judge(2, 2, "<=") == EQUALITY
        assert judge(3, 2, "<=") == FAILS
        assert judge(2, 2, "<") == FAILS
        with pytest.raises(ValueError):
            judge(1, 1, "~")

    def test_product_never_vacuous(self):
        assert product_verdict("t", 0, 0, "<=").status == EQUALITY

    def test_ratio_zero_denominator(self):
        assert ratio_verdict("t", 0, 0, 2, "<=").status == VACUOUS
        assert ratio_verdict("t", 1, 0, 2, "<=").status == FAILS
        with pytest.raises(ValueError):
            ratio_verdict("t", 1, -1, 2, "<=")

    @given(st.integers(0, 50), st.integers(1, 50), st.fractions(0, 5), st.sampled_from(["<=", ">=", "<"]))
    def test_cross_multiplication_sound(self, num, den, bound, rel):
        v = ratio_verdict("t", num, den, bound, rel)
        assert v.status == judge(F(num, den), bound, rel)

    @given(posets(min_n=3, max_n=6), st.data())
    def test_dp_and_enum_verdicts_agree(self, P, data):
        cid = data.draw(st.sampled_from([c for c in check_ids() if c != "bruhat-bounds"]))
        binds = list(get_check(cid).bindings(P, SweepConfig()))
        if not binds:
            return
        params = data.draw(st.sampled_from(binds))
        a, b = check(cid, P, params), check(cid, P, params, method="enum")
        assert (a.status, a.lhs, a.rhs) == (b.status, b.lhs, b.rhs)
        if a.status not in (VACUOUS,) and a.relation in ("<=", ">=", "<", "="):
            assert judge(a.lhs, a.rhs, a.relation) == a.status


class TestConsistency:
    def test_deletion_via_strong(self):
        for P in all_posets(6, 3):
            for x in minimals(P):
                for y in minimals(P):
                    if x < y:
                        lhs, rhs = corr_del_via_strong(P, x, y)
                        assert lhs == count(P) * count(delete(P, {x, y}))
                        assert rhs == 2 * count(delete(P, {x})) * count(delete(P, {y}))
                        assert check("corr-del-upper", P, x=x, y=y).status != FAILS

    def test_two_minimal_route(self):
        for P in all_posets(6, 3):
            mins = sorted(minimals(P))
            if len(mins) != 2:
                continue
            x, y = mins
            ex, ey, exy = count(delete(P, {x})), count(delete(P, {y})), count(delete(P, {x, y}))
            assert count(P) == ex + ey
            assert exy <= min(ex, ey)
            route_ok = count(P) * exy <= 2 * ex * ey
            assert route_ok and check("corr-del-upper", P, x=x, y=y).status != FAILS

    def test_three_perm_implies_some_half_margin(self):
        for P in all_posets(5, 3):
            for params in get_check("three-perm").bindings(P, SweepConfig()):
                v = check("three-perm", P, params)
                assert v.lhs >= 1
                assert check("three-half", P, params).status != FAILS

    def test_cdf_route_matches(self):
        from posetcorr.sequences import suffix_sums_logconcave
        from posetcorr.counting import value_counts

        for P in all_posets(6, 1):
            for x in range(P.n):
                row = list(value_counts(P, x)[1:])
                first = next(i for i, c in enumerate(row) if c)
                last = max(i for i, c in enumerate(row) if c)
                assert suffix_sums_logconcave(row[first:last + 1])
                for k in range(2, P.n):
                    assert check("stanley-cdf", P, x=x, k=k).status != FAILS


class TestSweep:
    def test_small_posets_no_proved_fails(self):
        proved = check_ids(conjecture=False)
        for P in all_posets(4):
            assert sweep(P, proved).fails() == []

    def test_random_larger_posets_no_proved_fails(self):
        cfg = SweepConfig(max_random_subsets=16, seed=4)
        proved = check_ids(conjecture=False)
        for P in [from_relations(7, [(0, 3), (1, 3), (1, 4), (2, 5), (4, 6)]), parallel_sum(chain(3), chain(4))]:
            assert sweep(P, proved, cfg).fails() == []

    def test_deterministic(self):
        P = from_relations(7, [(0, 2), (1, 3), (3, 5)])
        cfg = SweepConfig(max_random_subsets=8, seed=1)
        a = sweep(P, ["subset-two", "multi-cov"], cfg)
        b = sweep(P, ["subset-two", "multi-cov"], cfg)
        assert to_jsonl(a.verdicts) == to_jsonl(b.verdicts)
        assert a.histogram() == b.histogram()
        other = sweep(P, ["subset-two"], SweepConfig(max_random_subsets=8, seed=2))
        binds = lambda c: [json.dumps(ineq.serialize_params(p), sort_keys=True)  # noqa: E731
                           for p in get_check("subset-two").bindings(P, c)]
        assert binds(cfg) != binds(SweepConfig(max_random_subsets=8, seed=2))
        assert other.fails() == []

    def test_exhaustive_subsets_small(self):
        P = antichain(4)
        binds = list(get_check("subset-ext1").bindings(P, SweepConfig()))
        assert len(binds) == 15

    def test_report_merge_and_histogram(self):
        a = sweep(antichain(3), ["corr-del-lower", "stanley"])
        b = sweep(chain(3), ["corr-del-lower", "stanley"])
        merged = SweepReport()
        merged.merge(a)
        merged.merge(b)
        h = merged.histogram()
        assert h["corr-del-lower"] == {"Equality": 3}
        assert sum(h["stanley"].values()) == 6
        assert set(merged.extremes_json()) == {"corr-del-lower", "stanley"}

    def test_jsonl_schema(self):
        rep = sweep(antichain(3), ["corr-del-lower"])
        lines = to_jsonl(rep.verdicts).splitlines()
        rec = json.loads(lines[0])
        assert set(rec) == {"check_id", "status", "relation", "lhs", "rhs", "poset", "params"}
        assert rec["lhs"] == "3/2"

    def test_iter_verdicts_order(self):
        ids = [v.check_id for v in iter_verdicts(antichain(3), ["stanley", "corr-del-lower"])]
        assert ids == sorted(ids)


class TestBruhat:
    def test_minimal_records(self):
        assert minimal_records((3, 1, 2)) == [0, 1]
        assert minimal_records((1, 2, 3)) == [0]

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_sandwich(self, n):
        for params in bruhat_bindings(n):
            assert check("bruhat-bounds", antichain(0), params).status != FAILS

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_equality_cases(self, n):
        rev = tuple(range(n, 0, -1))
        assert check("bruhat-bounds", antichain(0), sigma=rev, a=0, b=1).lhs == F(n, n - 1)
        swap = (2, 1) + tuple(range(3, n + 1))
        assert check("bruhat-bounds", antichain(0), sigma=swap, a=0, b=1).lhs == 2
        assert permutation_poset(rev) == antichain(n)

    def test_not_minimal_records(self):
        with pytest.raises(PreconditionViolated):
            check("bruhat-bounds", antichain(0), sigma=(1, 2, 3), a=0, b=1)


def test_injected_check_roundtrip():
    def fn(P, p, method):
        return product_verdict("tmp-check", 1, 0, "<=")

    ineq.register(CheckDef("tmp-check", ("x",), fn, lambda P, cfg: iter([{"x": 0}]), conjecture=True))
    try:
        assert sweep(chain(2), ["tmp-check"]).fails(conjecture=True)
    finally:
        ineq.unregister("tmp-check")
    assert "tmp-check" not in check_ids()
