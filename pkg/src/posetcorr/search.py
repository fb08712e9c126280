"""Poset generators and the counterexample hunt.

A hunt sweeps every generated poset with a set of registered checks.  A
failing conjecture check is re-verified with the enumeration oracle, shrunk
to a locally minimal witness and appended to a JSONL file.  A failing proved
check means a bug in this library and is reported separately.
"""

from __future__ import annotations

import json
import multiprocessing as mp
import os
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from . import __version__, counting
from . import inequalities as ineq
from .counting import CapExceeded
from .inequalities import CheckDef, PreconditionViolated, SweepConfig, SweepReport
from .poset import Poset, canonical_form, is_downset, restrict
from .rng import SplitMix64
from .verdict import FAILS, Verdict, product_verdict

EXHAUSTIVE_MAX_N = 8
KINDS = ("exhaustive", "random-bipartite", "random-kdim", "file")
ELEMENT_KEYS = ("a", "u", "v", "w", "x", "y", "z")
SUBSET_KEYS = ("A", "B", "C")


@dataclass(frozen=True)
class GeneratorSpec:
    """Which posets to produce.

    ``exhaustive`` walks isomorphism classes with ``n_min <= size <= n``;
    the random kinds draw ``count`` posets of size ``n`` from ``seed``.
    """

    kind: str = "exhaustive"
    n: int = 5
    n_min: int | None = None
    count: int = 1
    seed: int = 0
    edge_prob: float = 0.5
    k: int = 2
    path: str | None = None
    max_random_subsets: int = 512
    ideal_budget: int = counting.IDEAL_BUDGET

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "exhaustive" and self.n > EXHAUSTIVE_MAX_N:
            raise CapExceeded(f"exhaustive generation is capped at n = {EXHAUSTIVE_MAX_N}")
        if self.n < 0 or self.count < 0:
            raise ValueError("sizes must be nonnegative")

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@lru_cache(maxsize=None)
def isomorphism_classes(n: int) -> tuple[Poset, ...]:
    """One representative per isomorphism class of n-element posets.

    Every poset has a maximal element, so extending each (n-1)-class by a new
    maximal element over every downset reaches all classes; duplicates are
    removed by canonical form.
    """
    if n > EXHAUSTIVE_MAX_N:
        raise CapExceeded(f"exhaustive generation is capped at n = {EXHAUSTIVE_MAX_N}")
    if n == 0:
        return (Poset(0, ()),)
    seen: dict[bytes, Poset] = {}
    for Q in isomorphism_classes(n - 1):
        for D in range(1 << (n - 1)):
            if is_downset(Q, D):
                P = Poset(n, Q.down + (D,))
                seen.setdefault(canonical_form(P), P)
    return tuple(sorted(seen.values(), key=lambda P: (P.down, canonical_form(P))))


def random_kdim(n: int, k: int, rng: SplitMix64) -> Poset:
    """Intersection of k uniformly random linear orders on n points."""
    pos = []
    for _ in range(k):
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = rng.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        rank = [0] * n
        for r, e in enumerate(perm):
            rank[e] = r
        pos.append(rank)
    order = sorted(range(n), key=lambda e: pos[0][e])
    relabel = {e: i for i, e in enumerate(order)}
    down = [0] * n
    for a in range(n):
        for b in range(n):
            if a != b and all(r[a] < r[b] for r in pos):
                down[relabel[b]] |= 1 << relabel[a]
    return Poset(n, tuple(down))


def random_bipartite(n: int, p: float, rng: SplitMix64) -> Poset:
    """Height-two poset: each of the lower ceil(n/2) points sits below each
    upper point independently with probability p."""
    low = (n + 1) // 2
    down = [0] * n
    for t in range(low, n):
        for b in range(low):
            if rng.random() < p:
                down[t] |= 1 << b
    return Poset(n, tuple(down))


def _read_posets(path: str) -> Iterator[Poset]:
    text = Path(path).read_text()
    stripped = text.lstrip()
    docs = json.loads(text) if stripped.startswith("[") else [json.loads(l) for l in text.splitlines() if l.strip()]
    for doc in docs:
        yield Poset.from_dict(doc)


def generate(spec: GeneratorSpec) -> Iterator[Poset]:
    if spec.kind == "exhaustive":
        lo = spec.n if spec.n_min is None else spec.n_min
        for n in range(lo, spec.n + 1):
            yield from isomorphism_classes(n)
    elif spec.kind == "random-kdim":
        rng = SplitMix64(spec.seed)
        for _ in range(spec.count):
            yield random_kdim(spec.n, spec.k, rng)
    elif spec.kind == "random-bipartite":
        rng = SplitMix64(spec.seed)
        for _ in range(spec.count):
            yield random_bipartite(spec.n, spec.edge_prob, rng)
    else:
        if not spec.path:
            raise ValueError("file generator needs a path")
        yield from _read_posets(spec.path)


def expected_count(spec: GeneratorSpec) -> int | None:
    if spec.kind == "exhaustive":
        lo = spec.n if spec.n_min is None else spec.n_min
        return sum(len(isomorphism_classes(n)) for n in range(lo, spec.n + 1))
    if spec.kind == "file":
        return None
    return spec.count


# -- discoveries ----------------------------------------------------------------


@dataclass(frozen=True)
class Discovery:
    check_id: str
    witness: dict
    lhs: str
    rhs: str
    verified_by_oracle: bool
    generator: dict = field(default_factory=dict)
    seed: int = 0
    original: dict | None = None     # witness before shrinking

    def to_json(self) -> dict:
        out = asdict(self)
        if out["original"] is None:
            del out["original"]
        return out

    @property
    def poset(self) -> Poset:
        return Poset.from_dict(self.witness["poset"])

    @property
    def params(self) -> dict:
        return dict(self.witness["params"])


def _evaluate(check_id: str, P: Poset, params: dict, method: str) -> Verdict | None:
    try:
        return ineq.check(check_id, P, params, method=method)
    except (PreconditionViolated, ValueError, KeyError, IndexError):
        return None


def oracle_fails(check_id: str, P: Poset, params: dict) -> Verdict | None:
    """The verdict recomputed by enumeration, if it is still a failure."""
    if P.n > counting.ENUM_CAP:
        return None
    v = _evaluate(check_id, P, params, "enum")
    return v if v is not None and v.status == FAILS else None


def _discovery(v: Verdict, gen: dict, seed: int, original: dict | None = None) -> Discovery:
    j = v.to_json()
    return Discovery(v.check_id, {"poset": j["poset"], "params": j["params"]}, j["lhs"], j["rhs"], True, gen, seed, original)


def _delete_candidates(P: Poset, params: dict, e: int) -> Iterator[tuple[Poset, dict]]:
    keep = P.full & ~(1 << e)
    Q, kept = restrict(P, keep)
    idx = {old: new for new, old in enumerate(kept)}
    out = {}
    for key, val in params.items():
        if key in ELEMENT_KEYS:
            if val == e:
                return
            out[key] = idx[val]
        elif key in SUBSET_KEYS:
            S = [idx[s] for s in val if s != e]
            if not S:
                return
            out[key] = sorted(S)
        else:
            out[key] = val
    yield Q, out
    for key in ("k", "l"):
        if isinstance(out.get(key), int) and out[key] > 1:
            yield Q, dict(out, **{key: out[key] - 1})


def _subset_candidates(P: Poset, params: dict) -> Iterator[tuple[Poset, dict]]:
    for key in SUBSET_KEYS:
        S = params.get(key)
        if isinstance(S, list) and len(S) > 1:
            for s in S:
                yield P, dict(params, **{key: [t for t in S if t != s]})


def shrink(d: Discovery) -> Discovery:
    """Greedily delete elements and subset members while the oracle still
    confirms the violation."""
    P, params = d.poset, d.params
    if oracle_fails(d.check_id, P, params) is None:
        return d
    changed = True
    while changed:
        changed = False
        moves = [c for e in range(P.n) for c in _delete_candidates(P, params, e)]
        moves += list(_subset_candidates(P, params))
        for Q, p in moves:
            if oracle_fails(d.check_id, Q, p) is not None:
                P, params, changed = Q, p, True
                break
    v = oracle_fails(d.check_id, P, params)
    if v.to_json()["poset"] == d.witness["poset"] and v.to_json()["params"] == d.params:
        return d
    return _discovery(v, d.generator, d.seed, d.original or d.witness)


# -- hunting ---------------------------------------------------------------------


@dataclass
class HuntResult:
    discoveries: list[Discovery]
    bugs: list[Verdict]
    report: SweepReport
    posets: int
    complete: bool
    wall_time: float = 0.0

    @property
    def exit_code(self) -> int:
        return 2 if self.bugs else 3 if self.discoveries else 0

    def summary(self) -> dict:
        """Deterministic summary (no timings)."""
        return {
            "posets": self.posets,
            "complete": self.complete,
            "discoveries": len(self.discoveries),
            "bugs": len(self.bugs),
            "histogram": self.report.histogram(),
            "extremes": self.report.extremes_json(),
        }


def default_workers() -> int:
    env = os.environ.get("POSETCORR_WORKERS")
    if env:
        return max(1, int(env))
    return 1


def _sweep_one(job: tuple[dict, tuple[str, ...], SweepConfig]) -> SweepReport:
    doc, ids, cfg = job
    return ineq.sweep(Poset.from_dict(doc), ids, cfg)


def _sweep_stream(posets: Iterable[Poset], ids: tuple[str, ...], cfg: SweepConfig, workers: int,
                  deadline: float | None) -> Iterator[SweepReport]:
    jobs = ((P.to_dict(), ids, cfg) for P in posets)
    if workers <= 1:
        for job in jobs:
            if deadline is not None and time.monotonic() > deadline:
                return
            yield _sweep_one(job)
        return
    ctx = mp.get_context("fork")
    with ctx.Pool(workers) as pool:
        # imap keeps generation order, so aggregation does not depend on scheduling
        for rep in pool.imap(_sweep_one, jobs, chunksize=4):
            if deadline is not None and time.monotonic() > deadline:
                pool.terminate()
                return
            yield rep


class _Writer:
    """Append-only JSONL sink; each record is flushed and fsynced."""

    def __init__(self, path: str | None) -> None:
        self.fh = open(path, "a", encoding="utf-8") if path else None

    def write(self, record: dict) -> None:
        if self.fh:
            self.fh.write(json.dumps(record, sort_keys=True) + "\n")
            self.fh.flush()
            os.fsync(self.fh.fileno())

    def close(self) -> None:
        if self.fh:
            self.fh.close()


def hunt(check_ids: Sequence[str], spec: GeneratorSpec, budget_secs: float | None = None,
         workers: int | None = None, out: str | None = None, do_shrink: bool = True) -> HuntResult:
    """Sweep generated posets; collect oracle-verified conjecture failures."""
    for cid in check_ids:
        ineq.get_check(cid)
    ids = tuple(sorted(set(check_ids)))
    cfg = SweepConfig(max_random_subsets=spec.max_random_subsets, seed=spec.seed)
    workers = default_workers() if workers is None else workers
    start = time.monotonic()
    deadline = None if budget_secs is None else start + budget_secs
    report, posets = SweepReport(), 0
    discoveries: list[Discovery] = []
    bugs: list[Verdict] = []
    seen: set[str] = set()
    writer = _Writer(out)
    gen = spec.to_dict()
    try:
        for rep in _sweep_stream(generate(spec), ids, cfg, workers, deadline):
            posets += 1
            report.merge(rep)
            for v in rep.fails():
                if not ineq.get_check(v.check_id).conjecture:
                    bugs.append(v)
                    continue
                P, params = Poset.from_dict(v.witness["poset"]), v.witness["params"]
                confirmed = oracle_fails(v.check_id, P, params)
                if confirmed is None:
                    continue
                d = _discovery(confirmed, gen, spec.seed)
                if do_shrink:
                    d = shrink(d)
                key = json.dumps([d.check_id, d.witness], sort_keys=True)
                if key not in seen:
                    seen.add(key)
                    discoveries.append(d)
                    writer.write(d.to_json())
    finally:
        writer.close()
    total = expected_count(spec)
    complete = posets == total if total is not None else deadline is None or time.monotonic() <= deadline
    result = HuntResult(discoveries, bugs, report, posets, complete, time.monotonic() - start)
    if out:
        write_manifest(out + ".manifest.json", ids, spec, result)
    return result


def write_manifest(path: str, ids: Sequence[str], spec: GeneratorSpec, result: HuntResult) -> None:
    doc = {
        "checks": list(ids),
        "generator": spec.to_dict(),
        "seed": spec.seed,
        "version": __version__,
        "summary": result.summary(),
        "wall_time_secs": round(result.wall_time, 3),
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


# -- injected false check (harness) ----------------------------------------------


def _anti_stanley(P: Poset, p: dict, method: str) -> Verdict:
    x, k = p["x"], p["k"]
    if not (0 <= x < P.n and 2 <= k <= P.n - 1):
        raise PreconditionViolated("needs 2 <= k <= n-1")
    e = counting.value_counts(P, x, method)
    return product_verdict("anti-stanley", e[k] ** 2, e[k - 1] * e[k + 1], "<=", ineq._witness(P, p))


def _anti_stanley_bindings(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for x in range(P.n):
        for k in range(2, P.n):
            yield {"x": x, "k": k}


ANTI_STANLEY = CheckDef("anti-stanley", ("x", "k"), _anti_stanley, _anti_stanley_bindings, conjecture=True,
                        summary="deliberately false reversal of log-concavity, for harness tests")


@contextmanager
def injected_check(check: CheckDef = ANTI_STANLEY) -> Iterator[CheckDef]:
    """Temporarily register a check (by default a deliberately false one)."""
    ineq.register(check, replace=True)
    try:
        yield check
    finally:
        ineq.unregister(check.id)
