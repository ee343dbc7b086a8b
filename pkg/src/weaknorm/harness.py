"""Run theorem checks over a corpus of groups and collect verdicts into a report.

Work is split per group.  A group is described by a small picklable source
descriptor so worker processes rebuild it locally; verdicts are merged and
sorted by (group id, check id), and the report carries no timing or worker
information, so its JSON bytes do not depend on the degree of parallelism.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import catalog, lattice, metrics
from .checks import REGISTRY, Ctx, Inst, TheoremCheck, q57_assertion, q57_hypothesis, theorem_ids
from .errors import GroupError
from .formations import p_supersolvable, parse_formation
from .norms import norm_series
from .perm import PermGroup

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
STATUSES = ("PASS", "FAIL", "SKIPPED", "ERROR", "COUNTEREXAMPLE")
DEFAULT_MAX_ORDER = 96


class ConfigError(ValueError):
    """Bad corpus spec, suite selection or option value (exit code 2)."""


# verdicts and reports --------------------------------------------------------------

@dataclass
class Verdict:
    group: str
    check: str
    status: str
    instances: int = 0
    unproven: bool = False
    value: Any = None
    witness: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(**d)


@dataclass
class Report:
    kind: str
    metadata: dict
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def totals(self) -> dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for v in self.verdicts:
            out[v.status] += 1
        return out

    @property
    def tallies(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for v in self.verdicts:
            row = out.setdefault(v.check, {s: 0 for s in STATUSES})
            row[v.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        t = self.totals
        return 1 if t["FAIL"] or t["COUNTEREXAMPLE"] else 0

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "metadata": self.metadata,
            "totals": self.totals,
            "tallies": self.tallies,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        report = cls(d["kind"], d["metadata"], [Verdict.from_dict(v) for v in d["verdicts"]])
        if report.totals != d["totals"] or report.tallies != d["tallies"]:
            raise ValueError("report totals disagree with its verdicts")
        return report

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def jsonable(x: Any) -> Any:
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if x is None or isinstance(x, (str, float)):
        return x
    return str(x)


# single check ------------------------------------------------------------------------

def check_theorem(G: PermGroup | Ctx, check: TheoremCheck) -> Verdict:
    """Evaluate every instance whose hypothesis holds; stop at the first failure.
    SKIPPED when no instance meets the hypothesis; exceptions become ERROR."""
    ctx = G if isinstance(G, Ctx) else Ctx(G)
    name = ctx.G.name or "G"
    count = 0
    try:
        for inst in check.instances(ctx):
            if not check.hypothesis(ctx, inst):
                continue
            count += 1
            ok, computed, expected = check.assertion(ctx, inst)
            if not ok:
                witness = {
                    "group_file": catalog.dump_group(ctx.G, name),
                    "instance": inst.describe(),
                    "computed": jsonable(computed),
                    "expected": jsonable(expected),
                }
                return Verdict(name, check.id, "FAIL", count, check.unproven, witness=witness)
    except (GroupError, ArithmeticError, ValueError, AssertionError) as exc:
        return Verdict(name, check.id, "ERROR", count, check.unproven,
                       witness={"error": f"{type(exc).__name__}: {exc}"})
    return Verdict(name, check.id, "PASS" if count else "SKIPPED", count, check.unproven)


def _instance_from(G: PermGroup, desc: dict) -> Inst:
    subs = {}
    for key in ("H", "K", "N", "M"):
        if key in desc:
            subs[key] = G.subgroup([G.index(g) for g in desc[key]["generators"]])
    tag = parse_formation(desc["formation"]) if "formation" in desc else None
    return Inst(p=desc.get("p"), k=desc.get("k"), tag=tag, **subs)


def replay_witness(verdict: Verdict | dict) -> bool:
    """Rebuild the group and instance of a FAIL witness in a fresh context and
    re-evaluate: True when the hypothesis holds and the assertion fails again."""
    v = Verdict.from_dict(verdict) if isinstance(verdict, dict) else verdict
    if not v.witness or "group_file" not in v.witness:
        raise ValueError("verdict carries no replayable witness")
    G = catalog.load_group(v.witness["group_file"])
    ctx = Ctx(G)
    inst = _instance_from(G, v.witness["instance"])
    if v.check == "Q5.7":
        return q57_hypothesis(ctx, inst) and not q57_assertion(ctx, inst)[0]
    check = REGISTRY[v.check]
    return check.hypothesis(ctx, inst) and not check.assertion(ctx, inst)[0]


# corpus descriptors ----------------------------------------------------------------

Source = tuple[str, str]


def resolve_corpus(spec: str, max_order: int | None = None) -> list[Source]:
    """Turn a corpus spec into source descriptors.

    ``default`` is every generated group up to ``max_order`` plus the fixtures,
    ``fixtures`` and ``generated`` select one half, ``none`` is empty, an existing
    directory contributes its ``*.grp`` files, an existing file is one group, and
    anything else is a fixture name or a product recipe such as ``S3xC4``.
    Comma-separated items are combined; duplicates are dropped.
    """
    limit = DEFAULT_MAX_ORDER if max_order is None else max_order
    out: list[Source] = []
    for item in (s.strip() for s in spec.split(",")):
        if not item or item == "none":
            continue
        path = Path(item)
        if item in ("default", "generated"):
            cs = replace(catalog.CorpusSpec.default(), max_order=limit)
            recipes = catalog.corpus_recipes(cs)
            if item == "default":
                # a fixture replaces the generated group of the same name
                recipes = [r for r in recipes if r not in catalog.FIXTURE_NAMES]
            out += [("recipe", r) for r in recipes]
            if item == "default":
                out += [("fixture", n) for n in catalog.FIXTURE_NAMES]
        elif item == "fixtures":
            out += [("fixture", n) for n in catalog.FIXTURE_NAMES]
        elif item in catalog.FIXTURE_NAMES:
            out.append(("fixture", item))
        elif path.is_dir():
            out += [("file", str(f)) for f in sorted(path.glob("*.grp"))]
        elif path.is_file():
            out.append(("file", str(path)))
        else:
            try:
                catalog.recipe_order(item)
            except GroupError as exc:
                raise ConfigError(f"unknown corpus item {item!r}") from exc
            out.append(("recipe", item))
    seen: set[Source] = set()
    return [s for s in out if not (s in seen or seen.add(s))]


def build_source(src: Source) -> PermGroup:
    kind, ref = src
    if kind == "fixture":
        return catalog.builtin_fixture(ref)
    if kind == "recipe":
        return catalog.build_recipe(ref)
    return catalog.load_group(Path(ref))


def select_checks(suite: str | Sequence[str] = "all") -> list[TheoremCheck]:
    """``all`` or ids; an id also selects its sub-checks (``T3.4`` picks both directions)."""
    if isinstance(suite, str):
        suite = ["all"] if suite.strip() == "all" else [s.strip() for s in suite.split(",") if s.strip()]
    if list(suite) == ["all"]:
        return [REGISTRY[k] for k in theorem_ids()]
    chosen: set[str] = set()
    for token in suite:
        hits = [k for k in REGISTRY if k == token or k.startswith(token + ".")]
        if not hits:
            raise ConfigError(f"unknown check id {token!r}")
        chosen.update(hits)
    return [REGISTRY[k] for k in sorted(chosen)]


# suite and search ----------------------------------------------------------------------

def _error_row(src: Source, check_id: str, exc: Exception) -> dict:
    return Verdict(src[1], check_id, "ERROR", witness={"error": f"{type(exc).__name__}: {exc}"}).to_dict()


def _verify_group(src: Source, check_ids: list[str]) -> list[dict]:
    try:
        ctx = Ctx(build_source(src))
    except (GroupError, OSError) as exc:
        return [_error_row(src, cid, exc) for cid in check_ids]
    return [check_theorem(ctx, REGISTRY[cid]).to_dict() for cid in check_ids]


def _search_group(src: Source, p: int) -> list[dict]:
    try:
        G = build_source(src)
    except (GroupError, OSError) as exc:
        return [_error_row(src, "Q5.7", exc)]
    name = G.name or src[1]
    try:
        ctx = Ctx(G)
        inst = Inst(p=p)
        if not q57_hypothesis(ctx, inst):
            return [Verdict(name, "Q5.7", "SKIPPED").to_dict()]
        ok, lp, _ = q57_assertion(ctx, inst)
        if ok:
            return [Verdict(name, "Q5.7", "PASS", 1, value=lp).to_dict()]
        series = metrics.upper_p_series(G, p)
        witness = {
            "group_file": catalog.dump_group(G, name),
            "instance": inst.describe(),
            "computed": lp,
            "expected": "<= 2",
            "upper_p_series": series.orders,
            "norm_series": norm_series(G, p_supersolvable(p)).orders,
        }
        return [Verdict(name, "Q5.7", "COUNTEREXAMPLE", 1, value=lp, witness=witness).to_dict()]
    except (GroupError, ArithmeticError, ValueError, AssertionError) as exc:
        return [Verdict(name, "Q5.7", "ERROR", witness={"error": f"{type(exc).__name__}: {exc}"}).to_dict()]


def _init_worker(cache_dir: str | None) -> None:
    if cache_dir:
        lattice.set_cache_dir(Path(cache_dir))


def _map(fn, sources: list[Source], extra, jobs: int, cache_dir: str | None) -> list[dict]:
    rows: list[dict] = []
    if jobs <= 1 or len(sources) <= 1:
        _init_worker(cache_dir)
        for src in sources:
            rows += fn(src, extra)
        return rows
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(cache_dir,)) as pool:
        for part in pool.map(fn, sources, [extra] * len(sources), chunksize=1):
            rows += part
    return rows


def _collect(rows: Iterable[dict]) -> list[Verdict]:
    return sorted((Verdict.from_dict(r) for r in rows), key=lambda v: (v.group, v.check))


def run_suite(sources: list[Source], checks: Sequence[TheoremCheck] | None = None, jobs: int = 1,
              cache_dir: str | None = None, metadata: dict | None = None) -> Report:
    """Every (group, check) pair, sorted by group id then check id."""
    checks = select_checks("all") if checks is None else list(checks)
    ids = [c.id for c in checks]
    # largest groups first keeps the pool busy until the end
    order = sorted(sources, key=_size_hint, reverse=True) if jobs > 1 else sources
    verdicts = _collect(_map(_verify_group, order, ids, jobs, cache_dir))
    meta = {"groups": len(sources), "checks": ids, **(metadata or {})}
    return Report("verify", meta, verdicts)


def search_counterexamples(sources: list[Source], p: int, question: str = "Q5.7", jobs: int = 1,
                           cache_dir: str | None = None, metadata: dict | None = None) -> Report:
    """Record ``l_p(G)`` on every group meeting the hypothesis of the open question and
    flag ``l_p(G) > 2`` as a counterexample."""
    if question.upper() != "Q5.7":
        raise ConfigError(f"unknown question {question!r}")
    verdicts = _collect(_map(_search_group, sources, p, jobs, cache_dir))
    meta = {"groups": len(sources), "question": "Q5.7", "p": p, **(metadata or {})}
    return Report("search", meta, verdicts)


def _size_hint(src: Source) -> int:
    kind, ref = src
    if kind == "fixture":
        return catalog.FIXTURE_ORDERS[ref]
    if kind == "recipe":
        return catalog.recipe_order(ref)
    return 0

