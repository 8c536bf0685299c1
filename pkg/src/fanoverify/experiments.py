"""Randomized experiments: hypersurfaces through curves, very free searches.

Every trial draws from its own generator seeded by ``"<seed>:<index>"``, so
results do not depend on how trials are scheduled across workers.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence

from .bundles import SplittingType
from .errors import EmptySystem, FanoVerifyError, PreconditionFailed
from .example import linear_system_through
from .field import FieldSpec
from .forms import BinaryForm, MultiForm, binary_gcd
from .geometry import (
    Hypersurface,
    RationalCurve,
    contains_curve,
    is_immersion,
    is_typical,
    pullback_tangent_splitting,
    smooth_along_curve,
)

CATEGORIES = ("on_hypersurface", "smooth_along", "typical", "very_free", "errors")
MAX_WITNESSES = 5


@dataclass(frozen=True)
class TrialConfig:
    n: int
    d: int
    e: int
    field: FieldSpec
    trials: int
    seed: int
    height: int = 10

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.n < 2 or self.d < 1 or self.e < 1:
            raise ValueError("need n >= 2, d >= 1, e >= 1")
        if self.e > self.n:
            raise ValueError("curve degree must not exceed n")
        if self.height < 1:
            raise ValueError("height must be positive")

    def to_json(self) -> dict:
        out = {"n": self.n, "d": self.d, "e": self.e, "trials": self.trials,
               "seed": self.seed, "height": self.height}
        out.update(self.field.to_json())
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TrialConfig":
        return cls(int(obj["n"]), int(obj["d"]), int(obj["e"]), FieldSpec.from_json(obj),
                   int(obj["trials"]), int(obj["seed"]), int(obj.get("height", 10)))


@dataclass
class TrialStats:
    config: TrialConfig
    counts: Dict[str, int] = dc_field(default_factory=lambda: {c: 0 for c in CATEGORIES})
    rejected_curves: int = 0
    witnesses: Dict[str, List[dict]] = dc_field(default_factory=lambda: {c: [] for c in CATEGORIES})
    splittings: Dict[str, int] = dc_field(default_factory=dict)

    def record(self, outcome: dict) -> None:
        self.rejected_curves += outcome["rejected"]
        if "error" in outcome:
            self.counts["errors"] += 1
            self._keep("errors", outcome)
            return
        key = ",".join(str(a) for a in outcome["splitting"]) if "splitting" in outcome else None
        if key is not None:
            self.splittings[key] = self.splittings.get(key, 0) + 1
        for cat in CATEGORIES[:-1]:
            if outcome.get(cat):
                self.counts[cat] += 1
                self._keep(cat, outcome)

    def _keep(self, cat: str, outcome: dict) -> None:
        if len(self.witnesses[cat]) < MAX_WITNESSES:
            self.witnesses[cat].append(outcome["witness"])

    def to_json(self) -> dict:
        return {"config": self.config.to_json(), "counts": dict(self.counts),
                "rejected_curves": self.rejected_curves,
                "splittings": dict(sorted(self.splittings.items())),
                "witnesses": {c: list(w) for c, w in self.witnesses.items()}}


def trial_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def random_form(field: FieldSpec, degree: int, rng, height: int = 10) -> BinaryForm:
    return BinaryForm(field, [field.random_element(rng, height) for _ in range(degree + 1)])


def random_curve(field: FieldSpec, n: int, e: int, rng, height: int = 10, max_tries: int = 1000):
    """Random degree-``e`` curve in P^n; returns ``(curve, rejections)``."""
    for tries in range(max_tries):
        comps = [random_form(field, e, rng, height) for _ in range(n + 1)]
        nonzero = [c for c in comps if c.coeffs]
        if nonzero and binary_gcd(nonzero).degree == 0:
            return RationalCurve(field, tuple(comps)), tries
    raise RuntimeError("could not sample a curve without common roots")


def sample_hypersurface_containing(f: RationalCurve, degree: int, rng, height: int = 10) -> Hypersurface:
    """Random nonzero member of the degree-``degree`` forms vanishing on ``f``.

    Over F_p the combination of the basis is uniform on the linear system
    (zero is rejected); over Q coefficients are integers of bounded height.
    """
    field = f.field
    basis = linear_system_through([f], degree)
    if not basis:
        raise EmptySystem("no form of degree %d contains the curve" % degree)
    while True:
        coeffs = [field.random_element(rng, height) for _ in basis]
        if not any(coeffs):
            continue
        F = MultiForm(field, f.n + 1, degree, {})
        for c, g in zip(coeffs, basis):
            if c:
                F = F + g.scale(c)
        if not F.is_zero():
            return Hypersurface.from_form(F)


def _witness(X: Hypersurface, f: RationalCurve, index: int, **extra) -> dict:
    out = {"trial": index, "hypersurface": X.to_json(), "curve": f.to_json()}
    out.update(extra)
    return out


def run_trial(cfg: TrialConfig, index: int) -> dict:
    """One trial; never raises for mathematical failures."""
    rng = trial_rng(cfg.seed, index)
    f, rejected = random_curve(cfg.field, cfg.n, cfg.e, rng, cfg.height)
    out: dict = {"trial": index, "rejected": rejected}
    try:
        X = sample_hypersurface_containing(f, cfg.d, rng, cfg.height)
    except EmptySystem as exc:
        out["error"] = type(exc).__name__
        out["witness"] = {"trial": index, "curve": f.to_json(), "error": str(exc)}
        return out
    try:
        out["on_hypersurface"] = contains_curve(X, f)
        out["smooth_along"] = smooth_along_curve(X, f)
        if not out["smooth_along"]:
            out["witness"] = _witness(X, f, index)
            return out
        split = pullback_tangent_splitting(X, f)
        out["splitting"] = list(split.degrees)
        out["very_free"] = all(a >= 1 for a in split.degrees)
        if cfg.d == cfg.n and is_immersion(f):
            rep = is_typical(X, f)
            out["typical"] = rep.typical
            out["normal_splitting"] = list(rep.splitting.degrees)
            out["routes_agree"] = rep.routes_agree
    except FanoVerifyError as exc:
        out["error"] = type(exc).__name__
        out["witness"] = _witness(X, f, index, error=str(exc))
        return out
    extra = {"splitting": out["splitting"]}
    if "normal_splitting" in out:
        extra["normal_splitting"] = out["normal_splitting"]
    out["witness"] = _witness(X, f, index, **extra)
    return out


def _run_chunk(args):
    cfg, indices = args
    return [run_trial(cfg, i) for i in indices]


def iter_trials(cfg: TrialConfig, workers: int = 1):
    """Trial outcomes in index order, optionally computed by a process pool."""
    indices = list(range(cfg.trials))
    if workers <= 1:
        for i in indices:
            yield run_trial(cfg, i)
        return
    chunks = [(cfg, indices[k::workers]) for k in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
    yield from sorted(results, key=lambda r: r["trial"])


def very_free_search(cfg: TrialConfig, workers: int = 1, stop_after: Optional[int] = None) -> TrialStats:
    """Tally random (curve, hypersurface through it) trials.

    ``stop_after`` ends the run once that many very free curves were found;
    the result is still deterministic because trials are consumed in order.
    """
    stats = TrialStats(cfg)
    for outcome in iter_trials(cfg, workers):
        stats.record(outcome)
        if stop_after is not None and stats.counts["very_free"] >= stop_after:
            break
    return stats


def verify_witness(obj: dict, category: str = "very_free") -> bool:
    """Re-derive a stored witness from its JSON form."""
    X = Hypersurface.from_json(obj["hypersurface"])
    f = RationalCurve.from_json(X.field, obj["curve"])
    if not contains_curve(X, f):
        return False
    if category == "on_hypersurface":
        return True
    if not smooth_along_curve(X, f):
        return False
    split = pullback_tangent_splitting(X, f)
    if "splitting" in obj and list(split.degrees) != list(obj["splitting"]):
        return False
    if category == "very_free":
        return all(a >= 1 for a in split.degrees)
    if category == "typical":
        return is_typical(X, f).typical
    return True


# ---------------------------------------------------------------------------
# linear sections


@dataclass
class SectionLiftReport:
    section_splitting: SplittingType
    splitting: SplittingType
    very_free: bool

    def __bool__(self):
        return self.very_free

    def to_json(self) -> dict:
        return {"section_splitting": list(self.section_splitting.degrees),
                "splitting": list(self.splitting.degrees), "very_free": self.very_free}


def restrict_to_coordinates(Y: Hypersurface, section_vars: Sequence[int]) -> Hypersurface:
    """``Y`` intersected with the coordinate subspace spanned by ``section_vars``."""
    keep = list(section_vars)
    pos = {v: i for i, v in enumerate(keep)}
    terms = {}
    for exp, c in Y.F.terms.items():
        if all(k == 0 for i, k in enumerate(exp) if i not in pos):
            terms[tuple(exp[v] for v in keep)] = c
    G = MultiForm(Y.field, len(keep), Y.d, terms)
    if G.is_zero():
        raise PreconditionFailed("the linear section is contained in the hypersurface")
    return Hypersurface.from_form(G)


def embed_curve(f: RationalCurve, section_vars: Sequence[int], n: int) -> RationalCurve:
    comps = [BinaryForm.zero(f.field)] * (n + 1)
    for c, v in zip(f.components, section_vars):
        comps[v] = c
    return RationalCurve(f.field, tuple(comps))


def section_lift_check(Y: Hypersurface, section_vars: Sequence[int], f: RationalCurve) -> SectionLiftReport:
    """Is a very free curve of the section ``Y cap L`` very free in ``Y``?

    ``f`` is given in the coordinates ``section_vars`` of ``L``.  Both
    splittings are computed from scratch.
    """
    section_vars = list(section_vars)
    if len(set(section_vars)) != len(section_vars) or len(section_vars) != Y.d + 1:
        raise PreconditionFailed("need d+1 distinct section coordinates")
    if not all(0 <= v <= Y.n for v in section_vars):
        raise PreconditionFailed("section coordinate out of range")
    if Y.d >= Y.n:
        raise PreconditionFailed("section argument needs d < n")
    if f.n + 1 != len(section_vars):
        raise PreconditionFailed("curve does not live in the section")
    S = restrict_to_coordinates(Y, section_vars)
    if not contains_curve(S, f) or not smooth_along_curve(S, f):
        raise PreconditionFailed("curve is not in the smooth locus of the section")
    inner = pullback_tangent_splitting(S, f)
    if not all(a >= 1 for a in inner.degrees):
        raise PreconditionFailed("curve is not very free in the section: %s" % inner)
    g = embed_curve(f, section_vars, Y.n)
    if not smooth_along_curve(Y, g):
        raise PreconditionFailed("hypersurface is singular along the curve")
    split = pullback_tangent_splitting(Y, g)
    return SectionLiftReport(inner, split, all(a >= 1 for a in split.degrees))


def extend_from_section(S: Hypersurface, n: int, section_vars: Sequence[int], rng,
                        height: int = 10) -> Hypersurface:
    """A random degree-d hypersurface of P^n whose section by ``L`` is ``S``.

    Adds ``sum_j x_j * G_j`` over the coordinates ``x_j`` outside the section,
    with random forms ``G_j`` of degree ``d - 1``.
    """
    from .forms import monomial_exponents

    field = S.field
    keep = list(section_vars)
    terms = {}
    for exp, c in S.F.terms.items():
        full = [0] * (n + 1)
        for v, k in zip(keep, exp):
            full[v] = k
        terms[tuple(full)] = c
    F = MultiForm(field, n + 1, S.d, terms)
    others = [j for j in range(n + 1) if j not in keep]
    for j in others:
        for exp in monomial_exponents(n + 1, S.d - 1):
            c = field.random_element(rng, height)
            if c:
                full = list(exp)
                full[j] += 1
                F = F + MultiForm(field, n + 1, S.d, {tuple(full): c})
    return Hypersurface.from_form(F)
