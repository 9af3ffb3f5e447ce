"""Catalog of congruence checks and the sweep runner.

Every check evaluates its left side by the direct q-MHS evaluator and its
right side from the stated closed form, then records whether the difference
reduces to zero.  A check result is ``passed`` (True), ``failed`` (False,
with the nonzero difference as witness) or ``skipped`` (None, the parameters
fall outside the statement's hypotheses).
"""

from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Iterator

from . import __version__
from .combinat import B4_SECOND_KIND_NOTE, k_value
from .qmhs import (
    ConsistencyError,
    Index,
    closed_form_w1,
    closed_form_w2,
    closed_form_w3,
    h_norm,
    h_sum,
    homo_factor,
    homo_prefactor,
    homo_product_coeffs,
    homo_recursion,
    homogeneous_expected_degree,
    p_series,
    stuffle_expand,
)
from .exact import parse_poly
from .rings import Modulus, Residue, is_prime, one_minus_q, q_int, q_power, reduce

__all__ = [
    "CHECK_IDS",
    "CHECKS",
    "VerifyConfig",
    "CheckResult",
    "Report",
    "run_check",
    "run_all",
    "parse_prime_range",
]


def parse_prime_range(text: str) -> tuple[int, ...]:
    """Primes in an inclusive range ``"a..b"`` (or a single ``"a"``)."""
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        a, b = int(lo), int(hi)
    else:
        a = b = int(text)
    return tuple(n for n in range(a, b + 1) if is_prime(n))


@dataclass(frozen=True)
class VerifyConfig:
    primes: tuple[int, ...] = parse_prime_range("2..31")
    max_depth: int = 5
    max_order: int = 8
    max_s: int = 4
    max_m: int = 3
    max_half_n: int = 3
    stuffle_pairs: int = 10
    seed: int = 0
    checks: tuple[str, ...] | None = None
    jobs: int = 1

    def selected(self) -> tuple[str, ...]:
        if self.checks is None:
            return CHECK_IDS
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ValueError(f"unknown check id(s): {', '.join(unknown)}")
        return tuple(c for c in CHECK_IDS if c in self.checks)

    def echo(self) -> dict:
        """Configuration echoed into reports; ``jobs`` is left out so the
        report does not depend on the degree of parallelism."""
        d = asdict(self)
        d.pop("jobs")
        d["primes"] = list(self.primes)
        d["checks"] = list(self.selected())
        return d


@dataclass
class CheckResult:
    id: str
    params: dict
    passed: bool | None
    witness: str | None = None
    note: str | None = None

    @property
    def status(self) -> str:
        return {True: "passed", False: "failed", None: "skipped"}[self.passed]

    def witness_residue(self) -> Residue | None:
        """The witness as a residue modulo [prime]_q^exponent, when it is one."""
        if self.witness is None:
            return None
        m = Modulus(self.params["prime"], self.params.get("exponent", 1))
        try:
            return reduce(parse_poly(self.witness, "q"), m)
        except ValueError:
            return None

    def sort_key(self):
        rest = tuple((k, v) for k, v in sorted(self.params.items()) if k != "prime")
        return (self.id, self.params.get("prime", 0), rest)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "params": self.params,
            "passed": self.passed,
            "witness": self.witness,
            "note": self.note,
        }


@dataclass
class Report:
    results: list[CheckResult]
    summary: dict[str, dict[str, int]]
    environment: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.passed is not False for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.passed is False]

    def to_json(self) -> str:
        doc = {
            "environment": self.environment,
            "summary": self.summary,
            "results": [r.to_dict() for r in self.results],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        doc = json.loads(text)
        results = [CheckResult(**r) for r in doc["results"]]
        return cls(results, doc["summary"], doc["environment"])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "prime", "params", "status", "witness", "note"])
        for r in self.results:
            w.writerow([
                r.id,
                r.params.get("prime", ""),
                json.dumps(r.params, sort_keys=True),
                r.status,
                r.witness or "",
                r.note or "",
            ])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            params = " ".join(f"{k}={_fmt(v)}" for k, v in r.params.items())
            line = f"{r.status.upper():7} {r.id:15} {params}"
            if r.witness:
                line += f"  witness: {r.witness}"
            if r.note:
                line += f"  [{r.note}]"
            lines.append(line)
        lines.append("")
        for cid, counts in self.summary.items():
            lines.append(
                f"{cid:15} passed={counts['passed']} failed={counts['failed']} "
                f"skipped={counts['skipped']}"
            )
        lines.append("OK" if self.ok else f"FAILED ({len(self.failures)} failing checks)")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, list):
        return ",".join(map(str, v))
    return str(v)


# -- helpers -------------------------------------------------------------------


def _k_combo(n: int, t: int, p: int) -> Fraction:
    """sum_{i<t} C(t-1, i) (-1)^i K_{n-i}(p)."""
    return sum((comb(t - 1, i) * (-1) ** i * k_value(n - i, p) for i in range(t)), Fraction(0))


def _f_value(N: int, p: int, m: Modulus) -> Residue:
    return one_minus_q(m) ** (2 * N) * _k_combo(2 * N, N, p)


def _b4_note(max_k: int) -> str | None:
    return B4_SECOND_KIND_NOTE if max_k >= 4 else None


class Outcome:
    """What a single check evaluation produced."""

    __slots__ = ("diff", "witness", "note")

    def __init__(self, diff: Residue | None = None, witness: str | None = None, note=None):
        self.diff = diff
        self.witness = witness
        self.note = note


@dataclass(frozen=True)
class Check:
    id: str
    statement: str
    sweep: Callable[[VerifyConfig, int], Iterable[dict]]
    hypothesis: Callable[[dict], str | None]
    evaluate: Callable[[dict], Outcome]


def _need(cond: bool, reason: str) -> str | None:
    return None if cond else reason


# -- individual statements -------------------------------------------------------


def _sp1(P: dict) -> Outcome:
    p = P["prime"]
    m = Modulus(p, P.get("exponent", 2))
    lhs = h_sum(Index((1,)), p - 1, m)
    x = one_minus_q(m)
    rhs = x * Fraction(p - 1, 2) + x * x * q_int(p, m) * Fraction(p * p - 1, 24)
    return Outcome(lhs - rhs)


def _sp2(P: dict) -> Outcome:
    p = P["prime"]
    m = Modulus(p)
    return Outcome(h_norm(Index((2,)), p - 1, m) - Fraction(-(p - 1) * (p - 5), 12))


def _h3(P: dict) -> Outcome:
    p = P["prime"]
    m = Modulus(p)
    return Outcome(h_norm(Index((3,)), p - 1, m) - Fraction(-(p - 1) * (p - 3), 8))


def _dilcher(P: dict) -> Outcome:
    p, n = P["prime"], P["n"]
    m = Modulus(p)
    lhs = h_sum(Index((n,), (1,)), p - 1, m)
    rhs = one_minus_q(m) ** n * k_value(n, p)
    return Outcome(lhs - rhs, note=_b4_note(n))


def _modifier_t(P: dict) -> Outcome:
    p, n, t = P["prime"], P["n"], P["t"]
    m = Modulus(p)
    lhs = h_sum(Index((n,), (t,)), p - 1, m)
    rhs = one_minus_q(m) ** n * _k_combo(n, t, p)
    return Outcome(lhs - rhs, note=_b4_note(n))


def _t0(P: dict) -> Outcome:
    p, n = P["prime"], P["n"]
    m = Modulus(p)
    lhs = h_sum(Index((n,)), p - 1, m)
    const = Fraction(p - 1, 2) + sum((k_value(j, p) for j in range(2, n + 1)), Fraction(0))
    return Outcome(lhs - one_minus_q(m) ** n * const, note=_b4_note(n))


def _stuffle_sweep(cfg: VerifyConfig, p: int) -> Iterator[dict]:
    rng = random.Random(f"stuffle:{cfg.seed}:{p}")
    for _ in range(cfg.stuffle_pairs):
        a, b = _random_index(rng), _random_index(rng)
        for n in sorted({3, p - 1}):
            yield {"a_s": list(a.s), "a_t": list(a.t), "b_s": list(b.s), "b_t": list(b.t), "n": n}


def _random_index(rng: random.Random) -> Index:
    depth = rng.randint(0, 3)
    s: list[int] = []
    for i in range(depth):
        room = 6 - sum(s) - (depth - i - 1)
        s.append(rng.randint(1, max(1, min(3, room))))
    return Index(s, [rng.randint(0, 2) for _ in s])


def _stuffle(P: dict) -> Outcome:
    p, n = P["prime"], P["n"]
    m = Modulus(p)
    a, b = Index(P["a_s"], P["a_t"]), Index(P["b_s"], P["b_t"])
    lhs = h_sum(a, n, m) * h_sum(b, n, m)
    rhs = m.zero
    for term in stuffle_expand(a, b):
        rhs = rhs + h_sum(term.index, n, m) * term.multiplicity
    return Outcome(lhs - rhs)


def _homo_sweep(cfg: VerifyConfig, p: int) -> Iterator[dict]:
    for s in range(1, cfg.max_s + 1):
        for depth in range(cfg.max_depth + 1):
            yield {"s": s, "depth": depth}


def _homo_recursion(P: dict) -> Outcome:
    p, s, depth = P["prime"], P["s"], P["depth"]
    m = Modulus(p)
    return Outcome(h_norm(Index.homogeneous(s, depth), p - 1, m) - homo_recursion(s, depth, m))


def _homoall(P: dict) -> Outcome:
    p, s, depth = P["prime"], P["s"], P["depth"]
    m = Modulus(p)
    try:
        predicted = homo_product_coeffs(s, p, depth)[depth]
    except ConsistencyError as exc:
        return Outcome(witness=str(exc), note="product expansion is not Galois-symmetric")
    return Outcome(h_norm(Index.homogeneous(s, depth), p - 1, m) - predicted)


def _corollary(s: int) -> Callable[[dict], Outcome]:
    closed = {1: closed_form_w1, 2: closed_form_w2, 3: closed_form_w3}[s]

    def evaluate(P: dict) -> Outcome:
        p, depth = P["prime"], P["depth"]
        m = Modulus(p)
        try:
            cofactor = homo_factor(s, depth)
        except ConsistencyError as exc:
            return Outcome(witness=str(exc), note="prefactor does not divide the closed form")
        want = homogeneous_expected_degree(s, depth)
        if cofactor.degree != want or not cofactor.is_monic():
            return Outcome(
                witness=str(cofactor),
                note=f"cofactor should be monic of degree {want}",
            )
        value = homo_prefactor(s, depth)(p) * cofactor(p)
        if value != closed(depth)(p):
            return Outcome(witness=f"{value} vs {closed(depth)(p)}", note="factorization mismatch")
        lhs = h_sum(Index.homogeneous(s, depth), p - 1, m)
        return Outcome(lhs - one_minus_q(m) ** (s * depth) * value)

    return evaluate


def _depth_pairs(cfg: VerifyConfig, p: int) -> Iterator[dict]:
    for a in range(1, cfg.max_m + 1):
        for b in range(1, cfg.max_m + 1):
            yield {"m": a, "n": b}


def _depth2(P: dict) -> Outcome:
    p, a, b = P["prime"], P["m"], P["n"]
    m = Modulus(p)
    lhs = h_sum(Index((2 * a, 2 * b), (a, b)), p - 1, m)
    rhs = (_f_value(a, p, m) * _f_value(b, p, m) - _f_value(a + b, p, m)) / 2
    return Outcome(lhs - rhs, note=_b4_note(2 * (a + b)))


def _reversal(P: dict) -> Outcome:
    p, a, b = P["prime"], P["m"], P["n"]
    m = Modulus(p)
    lhs = h_norm(Index((2 * a, 2 * b), (a, b)), p - 1, m)
    rhs = h_norm(Index((2 * b, 2 * a), (b, a)), p - 1, m)
    return Outcome(lhs - rhs)


def _phi2(P: dict) -> Outcome:
    p = P["prime"]
    m = Modulus(p)
    lhs = m.zero
    for k in range(1, p):
        lhs = lhs + q_power(k, m) * q_int(k, m).inverse() ** 2 * k
    return Outcome(lhs - one_minus_q(m) ** 2 * Fraction(-p * (p - 1) * (p + 1), 24))


def _lehmer(P: dict) -> Outcome:
    p, n = P["prime"], P["n"]
    m = Modulus(p)
    lhs = h_sum(Index((2 * n,), (n,)), (p - 1) // 2, m)
    rhs = one_minus_q(m) ** (2 * n) * _k_combo(2 * n, n, p) / 2
    return Outcome(lhs - rhs, note=_b4_note(2 * n))


def _pn_bridge(P: dict) -> Outcome:
    p, n = P["prime"], P["n"]
    m = Modulus(p)
    return Outcome(h_norm(Index((n,)), p - 1, m) - p_series(p, n)[n])


def _only_prime(cfg: VerifyConfig, p: int) -> Iterator[dict]:
    yield {}


def _range(name: str, lo: int, hi: Callable[[VerifyConfig], int]):
    def sweep(cfg: VerifyConfig, p: int) -> Iterator[dict]:
        for v in range(lo, hi(cfg) + 1):
            yield {name: v}

    return sweep


def _modifier_sweep(cfg: VerifyConfig, p: int) -> Iterator[dict]:
    for n in range(2, cfg.max_order + 1):
        for t in range(1, n):
            yield {"n": n, "t": t}


_always = lambda P: None  # noqa: E731
_p_ge_5 = lambda P: _need(P["prime"] >= 5, "requires p >= 5")  # noqa: E731

CHECKS: dict[str, Check] = {
    c.id: c
    for c in [
        Check(
            "sp1",
            "H(1;p-1) = (p-1)/2 (1-q) + (p^2-1)/24 (1-q)^2 [p]_q  mod [p]_q^2",
            lambda cfg, p: iter([{"exponent": 2}]),
            _p_ge_5,
            _sp1,
        ),
        Check("sp2", "sH(2;p-1) = -(p-1)(p-5)/12  mod [p]_q", _only_prime, _p_ge_5, _sp2),
        Check(
            "dilcher",
            "sum q^j/[j]^n = K_n(p) (1-q)^n  mod [p]_q",
            _range("n", 2, lambda c: c.max_order),
            lambda P: _need(P["prime"] > 3, "requires p > 3") or _need(P["n"] > 1, "requires n > 1"),
            _dilcher,
        ),
        Check(
            "modifier_t",
            "sum q^(tj)/[j]^n = (1-q)^n sum_i C(t-1,i)(-1)^i K_(n-i)(p)  mod [p]_q",
            _modifier_sweep,
            lambda P: _need(P["prime"] > 3, "requires p > 3")
            or _need(P["n"] > P["t"] >= 1, "requires n > t >= 1"),
            _modifier_t,
        ),
        Check(
            "t0",
            "sum 1/[j]^n = (1-q)^n ((p-1)/2 + sum_{j=2}^n K_j(p))  mod [p]_q",
            _range("n", 1, lambda c: c.max_order),
            lambda P: _need(P["prime"] > 3, "requires p > 3"),
            _t0,
        ),
        Check(
            "stuffle",
            "H(a;n) H(b;n) = sum over quasi-shuffles of a and b",
            _stuffle_sweep,
            lambda P: _need(P["n"] < P["prime"], "requires n < p so every [k]_q is a unit"),
            _stuffle,
        ),
        Check(
            "homo_recursion",
            "sH({s}^l) = (1/l) sum_k (-1)^(l-k-1) sH((l-k)s) sH({s}^k)",
            _homo_sweep,
            _always,
            _homo_recursion,
        ),
        Check(
            "homoall",
            "sum_l sH({s}^l) x^l = (-1)^s/(p^s x) prod_n (1 - (1 - eta^n (-x)^(1/s))^p)  mod [p]_q",
            _homo_sweep,
            _always,
            _homoall,
        ),
        Check(
            "cor1",
            "H({1}^l) = C(p-1,l)/(l+1) (1-q)^l  mod [p]_q",
            _range("depth", 1, lambda c: c.max_depth),
            lambda P: _need(P["depth"] < P["prime"], "requires l < p"),
            _corollary(1),
        ),
        Check(
            "cor2",
            "H({2}^l) = (-1)^l 2 l!/(2l+2)! C(p-1,l) F_{2,l}(p) (1-q)^(2l), F monic of degree l",
            _range("depth", 1, lambda c: c.max_depth),
            lambda P: _need(P["depth"] < P["prime"], "requires l < p"),
            _corollary(2),
        ),
        Check(
            "cor3",
            "H({3}^l) = c_l C(p-1,l) F_{3,l}(p) (1-q)^(3l), F monic of degree 2l-1 or 2l",
            _range("depth", 1, lambda c: c.max_depth),
            lambda P: _need(P["prime"] >= 3 * P["depth"] + 3, "requires p >= 3l+3"),
            _corollary(3),
        ),
        Check(
            "depth2",
            "H^(m,n)(2m,2n) = (f(m;p) f(n;p) - f(m+n;p))/2  mod [p]_q",
            _depth_pairs,
            _always,
            _depth2,
        ),
        Check(
            "reversal",
            "sH^(m,n)(2m,2n) = sH^(n,m)(2n,2m)  mod [p]_q",
            _depth_pairs,
            _always,
            _reversal,
        ),
        Check(
            "phi2",
            "sum_{k<p} k q^k/[k]^2 = -p(p-1)(p+1)/24 (1-q)^2  mod [p]_q",
            _only_prime,
            _always,
            _phi2,
        ),
        Check("h3", "sH(3;p-1) = -(p-1)(p-3)/8  mod [p]_q", _only_prime, _p_ge_5, _h3),
        Check(
            "lehmer",
            "H^(n)(2n;(p-1)/2) = (1/2)(1-q)^(2n) sum_j C(n-1,j)(-1)^j K_(2n-j)(p)  mod [p]_q",
            _range("n", 1, lambda c: c.max_half_n),
            lambda P: _need(P["prime"] % 2 == 1, "requires odd p"),
            _lehmer,
        ),
        Check(
            "pn_bridge",
            "sH(n;p-1) = P_n (coefficient of the P_n generating function)  mod [p]_q",
            _range("n", 1, lambda c: c.max_order),
            _always,
            _pn_bridge,
        ),
    ]
}

CHECK_IDS: tuple[str, ...] = tuple(CHECKS)


def _evaluate(check: Check, params: dict) -> CheckResult:
    reason = check.hypothesis(params)
    if reason:
        return CheckResult(check.id, params, None, note=reason)
    out = check.evaluate(params)
    if out.diff is not None:
        witness = str(out.diff) if out.diff else None
    else:
        witness = out.witness
    return CheckResult(check.id, params, witness is None, witness, out.note)


def run_check(check_id: str, params: dict | None = None, config: VerifyConfig | None = None):
    """Run one check.

    ``params`` must contain ``prime``; any other parameter of the check that
    is missing is swept over the ranges in ``config``.
    """
    config = config or VerifyConfig()
    if check_id not in CHECKS:
        raise ValueError(f"unknown check id {check_id!r}")
    params = dict(params or {})
    if "prime" not in params:
        raise ValueError("params must include 'prime'")
    p = params["prime"]
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    check = CHECKS[check_id]
    results = []
    seen = set()
    for swept in check.sweep(config, p):
        full = {"prime": p, **swept, **params}
        key = json.dumps(full, sort_keys=True)
        if key not in seen:
            seen.add(key)
            results.append(_evaluate(check, full))
    return sorted(results, key=CheckResult.sort_key)


def _task(args: tuple[str, int, VerifyConfig]) -> list[CheckResult]:
    check_id, p, config = args
    return run_check(check_id, {"prime": p}, config)


def run_all(config: VerifyConfig | None = None) -> Report:
    """Run every selected check over every configured prime."""
    config = config or VerifyConfig()
    selected = config.selected()
    tasks = [(cid, p, config) for cid in selected for p in config.primes]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(_task, tasks))
    else:
        chunks = [_task(t) for t in tasks]
    results = sorted((r for chunk in chunks for r in chunk), key=CheckResult.sort_key)
    summary = {cid: {"passed": 0, "failed": 0, "skipped": 0} for cid in selected}
    for r in results:
        summary[r.id][r.status] += 1
    environment = {"package": "qharmonic", "version": __version__, "config": config.echo()}
    return Report(results, summary, environment)
