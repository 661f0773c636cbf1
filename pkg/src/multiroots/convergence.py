"""Executable convergence guarantees and empirical order estimation.

Each polynomial family has a sufficient condition under which the coupled
iteration converges cubically from initial guesses within c*q of the true
roots, with the error after k sweeps bounded by c*q**(3**k).  The checks
here evaluate every clause of those conditions and report each one with its
computed sides, so feasibility searches and debugging can see the margins.
"""

from dataclasses import dataclass

from mpmath import mp

from .errors import InsufficientDataError, InvalidConfigurationError
from .polynomials import ALGEBRAIC, EXPONENTIAL, FAMILIES, TRIGONOMETRIC
from .precision import require_bits, to_mpf, working


@dataclass(frozen=True)
class Clause:
    """One inequality of a condition set, with its evaluated sides."""

    name: str
    passed: bool
    lhs: object
    rhs: object

    def __str__(self):
        mark = "ok" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.lhs} vs {self.rhs}"


@dataclass(frozen=True)
class ConditionVerdict:
    passed: bool
    clauses: tuple
    computed: dict

    @property
    def failing(self):
        return tuple(c for c in self.clauses if not c.passed)

    def __str__(self):
        lines = [f"{'PASS' if self.passed else 'FAIL'}"]
        for key, value in self.computed.items():
            lines.append(f"  {key} = {value}")
        lines.extend(f"  {c}" for c in self.clauses)
        return "\n".join(lines)


@dataclass(frozen=True)
class ConvergenceParams:
    """Inputs to a family's convergence condition.

    `d` (the minimum pairwise root gap) and the degree `n` are derived from
    the supplied roots and multiplicities.  `kappa` is the auxiliary
    separation constant and is required exactly for the trigonometric family.
    """

    family: str
    c: object
    q: object
    roots: tuple
    multiplicities: tuple
    kappa: object = None
    precision_bits: int = 53

    def __post_init__(self):
        require_bits(self.precision_bits)
        if self.family not in FAMILIES:
            raise InvalidConfigurationError(f"unknown family {self.family!r}")
        if (self.kappa is not None) != (self.family == TRIGONOMETRIC):
            raise InvalidConfigurationError(
                "kappa is required for the trigonometric family and "
                "disallowed otherwise"
            )
        roots = tuple(to_mpf(r, self.precision_bits) for r in self.roots)
        mults = tuple(int(a) for a in self.multiplicities)
        if len(roots) != len(mults) or len(roots) < 2:
            raise InvalidConfigurationError(
                "need >= 2 roots with matching multiplicities"
            )
        if any(a < 1 for a in mults):
            raise InvalidConfigurationError("multiplicities must be >= 1")
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if roots[i] == roots[j]:
                    raise InvalidConfigurationError("roots must be distinct")
        total = sum(mults)
        if self.family != ALGEBRAIC and total % 2 != 0:
            raise InvalidConfigurationError(
                f"{self.family} total multiplicity must be even, got {total}"
            )
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "multiplicities", mults)
        object.__setattr__(self, "c", to_mpf(self.c, self.precision_bits))
        object.__setattr__(self, "q", to_mpf(self.q, self.precision_bits))
        if self.kappa is not None:
            object.__setattr__(self, "kappa", to_mpf(self.kappa, self.precision_bits))

    @property
    def n(self):
        total = sum(self.multiplicities)
        return total if self.family == ALGEBRAIC else total // 2

    @property
    def d(self):
        return min(
            abs(a - b)
            for i, a in enumerate(self.roots)
            for b in self.roots[i + 1:]
        )

    @property
    def max_gap(self):
        return max(
            abs(a - b)
            for i, a in enumerate(self.roots)
            for b in self.roots[i + 1:]
        )


def _base_clauses(p):
    return [
        Clause("q > 0", p.q > 0, p.q, mp.mpf(0)),
        Clause("q < 1", p.q < 1, p.q, mp.mpf(1)),
        Clause("c > 0", p.c > 0, p.c, mp.mpf(0)),
        Clause("d - 2c > 0", p.d - 2 * p.c > 0, p.d - 2 * p.c, mp.mpf(0)),
    ]


def check_algebraic(params):
    """Clause-by-clause verdict of the algebraic cubic-convergence condition:
    0 < q < 1, c > 0, d - 2c > 0, and for every i
    0 < c^2 (n - 3 a_i) + c (n + (3d - 1) a_i) < d^2 a_i."""
    if params.family != ALGEBRAIC:
        raise InvalidConfigurationError("params are not algebraic")
    with working(params.precision_bits):
        c, d, n = params.c, params.d, params.n
        clauses = _base_clauses(params)
        for i, a in enumerate(params.multiplicities):
            mid = c**2 * (n - 3 * a) + c * (n + (3 * d - 1) * a)
            bound = d**2 * a
            clauses.append(
                Clause(f"0 < c^2(n - 3a_{i}) + c(n + (3d - 1)a_{i})",
                       mid > 0, mid, mp.mpf(0))
            )
            clauses.append(
                Clause(f"c^2(n - 3a_{i}) + c(n + (3d - 1)a_{i}) < d^2 a_{i}",
                       mid < bound, mid, bound)
            )
        return ConditionVerdict(
            all(cl.passed for cl in clauses), tuple(clauses), {"d": d, "n": n}
        )


def check_trigonometric(params):
    """Clause-by-clause verdict of the trigonometric condition:
    0 < q < 1, c > 0, kappa > 0, 2c < kappa, d - 2c > 0,
    max gap < 2*pi - 2*kappa, and with
    A = min(|sin(kappa/2)|, |sin(d/2 - c)|)
    for every i: c^2 (4n + a_i (9A^2/8 - 2)) < A^2 a_i."""
    if params.family != TRIGONOMETRIC:
        raise InvalidConfigurationError("params are not trigonometric")
    with working(params.precision_bits):
        c, d, n, kappa = params.c, params.d, params.n, params.kappa
        A = min(abs(mp.sin(kappa / 2)), abs(mp.sin(d / 2 - c)))
        clauses = _base_clauses(params)
        clauses.append(Clause("kappa > 0", kappa > 0, kappa, mp.mpf(0)))
        clauses.append(Clause("2c < kappa", 2 * c < kappa, 2 * c, kappa))
        gap_bound = 2 * mp.pi - 2 * kappa
        clauses.append(
            Clause("max gap < 2 pi - 2 kappa",
                   params.max_gap < gap_bound, params.max_gap, gap_bound)
        )
        for i, a in enumerate(params.multiplicities):
            lhs = c**2 * (4 * n + a * (9 * A**2 / 8 - 2))
            rhs = A**2 * a
            clauses.append(
                Clause(f"c^2(4n + a_{i}(9A^2/8 - 2)) < A^2 a_{i}",
                       lhs < rhs, lhs, rhs)
            )
        return ConditionVerdict(
            all(cl.passed for cl in clauses), tuple(clauses),
            {"A": A, "d": d, "n": n},
        )


def check_exponential(params):
    """Clause-by-clause verdict of the exponential condition:
    0 < q < 1, c > 0, d - 2c > 0, and with S = sinh((d - 2c)/2)
    for every i: c^2 (4n + (S^2 - 2) a_i) < S^2 a_i."""
    if params.family != EXPONENTIAL:
        raise InvalidConfigurationError("params are not exponential")
    with working(params.precision_bits):
        c, d, n = params.c, params.d, params.n
        S = mp.sinh((d - 2 * c) / 2)
        clauses = _base_clauses(params)
        for i, a in enumerate(params.multiplicities):
            lhs = c**2 * (4 * n + (S**2 - 2) * a)
            rhs = S**2 * a
            clauses.append(
                Clause(f"c^2(4n + (S^2 - 2)a_{i}) < S^2 a_{i}",
                       lhs < rhs, lhs, rhs)
            )
        return ConditionVerdict(
            all(cl.passed for cl in clauses), tuple(clauses),
            {"S": S, "d": d, "n": n},
        )


_CHECKS = {
    ALGEBRAIC: check_algebraic,
    TRIGONOMETRIC: check_trigonometric,
    EXPONENTIAL: check_exponential,
}


def check_conditions(params):
    """Dispatch to the family-specific condition check."""
    return _CHECKS[params.family](params)


def _passes_at(params, c, kappa=None):
    trial = ConvergenceParams(
        family=params.family, c=c, q=params.q, roots=params.roots,
        multiplicities=params.multiplicities,
        kappa=kappa if params.family == TRIGONOMETRIC else None,
        precision_bits=params.precision_bits,
    )
    return check_conditions(trial).passed


def max_feasible_c(params, iterations=80):
    """Largest c passing the family's condition at the params' fixed q
    (and kappa, for the trigonometric family), found by bisection on c.

    Returns an mpf c such that the condition passes at c and fails at the
    next bisection point above it.  Raises InvalidConfigurationError when
    even tiny c fails (the configuration is infeasible at this q/kappa).
    """
    with working(params.precision_bits):
        hi = params.d / 2
        lo = params.d * mp.mpf("1e-9")
        if not _passes_at(params, lo, params.kappa):
            raise InvalidConfigurationError(
                "condition fails even at tiny c; configuration infeasible"
            )
        if _passes_at(params, hi, params.kappa):
            return hi
        for _ in range(iterations):
            mid = (lo + hi) / 2
            if _passes_at(params, mid, params.kappa):
                lo = mid
            else:
                hi = mid
        return lo


def feasible_point_trigonometric(roots, multiplicities, q, bits=53,
                                 grid=48):
    """Grid search over (c, kappa) for the trigonometric condition.

    Scans c in (0, d/2) and kappa in (2c, pi - max_gap/2); returns the
    feasible ConvergenceParams with the largest c (ties: largest kappa).
    Raises InvalidConfigurationError when the whole grid fails.
    """
    probe = ConvergenceParams(
        family=TRIGONOMETRIC, c="0.001", q=q, roots=roots,
        multiplicities=multiplicities, kappa="0.01", precision_bits=bits,
    )
    with working(bits):
        d = probe.d
        kappa_hi = mp.pi - probe.max_gap / 2
        best = None
        for ic in range(grid, 0, -1):
            c = d / 2 * ic / (grid + 1)
            for ik in range(grid, 0, -1):
                kappa = 2 * c + (kappa_hi - 2 * c) * ik / (grid + 1)
                if kappa <= 0:
                    continue
                trial = ConvergenceParams(
                    family=TRIGONOMETRIC, c=c, q=q, roots=roots,
                    multiplicities=multiplicities, kappa=kappa,
                    precision_bits=bits,
                )
                if check_conditions(trial).passed:
                    best = trial
                    break
            if best is not None:
                break
        if best is None:
            raise InvalidConfigurationError(
                "no feasible (c, kappa) on the search grid"
            )
        return best


@dataclass(frozen=True)
class OrderEstimate:
    order: object
    window: tuple           # (start, end) inclusive trace indices used
    per_step_orders: tuple


def estimate_order(errors, floor=None, min_window=4):
    """Empirical convergence order from a decreasing error sequence.

    Finds the last run of >= `min_window` consecutive, strictly decreasing,
    positive entries (entries at or below `floor` are treated as saturated
    by roundoff and excluded), then computes the three-point log-ratio

        p_k = log(e_{k+1} / e_k) / log(e_k / e_{k-1})

    across the run and reports the final p_k, the run's index window and the
    full per-step sequence.  Raises InsufficientDataError when no such run
    exists.
    """
    floor = mp.mpf(0) if floor is None else mp.mpf(floor)
    values = [mp.mpf(e) for e in errors]
    valid = [mp.isfinite(v) and v > floor for v in values]

    runs = []
    start = None
    for i, ok in enumerate(valid):
        if ok and start is not None and values[i] < values[i - 1]:
            continue
        if ok:
            if start is not None:
                runs.append((start, i - 1))
            start = i
        else:
            if start is not None:
                runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(values) - 1))

    runs = [(a, b) for a, b in runs if b - a + 1 >= min_window]
    if not runs:
        raise InsufficientDataError(
            f"no strictly decreasing positive window of length >= {min_window}"
        )
    a, b = runs[-1]
    per_step = []
    for k in range(a + 1, b):
        num = mp.log(values[k + 1] / values[k])
        den = mp.log(values[k] / values[k - 1])
        per_step.append(num / den)
    return OrderEstimate(per_step[-1], (a, b), tuple(per_step))
