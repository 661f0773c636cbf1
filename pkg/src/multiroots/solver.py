"""Simultaneous refinement of all roots with known multiplicities.

One step updates every approximation x_i by a multiplicity-weighted Newton
correction whose denominator couples in the other approximations through the
family's log-derivative sum:

    D_i = f'(x_i) - f(x_i) * L_i(x_i),   L_i = sum over j != i of the
                                         per-root log-derivative terms
    x_i <- x_i - alpha_i * f(x_i) / D_i

The coupling term lifts the quadratic multiplicity-aware Newton baseline to
cubic convergence.  `simultaneous` sweeps read only the incoming vector
(Jacobi); `sequential` sweeps reuse already-updated entries (Gauss-Seidel).
"""

from dataclasses import dataclass

from mpmath import mp

from .convergence import estimate_order
from .errors import (
    CollisionError,
    DegenerateDenominatorError,
    FamilyOverflowError,
    InsufficientDataError,
    InvalidConfigurationError,
)
from .polynomials import (
    evaluate,
    evaluate_derivative,
    evaluation_noise,
    log_derivative_sum,
)
from .precision import eps, require_bits, to_mpf, working

SIMULTANEOUS = "simultaneous"
SEQUENTIAL = "sequential"

CONVERGED = "converged"
MAX_ITERATIONS = "max_iterations"
COLLISION = "collision"
DIVERGED = "diverged"
NONFINITE = "nonfinite"


@dataclass(frozen=True)
class SolveSettings:
    precision_bits: int = 53
    max_iterations: int = 50
    correction_tolerance: object = None  # default: 2**-(precision_bits - 8)
    sweep_mode: str = SIMULTANEOUS

    def __post_init__(self):
        require_bits(self.precision_bits)
        if self.max_iterations < 1:
            raise InvalidConfigurationError("max_iterations must be >= 1")
        if self.sweep_mode not in (SIMULTANEOUS, SEQUENTIAL):
            raise InvalidConfigurationError(f"unknown sweep_mode {self.sweep_mode!r}")
        if self.correction_tolerance is not None:
            tol = to_mpf(self.correction_tolerance, self.precision_bits)
            if tol <= 0:
                raise InvalidConfigurationError("correction_tolerance must be > 0")
            object.__setattr__(self, "correction_tolerance", tol)

    @property
    def tolerance(self):
        if self.correction_tolerance is not None:
            return self.correction_tolerance
        return mp.mpf(2) ** (-(self.precision_bits - 8))


@dataclass(frozen=True)
class TraceEntry:
    k: int
    approximations: tuple
    residuals: tuple
    corrections: tuple  # None for the initial entry
    errors: tuple       # vs. true roots, when known; else None


@dataclass(frozen=True)
class IterationState:
    approximations: tuple
    k: int
    corrections: tuple
    trace: tuple


@dataclass(frozen=True)
class SolveReport:
    final: tuple
    iterations_used: int
    termination: str
    trace: tuple
    estimated_order: object = None


def _entry(poly, approximations, k, bits, corrections=None, true_roots=None):
    with working(bits):
        residuals = tuple(abs(evaluate(poly, x, bits)) for x in approximations)
        errors = None
        if true_roots is not None:
            errors = tuple(
                abs(x - r) for x, r in zip(approximations, true_roots)
            )
    return TraceEntry(k, tuple(approximations), residuals, corrections, errors)


def initial_state(poly, initial, settings, true_roots=None):
    """IterationState at k=0 with the trace seeded by the initial entry."""
    bits = settings.precision_bits
    x0 = tuple(to_mpf(v, bits) for v in initial)
    for i in range(len(x0)):
        for j in range(i + 1, len(x0)):
            if x0[i] == x0[j]:
                raise InvalidConfigurationError(
                    f"initial approximations {i} and {j} coincide"
                )
    entry = _entry(poly, x0, 0, bits, true_roots=true_roots)
    return IterationState(x0, 0, None, (entry,))


def step(poly, multiplicities, state, settings, true_roots=None):
    """One sweep over all approximations; returns the advanced state.

    Raises CollisionError / DegenerateDenominatorError / FamilyOverflowError
    on the corresponding per-root failures; `solve` maps these to termination
    reasons.
    """
    bits = settings.precision_bits
    if len(multiplicities) != len(state.approximations):
        raise InvalidConfigurationError(
            f"{len(multiplicities)} multiplicities vs "
            f"{len(state.approximations)} approximations"
        )
    family = poly.family
    with working(bits):
        current = list(state.approximations)
        new = list(state.approximations)
        corrections = [mp.mpf(0)] * len(current)
        degenerate_floor = mp.mpf(2) ** (-(bits - 4))
        for i, xi in enumerate(current):
            fi = evaluate(poly, xi, bits)
            # freeze the coordinate once |f| is below the evaluation's
            # rounding bound: past that point the residual is cancellation
            # noise and a correction computed from it walks away from the root
            if fi == 0 or abs(fi) <= evaluation_noise(poly, xi, bits):
                continue
            fpi = evaluate_derivative(poly, xi, bits)
            if settings.sweep_mode == SEQUENTIAL:
                others = [(new[j] if j < i else current[j], multiplicities[j])
                          for j in range(len(current)) if j != i]
            else:
                others = [(current[j], multiplicities[j])
                          for j in range(len(current)) if j != i]
            try:
                coupling = log_derivative_sum(
                    family,
                    [r for r, _ in others],
                    [a for _, a in others],
                    xi,
                    bits,
                )
            except CollisionError as exc:
                raise exc.with_index(i) from None
            denom = fpi - fi * coupling
            if denom == 0 or abs(denom) < degenerate_floor * abs(fpi):
                raise DegenerateDenominatorError(i, denom, fpi)
            correction = multiplicities[i] * fi / denom
            if not mp.isfinite(correction):
                raise FamilyOverflowError(family, xi, detail="non-finite correction")
            new[i] = xi - correction
            corrections[i] = abs(correction)
        k = state.k + 1
        entry = _entry(poly, new, k, bits,
                       corrections=tuple(corrections), true_roots=true_roots)
        return IterationState(tuple(new), k, tuple(corrections),
                              state.trace + (entry,))


def _order_floor(bits, final):
    # errors within 2**8 ulp of the precision floor are saturated by roundoff
    scale = max([mp.mpf(1)] + [abs(x) for x in final])
    return mp.mpf(2) ** 8 * eps(bits) * scale


def order_error_sequence(trace):
    """Per-iteration max error (or max correction, when the truth is not in
    the trace) suitable for order estimation.

    The sequence is truncated at the first iteration where any coordinate
    froze on the evaluation noise floor (correction 0 with a nonzero
    residual): from that point on, stale frozen errors pollute the ratios.
    Returns (sequence, kind) with kind in {"error", "correction"}.
    """
    cutoff = len(trace)
    for idx, entry in enumerate(trace):
        if entry.corrections is None or entry.residuals is None:
            continue
        if any(c == 0 and r > 0
               for c, r in zip(entry.corrections, entry.residuals)):
            cutoff = idx
            break
    usable = trace[:cutoff]
    if usable and usable[0].errors is not None:
        return [max(e.errors) for e in usable], "error"
    return ([max(e.corrections) for e in usable if e.corrections is not None],
            "correction")


def _estimate_from_trace(trace, bits, final):
    seq, _ = order_error_sequence(trace)
    try:
        return estimate_order(seq, floor=_order_floor(bits, final)).order
    except InsufficientDataError:
        return None


def solve(poly, multiplicities, initial, settings=None, true_roots=None):
    """Iterate `step` until every correction is within tolerance.

    Termination reasons: `converged` (all corrections <= tolerance),
    `max_iterations`, `collision` (two approximations closer than the
    collision threshold), `diverged` (degenerate denominator or the
    approximations left a generous bounding radius), `nonfinite`.
    """
    settings = settings or SolveSettings()
    bits = settings.precision_bits
    if len(initial) != len(multiplicities):
        raise InvalidConfigurationError(
            f"{len(initial)} initial values vs {len(multiplicities)} multiplicities"
        )
    if true_roots is not None:
        true_roots = tuple(to_mpf(r, bits) for r in true_roots)
    state = initial_state(poly, initial, settings, true_roots=true_roots)
    with working(bits):
        escape_radius = mp.mpf(10) ** 6 * (
            1 + max(abs(x) for x in state.approximations)
        )
    termination = MAX_ITERATIONS
    for _ in range(settings.max_iterations):
        try:
            state = step(poly, multiplicities, state, settings,
                         true_roots=true_roots)
        except CollisionError:
            termination = COLLISION
            break
        except (DegenerateDenominatorError, ZeroDivisionError):
            termination = DIVERGED
            break
        except FamilyOverflowError:
            termination = NONFINITE
            break
        if any(not mp.isfinite(x) for x in state.approximations):
            termination = NONFINITE
            break
        if max(abs(x) for x in state.approximations) > escape_radius:
            termination = DIVERGED
            break
        if max(state.corrections) <= settings.tolerance:
            termination = CONVERGED
            break
    order = _estimate_from_trace(state.trace, bits, state.approximations)
    return SolveReport(
        final=state.approximations,
        iterations_used=state.k,
        termination=termination,
        trace=state.trace,
        estimated_order=order,
    )


def _expand_simple(roots):
    # descending coefficients of prod (x - r), leading 1
    coeffs = [mp.mpf(1)]
    for r in roots:
        nxt = [mp.mpf(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k] += c
            nxt[k + 1] -= c * r
        coeffs = nxt
    return coeffs


def _derive_desc(coeffs):
    n = len(coeffs) - 1
    return [c * (n - k) for k, c in enumerate(coeffs[:-1])]


def _horner_desc(coeffs, x):
    v = mp.mpf(0)
    for c in coeffs:
        v = v * x + c
    return v


def simple_root_reduction_residual(simple_roots, index, bits=53):
    """Residual of the identity that collapses the coupled denominator to its
    classical simple-root form, evaluated at knot `index`.

    With Q(x) = prod_j (x - x_j) over distinct knots and Q_i = Q / (x - x_i),
    returns Q''(x_i)/Q'(x_i) - 2 Q_i'(x_i)/Q_i(x_i), computed from explicit
    coefficient expansion (an independent path from `log_derivative_sum`).
    Zero up to roundoff whenever all knots are distinct.
    """
    require_bits(bits)
    with working(bits):
        roots = [mp.mpf(r) for r in simple_roots]
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if roots[i] == roots[j]:
                    raise InvalidConfigurationError(
                        f"knots {i} and {j} coincide at {roots[i]}"
                    )
        if not 0 <= index < len(roots):
            raise InvalidConfigurationError(f"index {index} out of range")
        x = roots[index]
        full = _expand_simple(roots)
        d1 = _derive_desc(full)
        d2 = _derive_desc(d1)
        lhs = _horner_desc(d2, x) / _horner_desc(d1, x)
        others = roots[:index] + roots[index + 1:]
        qi = _expand_simple(others)
        qi1 = _derive_desc(qi)
        rhs = 2 * _horner_desc(qi1, x) / _horner_desc(qi, x)
        return lhs - rhs
