"""Independent verification paths: baseline iterations and residual checks.

Everything here is deliberately written as a second implementation, not a
call into the solver's code paths: the baseline isolates the value of the
coupling term, the classical simple-root step cross-checks the reduction
identity, and root verification differentiates coefficient forms with its
own local routines.
"""

from dataclasses import dataclass

from mpmath import mp

from .errors import (
    CollisionError,
    DegenerateDerivativeError,
    InvalidConfigurationError,
)
from .polynomials import (
    EXPONENTIAL,
    TRIGONOMETRIC,
    AlgebraicPoly,
    ExpPoly,
    FactoredForm,
    TrigPoly,
    evaluate,
    evaluate_derivative,
    expand_from_roots,
)
from .precision import require_bits, to_mpf, working


@dataclass(frozen=True)
class NewtonTrace:
    approximations: tuple   # x_0 ... x_k
    corrections: tuple      # |x_{j+1} - x_j|
    converged: bool

    def errors_against(self, root):
        return tuple(abs(x - root) for x in self.approximations)


def newton_with_multiplicity(poly, multiplicity, initial, settings):
    """Multiplicity-aware Newton baseline on a single root:
    x <- x - alpha * f(x) / f'(x) until the correction is within tolerance.

    Quadratic when alpha matches the root's multiplicity, linear when it
    does not; no coupling to other roots.  Raises
    DegenerateDerivativeError if f' underflows to zero away from a root.
    """
    if multiplicity < 1:
        raise InvalidConfigurationError("multiplicity must be >= 1")
    bits = settings.precision_bits
    with working(bits):
        x = to_mpf(initial, bits)
        approximations = [x]
        corrections = []
        converged = False
        for _ in range(settings.max_iterations):
            f = evaluate(poly, x, bits)
            if f == 0:
                converged = True
                break
            fp = evaluate_derivative(poly, x, bits)
            if fp == 0:
                raise DegenerateDerivativeError(
                    f"derivative underflow at x={x}"
                )
            correction = multiplicity * f / fp
            x = x - correction
            approximations.append(x)
            corrections.append(abs(correction))
            if abs(correction) <= settings.tolerance:
                converged = True
                break
        return NewtonTrace(tuple(approximations), tuple(corrections), converged)


# --- analytic coefficient differentiation, local to this module -------------

def _coefficient_form(poly):
    if isinstance(poly, FactoredForm):
        return expand_from_roots(poly)
    return poly


def _alg_full_desc(poly):
    # descending coefficients including the implicit leading 1
    return [mp.mpf(1)] + list(poly.coeffs)


def _alg_derive(coeffs):
    n = len(coeffs) - 1
    return [c * (n - k) for k, c in enumerate(coeffs[:-1])]


def _alg_eval(coeffs, x):
    v = mp.mpf(0)
    for c in coeffs:
        v = v * x + c
    return v


def _alg_abs_eval(coeffs, x):
    v = mp.mpf(0)
    for c in coeffs:
        v = v * abs(x) + abs(c)
    return v


def _series_derive(a0, a, b, family):
    # one analytic derivative in coefficient space; closed for both families
    if family == TRIGONOMETRIC:
        new_a = [l * b[l - 1] for l in range(1, len(a) + 1)]
        new_b = [-l * a[l - 1] for l in range(1, len(a) + 1)]
    else:
        new_a = [l * b[l - 1] for l in range(1, len(a) + 1)]
        new_b = [l * a[l - 1] for l in range(1, len(a) + 1)]
    return mp.mpf(0), new_a, new_b


def _series_eval(a0, a, b, family, x):
    terms = [a0 / 2]
    for l in range(1, len(a) + 1):
        if family == TRIGONOMETRIC:
            terms.append(a[l - 1] * mp.cos(l * x))
            terms.append(b[l - 1] * mp.sin(l * x))
        else:
            terms.append(a[l - 1] * mp.cosh(l * x))
            terms.append(b[l - 1] * mp.sinh(l * x))
    return mp.fsum(terms)


def _series_abs_eval(a0, a, b, family, x):
    terms = [abs(a0) / 2]
    for l in range(1, len(a) + 1):
        if family == TRIGONOMETRIC:
            terms.append(abs(a[l - 1]) + abs(b[l - 1]))
        else:
            terms.append((abs(a[l - 1]) + abs(b[l - 1])) * mp.cosh(l * x))
    return mp.fsum(terms)


def _derivative_ladder(poly, up_to):
    """Evaluators for f, f', ..., f^(up_to) from coefficient recurrences."""
    poly = _coefficient_form(poly)
    evals = []
    if isinstance(poly, AlgebraicPoly):
        coeffs = _alg_full_desc(poly)
        for _ in range(up_to + 1):
            frozen = list(coeffs)
            evals.append((
                lambda x, cs=frozen: _alg_eval(cs, x),
                lambda x, cs=frozen: _alg_abs_eval(cs, x),
            ))
            coeffs = _alg_derive(coeffs)
    elif isinstance(poly, (TrigPoly, ExpPoly)):
        family = poly.family
        if family == TRIGONOMETRIC:
            a0, a, b = poly.a0, list(poly.cos_coeffs), list(poly.sin_coeffs)
        else:
            a0, a, b = poly.a0, list(poly.ch_coeffs), list(poly.sh_coeffs)
        for _ in range(up_to + 1):
            fa0, fa, fb = a0, list(a), list(b)
            evals.append((
                lambda x, t=(fa0, fa, fb): _series_eval(*t, family, x),
                lambda x, t=(fa0, fa, fb): _series_abs_eval(*t, family, x),
            ))
            a0, a, b = _series_derive(a0, a, b, family)
    else:
        raise TypeError(f"not a polynomial representation: {poly!r}")
    return evals


@dataclass(frozen=True)
class CheckRecord:
    root_index: int
    derivative_order: int
    value: object
    bound: object
    want_zero: bool
    passed: bool


def _claim_factor(family, u):
    if family == TRIGONOMETRIC:
        return mp.sin(u / 2)
    if family == EXPONENTIAL:
        return mp.sinh(u / 2)
    return u


def _claimed_shape(family, claimed, x):
    v = mp.mpf(1)
    for r, a in zip(claimed.roots, claimed.multiplicities):
        v *= _claim_factor(family, x - r) ** a
    return v


def _leading_scale(poly, family, claimed, value_fn):
    # recover the overall multiplicative constant of the claimed factorization
    # at the probe point farthest from every claimed root
    if family not in (TRIGONOMETRIC, EXPONENTIAL):
        return mp.mpf(1)  # algebraic coefficient form is monic
    lo, hi = min(claimed.roots), max(claimed.roots)
    candidates = [hi + mp.mpf("0.9"), lo - mp.mpf("0.7"), (lo + hi) / 2 + mp.mpf("1.3")]
    probe = max(candidates, key=lambda x: min(abs(x - r) for r in claimed.roots))
    return value_fn(probe) / _claimed_shape(family, claimed, probe)


def _predicted_alpha_derivative(family, claimed, i, lead):
    """Magnitude the claimed structure itself predicts for |f^(a_i)(r_i)|:
    a_i! * lead * (1/2)^{a_i} [trig/exp] * prod over other factors at r_i."""
    r_i, a_i = claimed.roots[i], claimed.multiplicities[i]
    v = mp.factorial(a_i) * abs(lead)
    if family in (TRIGONOMETRIC, EXPONENTIAL):
        v /= mp.mpf(2) ** a_i
    for j, (r, a) in enumerate(zip(claimed.roots, claimed.multiplicities)):
        if j != i:
            v *= abs(_claim_factor(family, r_i - r)) ** a
    return v


@dataclass(frozen=True)
class VerificationOutcome:
    residuals: tuple          # per root, |f(r_i)|
    derivative_checks: tuple  # per root, scale-relative |f^(j)(r_i)| for j=0..a_i
    passed: bool
    details: tuple            # CheckRecord per individual check

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        lines = [f"verification: {status}"]
        for rec in self.details:
            mark = "ok" if rec.passed else "FAIL"
            rel = "= 0" if rec.want_zero else "!= 0"
            lines.append(
                f"  [{mark}] root {rec.root_index}: |f^({rec.derivative_order})| "
                f"{rel} within {rec.bound} (got {rec.value})"
            )
        return "\n".join(lines)


def verify_roots(poly, claimed, tolerance, bits=None):
    """Check each claimed root's multiplicity structure analytically.

    For root r with claimed multiplicity a, the first a derivatives must
    vanish and the a-th must not:

    - zero checks, j = 0..a-1: |f^(j)(r)| <= tolerance * scale_j, where
      scale_j is the j-th derivative's absolute-coefficient evaluation at r
      (the roundoff-attainable magnitude, so the check is scale-free);
    - exactness check: |f^(a)(r)| > tolerance * predicted_a, where
      predicted_a is the magnitude the claimed factorization itself implies
      for the a-th derivative at r.  At a correct claim the ratio is near 1,
      so the check separates cleanly from the zero checks at any precision.

    All derivative values come from analytic coefficient differentiation.
    Failures are recorded in the outcome, never raised.
    """
    bits = require_bits(bits or getattr(poly, "precision_bits", 53))
    tolerance = to_mpf(tolerance, bits)
    family = poly.family
    with working(bits):
        ladder = _derivative_ladder(poly, max(claimed.multiplicities))
        lead = _leading_scale(poly, family, claimed, ladder[0][0])
        residuals = []
        rel_profiles = []
        details = []
        for i, (r, a) in enumerate(zip(claimed.roots, claimed.multiplicities)):
            profile = []
            for j in range(a + 1):
                value_fn, scale_fn = ladder[j]
                value = abs(value_fn(r))
                if j < a:
                    scale = max(scale_fn(r), mp.mpf(1))
                    bound = tolerance * scale
                    passed = value <= bound
                    want_zero = True
                else:
                    scale = _predicted_alpha_derivative(family, claimed, i, lead)
                    bound = tolerance * scale
                    passed = value > bound
                    want_zero = False
                details.append(
                    CheckRecord(i, j, value, bound, want_zero, passed)
                )
                profile.append(value / scale if scale > 0 else value)
                if j == 0:
                    residuals.append(value)
            rel_profiles.append(tuple(profile))
        return VerificationOutcome(
            residuals=tuple(residuals),
            derivative_checks=tuple(rel_profiles),
            passed=all(rec.passed for rec in details),
            details=tuple(details),
        )


def classical_ehrlich_step(poly, approximations, mode="simultaneous", bits=None):
    """One classical simple-root simultaneous step, written independently of
    the solver: x_i <- x_i - f(x_i) / (f'(x_i) - f(x_i) * sum_j 1/(x_i - x_j)).

    All multiplicities are implicitly 1.  A single approximation degenerates
    to a plain Newton step.
    """
    bits = require_bits(bits or getattr(poly, "precision_bits", 53))
    with working(bits):
        x = [to_mpf(v, bits) for v in approximations]
        threshold = mp.mpf(2) ** (mp.mpf(-bits) / 2)
        out = list(x)
        for i in range(len(x)):
            fi = evaluate(poly, x[i], bits)
            if fi == 0:
                continue
            fpi = evaluate_derivative(poly, x[i], bits)
            acc = mp.mpf(0)
            for j in range(len(x)):
                if j == i:
                    continue
                xj = out[j] if (mode == "sequential" and j < i) else x[j]
                dx = x[i] - xj
                if abs(dx) < threshold:
                    raise CollisionError(j, dx, threshold, i=i)
                acc += 1 / dx
            out[i] = x[i] - fi / (fpi - fi * acc)
        return tuple(out)
