"""Polynomial families: representation, evaluation, differentiation, expansion.

Three families share one calling convention: algebraic polynomials in monic
coefficient form, trigonometric polynomials as finite cos/sin series, and
exponential polynomials as finite cosh/sinh series.  Each family also has a
factored representation built from distinct roots with multiplicities; the
factored form is first-class, so solvers accept either representation.

All values are mpmath mpf; every container records the binary precision it
was built at and operations run at that precision unless overridden.
"""

from dataclasses import dataclass

from mpmath import mp

from .errors import CollisionError, FamilyOverflowError, InvalidConfigurationError
from .precision import require_bits, to_mpf, working

ALGEBRAIC = "algebraic"
TRIGONOMETRIC = "trigonometric"
EXPONENTIAL = "exponential"
FAMILIES = (ALGEBRAIC, TRIGONOMETRIC, EXPONENTIAL)


def _as_mpf_tuple(values, bits):
    return tuple(to_mpf(v, bits) for v in values)


@dataclass(frozen=True)
class RootConfiguration:
    """Distinct roots paired with positive integer multiplicities."""

    roots: tuple
    multiplicities: tuple
    precision_bits: int = 53

    def __post_init__(self):
        require_bits(self.precision_bits)
        roots = _as_mpf_tuple(self.roots, self.precision_bits)
        mults = tuple(int(a) for a in self.multiplicities)
        if len(roots) != len(mults):
            raise InvalidConfigurationError(
                f"{len(roots)} roots vs {len(mults)} multiplicities"
            )
        if not roots:
            raise InvalidConfigurationError("at least one root is required")
        if any(a < 1 for a in mults):
            raise InvalidConfigurationError("multiplicities must be >= 1")
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if roots[i] == roots[j]:
                    raise InvalidConfigurationError(
                        f"roots {i} and {j} coincide at {roots[i]}"
                    )
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "multiplicities", mults)

    @property
    def total_multiplicity(self):
        return sum(self.multiplicities)

    def min_gap(self):
        """Smallest pairwise distance between the roots."""
        return min(
            abs(a - b)
            for i, a in enumerate(self.roots)
            for b in self.roots[i + 1:]
        )

    def max_gap(self):
        return max(
            abs(a - b)
            for i, a in enumerate(self.roots)
            for b in self.roots[i + 1:]
        )


@dataclass(frozen=True)
class AlgebraicPoly:
    """Monic polynomial x^n + c_1 x^(n-1) + ... + c_n; stores (c_1 ... c_n)."""

    coeffs: tuple
    precision_bits: int = 53

    def __post_init__(self):
        require_bits(self.precision_bits)
        coeffs = _as_mpf_tuple(self.coeffs, self.precision_bits)
        if not coeffs:
            raise InvalidConfigurationError("degree must be >= 1")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def family(self):
        return ALGEBRAIC

    @property
    def degree(self):
        return len(self.coeffs)


@dataclass(frozen=True)
class TrigPoly:
    """a0/2 + sum_{l=1..n} (a_l cos lx + b_l sin lx)."""

    a0: object
    cos_coeffs: tuple
    sin_coeffs: tuple
    precision_bits: int = 53

    def __post_init__(self):
        require_bits(self.precision_bits)
        a0 = to_mpf(self.a0, self.precision_bits)
        cos_c = _as_mpf_tuple(self.cos_coeffs, self.precision_bits)
        sin_c = _as_mpf_tuple(self.sin_coeffs, self.precision_bits)
        if len(cos_c) != len(sin_c) or not cos_c:
            raise InvalidConfigurationError(
                "cos and sin coefficient sequences must have equal nonzero length"
            )
        if cos_c[-1] == 0 and sin_c[-1] == 0:
            raise InvalidConfigurationError(
                "leading cos/sin coefficients are both zero; reduce the degree"
            )
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "cos_coeffs", cos_c)
        object.__setattr__(self, "sin_coeffs", sin_c)

    @property
    def family(self):
        return TRIGONOMETRIC

    @property
    def degree(self):
        return len(self.cos_coeffs)


@dataclass(frozen=True)
class ExpPoly:
    """a0/2 + sum_{l=1..n} (a_l cosh lx + b_l sinh lx)."""

    a0: object
    ch_coeffs: tuple
    sh_coeffs: tuple
    precision_bits: int = 53

    def __post_init__(self):
        require_bits(self.precision_bits)
        a0 = to_mpf(self.a0, self.precision_bits)
        ch_c = _as_mpf_tuple(self.ch_coeffs, self.precision_bits)
        sh_c = _as_mpf_tuple(self.sh_coeffs, self.precision_bits)
        if len(ch_c) != len(sh_c) or not ch_c:
            raise InvalidConfigurationError(
                "cosh and sinh coefficient sequences must have equal nonzero length"
            )
        if ch_c[-1] == 0 and sh_c[-1] == 0:
            raise InvalidConfigurationError(
                "leading cosh/sinh coefficients are both zero; reduce the degree"
            )
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "ch_coeffs", ch_c)
        object.__setattr__(self, "sh_coeffs", sh_c)

    @property
    def family(self):
        return EXPONENTIAL

    @property
    def degree(self):
        return len(self.ch_coeffs)


@dataclass(frozen=True)
class FactoredForm:
    """scale * product of per-root factors raised to their multiplicities.

    Factors: (x - r) for algebraic, sin((x - r)/2) for trigonometric,
    sinh((x - r)/2) for exponential.
    """

    family: str
    config: RootConfiguration
    scale: object = 1
    precision_bits: int = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidConfigurationError(f"unknown family {self.family!r}")
        bits = self.precision_bits
        if bits is None:
            bits = self.config.precision_bits
        require_bits(bits)
        object.__setattr__(self, "precision_bits", bits)
        object.__setattr__(self, "scale", to_mpf(self.scale, bits))
        if self.scale == 0:
            raise InvalidConfigurationError("scale must be nonzero")


def family_of(poly):
    """The family tag of any polynomial representation."""
    return poly.family


def _check_finite(value, family, x):
    if not mp.isfinite(value):
        raise FamilyOverflowError(family, x)
    return value


def _factor(family, u):
    # u = x - root
    if family == ALGEBRAIC:
        return u
    if family == TRIGONOMETRIC:
        return mp.sin(u / 2)
    return mp.sinh(u / 2)


def _factor_derivative(family, u):
    if family == ALGEBRAIC:
        return mp.mpf(1)
    if family == TRIGONOMETRIC:
        return mp.cos(u / 2) / 2
    return mp.cosh(u / 2) / 2


def evaluate(poly, x, bits=None):
    """Value of the polynomial at x, at the poly's precision unless overridden."""
    bits = require_bits(bits or poly.precision_bits)
    with working(bits):
        x = mp.mpf(x)
        if isinstance(poly, AlgebraicPoly):
            v = mp.mpf(1)
            for c in poly.coeffs:
                v = v * x + c
            return _check_finite(v, ALGEBRAIC, x)
        if isinstance(poly, TrigPoly):
            terms = [poly.a0 / 2]
            for l, (a, b) in enumerate(zip(poly.cos_coeffs, poly.sin_coeffs), start=1):
                terms.append(a * mp.cos(l * x))
                terms.append(b * mp.sin(l * x))
            return _check_finite(mp.fsum(terms), TRIGONOMETRIC, x)
        if isinstance(poly, ExpPoly):
            terms = [poly.a0 / 2]
            for l, (a, b) in enumerate(zip(poly.ch_coeffs, poly.sh_coeffs), start=1):
                terms.append(a * mp.cosh(l * x))
                terms.append(b * mp.sinh(l * x))
            return _check_finite(mp.fsum(terms), EXPONENTIAL, x)
        if isinstance(poly, FactoredForm):
            v = poly.scale
            for r, a in zip(poly.config.roots, poly.config.multiplicities):
                v *= _factor(poly.family, x - r) ** a
            return _check_finite(v, poly.family, x)
    raise TypeError(f"not a polynomial representation: {poly!r}")


def evaluate_derivative(poly, x, bits=None):
    """First derivative at x, by term-by-term differentiation or product rule."""
    bits = require_bits(bits or poly.precision_bits)
    with working(bits):
        x = mp.mpf(x)
        if isinstance(poly, AlgebraicPoly):
            # extended Horner: carries (value, derivative) together
            v, dv = mp.mpf(1), mp.mpf(0)
            for c in poly.coeffs:
                dv = dv * x + v
                v = v * x + c
            return _check_finite(dv, ALGEBRAIC, x)
        if isinstance(poly, TrigPoly):
            terms = []
            for l, (a, b) in enumerate(zip(poly.cos_coeffs, poly.sin_coeffs), start=1):
                terms.append(l * b * mp.cos(l * x))
                terms.append(-l * a * mp.sin(l * x))
            return _check_finite(mp.fsum(terms), TRIGONOMETRIC, x)
        if isinstance(poly, ExpPoly):
            terms = []
            for l, (a, b) in enumerate(zip(poly.ch_coeffs, poly.sh_coeffs), start=1):
                terms.append(l * a * mp.sinh(l * x))
                terms.append(l * b * mp.cosh(l * x))
            return _check_finite(mp.fsum(terms), EXPONENTIAL, x)
        if isinstance(poly, FactoredForm):
            cfg = poly.config
            terms = []
            for k, (rk, ak) in enumerate(zip(cfg.roots, cfg.multiplicities)):
                uk = x - rk
                t = ak * _factor_derivative(poly.family, uk)
                t *= _factor(poly.family, uk) ** (ak - 1)
                for j, (rj, aj) in enumerate(zip(cfg.roots, cfg.multiplicities)):
                    if j != k:
                        t *= _factor(poly.family, x - rj) ** aj
                terms.append(t)
            return _check_finite(poly.scale * mp.fsum(terms), poly.family, x)
    raise TypeError(f"not a polynomial representation: {poly!r}")


def magnitude_scale(poly, x, bits=None):
    """Attainable-magnitude scale of evaluate(poly, x): same sum with every
    term replaced by its absolute value.  Used to turn absolute evaluation
    discrepancies into scale-free ones."""
    bits = require_bits(bits or poly.precision_bits)
    with working(bits):
        x = mp.mpf(x)
        if isinstance(poly, AlgebraicPoly):
            v = mp.mpf(1)
            for c in poly.coeffs:
                v = v * abs(x) + abs(c)
            return v
        if isinstance(poly, TrigPoly):
            return abs(poly.a0) / 2 + mp.fsum(
                abs(a) + abs(b)
                for a, b in zip(poly.cos_coeffs, poly.sin_coeffs)
            )
        if isinstance(poly, ExpPoly):
            terms = [abs(poly.a0) / 2]
            for l, (a, b) in enumerate(zip(poly.ch_coeffs, poly.sh_coeffs), start=1):
                terms.append((abs(a) + abs(b)) * mp.cosh(l * x))
            return mp.fsum(terms)
        if isinstance(poly, FactoredForm):
            v = abs(poly.scale)
            for r, a in zip(poly.config.roots, poly.config.multiplicities):
                v *= abs(_factor(poly.family, x - r)) ** a
            return v
    raise TypeError(f"not a polynomial representation: {poly!r}")


def evaluation_noise(poly, x, bits=None):
    """A-priori rounding bound on evaluate(poly, x): roundoff times the
    attainable magnitude times the operation count.

    Coefficient forms cancel near multiple roots, so their bound is an
    absolute floor below which the computed value carries no signal.
    Factored forms evaluate with small relative error, so their bound is
    proportional to the value itself and effectively never floors.
    """
    bits = require_bits(bits or poly.precision_bits)
    with working(bits):
        if isinstance(poly, AlgebraicPoly):
            ops = 2 * (poly.degree + 1)
        elif isinstance(poly, (TrigPoly, ExpPoly)):
            ops = 4 * poly.degree + 4
        elif isinstance(poly, FactoredForm):
            ops = 3 * (poly.config.total_multiplicity + 1)
        else:
            raise TypeError(f"not a polynomial representation: {poly!r}")
        return ops * mp.mpf(2) ** (-bits) * magnitude_scale(poly, x, bits)


def _convolve_linear(coeffs, shift):
    # multiply the ascending-in-z polynomial `coeffs` by (shift*z - 1)
    out = [mp.mpf(0)] * (len(coeffs) + 1)
    for k, c in enumerate(coeffs):
        out[k] = out[k] - c
        out[k + 1] = out[k + 1] + c * shift
    return out


def expand_from_roots(form):
    """Coefficient representation matching the factored form pointwise.

    Algebraic expansion convolves (x - r) factors into a monic polynomial
    (scale must be 1: a monic form cannot absorb it).  Trigonometric and
    exponential expansions convolve the half-angle exponential factors and
    regroup into cos/sin (cosh/sinh) coefficients of degree n = sum(alpha)/2.
    The result is accepted only if it reproduces the factored values at a
    fixed set of probe points.
    """
    if not isinstance(form, FactoredForm):
        raise TypeError("expand_from_roots expects a FactoredForm")
    bits = form.precision_bits
    cfg = form.config
    total = cfg.total_multiplicity

    with working(bits):
        if form.family == ALGEBRAIC:
            if form.scale != 1:
                raise InvalidConfigurationError(
                    "algebraic expansion is monic; scale must be 1"
                )
            coeffs = [mp.mpf(1)]
            for r, a in zip(cfg.roots, cfg.multiplicities):
                for _ in range(a):
                    nxt = [mp.mpf(0)] * (len(coeffs) + 1)
                    for k, c in enumerate(coeffs):
                        nxt[k] += c
                        nxt[k + 1] -= c * r
                    coeffs = nxt
            expanded = AlgebraicPoly(tuple(coeffs[1:]), precision_bits=bits)
        else:
            if total % 2 != 0:
                raise InvalidConfigurationError(
                    f"{form.family} expansion needs an even total multiplicity, "
                    f"got {total}"
                )
            n = total // 2
            sigma = mp.fsum(r * a for r, a in zip(cfg.roots, cfg.multiplicities))
            if form.family == TRIGONOMETRIC:
                # sin(u/2) = e^{-i r/2} z^{1/2} (z e^{-i r} - 1) / (2i z),
                # z = e^{ix}; convolving all factors gives sum_k c_k z^k
                coeffs = [mp.mpc(1)]
                for r, a in zip(cfg.roots, cfg.multiplicities):
                    w = mp.exp(mp.mpc(0, -1) * r)
                    for _ in range(a):
                        coeffs = _convolve_linear(coeffs, w)
                lead = (
                    form.scale
                    * (-1) ** n
                    * mp.exp(mp.mpc(0, 1) * sigma / 2)
                    / mp.mpf(2) ** total
                )
                d = [lead * c for c in coeffs]  # d[m + n] multiplies e^{imx}
                a0 = 2 * d[n].real
                cos_c = tuple(2 * d[n + l].real for l in range(1, n + 1))
                sin_c = tuple(-2 * d[n + l].imag for l in range(1, n + 1))
                expanded = TrigPoly(a0, cos_c, sin_c, precision_bits=bits)
            else:
                coeffs = [mp.mpf(1)]
                for r, a in zip(cfg.roots, cfg.multiplicities):
                    w = mp.exp(-r)
                    for _ in range(a):
                        coeffs = _convolve_linear(coeffs, w)
                lead = form.scale * mp.exp(sigma / 2) / mp.mpf(2) ** total
                d = [lead * c for c in coeffs]  # d[m + n] multiplies e^{mx}
                a0 = 2 * d[n]
                ch_c = tuple(d[n + l] + d[n - l] for l in range(1, n + 1))
                sh_c = tuple(d[n + l] - d[n - l] for l in range(1, n + 1))
                expanded = ExpPoly(a0, ch_c, sh_c, precision_bits=bits)

        _certify_roundtrip(form, expanded, bits)
        return expanded


_PROBE_OFFSETS = ("0.1043", "-0.4321", "0.8765", "-1.2345", "1.7321", "-2.4142", "2.7183")


def _certify_roundtrip(form, expanded, bits):
    lo = min(form.config.roots)
    hi = max(form.config.roots)
    center = (lo + hi) / 2
    tol = mp.mpf(2) ** (-(bits - 12))
    for off in _PROBE_OFFSETS:
        x = center + mp.mpf(off)
        want = evaluate(form, x, bits)
        got = evaluate(expanded, x, bits)
        scale = max(magnitude_scale(expanded, x, bits), mp.mpf(1))
        if abs(want - got) > tol * scale:
            raise FamilyOverflowError(
                form.family,
                x,
                detail=f"expansion failed round-trip: |{want} - {got}| > {tol * scale}",
            )


def log_derivative_sum(family, other_roots, other_multiplicities, x, bits):
    """Logarithmic derivative of the product of the other roots' factors.

    Computed directly as a sum of per-root terms (the product itself is never
    formed, so high multiplicities cannot overflow):

        algebraic:      sum_j a_j / (x - x_j)
        trigonometric:  sum_j (a_j / 2) * cot((x - x_j) / 2)
        exponential:    sum_j (a_j / 2) * coth((x - x_j) / 2)

    Raises CollisionError when x is within 2**(-bits/2) of any x_j (or lands
    on another zero of the factor, for the periodic family).
    """
    require_bits(bits)
    with working(bits):
        x = mp.mpf(x)
        threshold = mp.mpf(2) ** (mp.mpf(-bits) / 2)
        terms = []
        for j, (r, a) in enumerate(zip(other_roots, other_multiplicities)):
            u = x - mp.mpf(r)
            if abs(u) < threshold:
                raise CollisionError(j, u, threshold)
            if family == ALGEBRAIC:
                t = a / u
            elif family == TRIGONOMETRIC:
                t = a * mp.cot(u / 2) / 2
            elif family == EXPONENTIAL:
                t = a * mp.coth(u / 2) / 2
            else:
                raise InvalidConfigurationError(f"unknown family {family!r}")
            if not mp.isfinite(t):
                # x sits on another zero of the factor (periodic collision)
                raise CollisionError(j, u, threshold)
            terms.append(t)
        return mp.fsum(terms)
