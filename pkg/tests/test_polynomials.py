import pytest
from mpmath import mp

from multiroots import (
    ALGEBRAIC,
    EXPONENTIAL,
    TRIGONOMETRIC,
    AlgebraicPoly,
    CollisionError,
    ExpPoly,
    FactoredForm,
    FamilyOverflowError,
    InvalidConfigurationError,
    RootConfiguration,
    TrigPoly,
    evaluate,
    evaluate_derivative,
    evaluation_noise,
    expand_from_roots,
    log_derivative_sum,
    magnitude_scale,
)
from conftest import assert_close, random_configuration

# independently computed with the factored product at 256 bits
T3_AT_0P2 = "0.03307453734398724732237873591725980805875002968812298335351705923076569"
E2_AT_0P7 = "6.533705295059523862838456301556128947030223439858272241371154964797447"

EX1_CONFIG = (("2", "3", "5"), (2, 3, 1))
EX2_CONFIG = (("1", "2", "2.5"), (3, 2, 1))
EX3_CONFIG = (("-2", "3"), (2, 2))


def ex_factored(family, config, bits):
    roots, mults = config
    cfg = RootConfiguration(roots, mults, precision_bits=bits)
    return FactoredForm(family, cfg, precision_bits=bits)


class TestEvaluate:
    def test_pure_square(self):
        poly = AlgebraicPoly((0, 0))
        assert evaluate(poly, 3) == 9

    def test_factored_root_annihilates(self):
        form = ex_factored(ALGEBRAIC, EX1_CONFIG, 53)
        assert evaluate(form, 2) == 0

    def test_factored_trig_matches_product_oracle(self):
        form = ex_factored(TRIGONOMETRIC, EX2_CONFIG, 256)
        got = evaluate(form, "0.2")
        assert_close(got, mp.mpf(T3_AT_0P2), rel=mp.mpf("1e-65"))

    def test_factored_exp_matches_product_oracle(self):
        form = ex_factored(EXPONENTIAL, EX3_CONFIG, 256)
        got = evaluate(form, "0.7")
        assert_close(got, mp.mpf(E2_AT_0P7), rel=mp.mpf("1e-65"))

    def test_trig_coefficient_form(self):
        # cos x alone: a0 = 0, a_1 = 1, b_1 = 0
        poly = TrigPoly(0, (1,), (0,))
        assert_close(evaluate(poly, 0), 1, rel=mp.mpf("1e-15"))
        assert_close(evaluate(poly, "1.1"), mp.cos(mp.mpf("1.1")),
                     rel=mp.mpf("1e-15"))

    def test_overflow_error_names_family(self):
        poly = ExpPoly(1, (1,), (0,))
        with pytest.raises(FamilyOverflowError) as err:
            evaluate(poly, mp.inf)
        assert err.value.family == EXPONENTIAL


class TestEvaluateDerivative:
    def test_pure_square(self):
        assert evaluate_derivative(AlgebraicPoly((0, 0)), 3) == 6

    def test_pure_cos_at_zero(self):
        assert evaluate_derivative(TrigPoly(0, (1,), (0,)), 0) == 0

    def test_trig_factored_against_central_difference(self):
        bits = 192
        form = ex_factored(TRIGONOMETRIC, EX2_CONFIG, bits)
        with mp.workprec(bits):
            x = mp.mpf("1.7")
            h = mp.mpf(2) ** (-bits // 3)
            oracle = (evaluate(form, x + h) - evaluate(form, x - h)) / (2 * h)
        got = evaluate_derivative(form, x)
        assert_close(got, oracle, rel=mp.mpf("1e-10"))

    def test_coefficient_forms_against_central_difference(self, rng):
        # away from roots, 53-bit analytic derivatives match finite differences
        for family, config in ((ALGEBRAIC, EX1_CONFIG),
                               (TRIGONOMETRIC, EX2_CONFIG),
                               (EXPONENTIAL, EX3_CONFIG)):
            poly = expand_from_roots(ex_factored(family, config, 53))
            checked = 0
            while checked < 6:
                x = mp.mpf(rng.uniform(-3.0, 3.0))
                if abs(evaluate(poly, x)) <= mp.mpf("1e-3"):
                    continue
                h = mp.mpf(2) ** -18
                oracle = (evaluate(poly, x + h) - evaluate(poly, x - h)) / (2 * h)
                scale = max(abs(oracle), abs(evaluate(poly, x)))
                assert abs(evaluate_derivative(poly, x) - oracle) <= \
                    mp.mpf("1e-6") * scale
                checked += 1


class TestExpandFromRoots:
    def test_single_simple_root(self):
        cfg = RootConfiguration((5,), (1,))
        poly = expand_from_roots(FactoredForm(ALGEBRAIC, cfg))
        assert poly.coeffs == (mp.mpf(-5),)

    def test_repeated_roots_sextic(self):
        bits = 192
        form = ex_factored(ALGEBRAIC, EX1_CONFIG, bits)
        poly = expand_from_roots(form)
        # (x-2)^2 (x-3)^3 (x-5): integer convolution, forced arithmetic
        assert [int(c) for c in poly.coeffs] == [-18, 132, -506, 1071, -1188, 540]
        assert evaluate(poly, 0) == 540
        for r in form.config.roots:
            assert abs(evaluate(poly, r)) <= mp.mpf(2) ** (-(bits - 12)) * 540

    def test_exp_expansion_matches_product(self, rng):
        bits = 256
        form = ex_factored(EXPONENTIAL, EX3_CONFIG, bits)
        poly = expand_from_roots(form)
        assert poly.degree == 2
        for _ in range(20):
            x = mp.mpf(rng.uniform(-4.0, 5.0))
            want = evaluate(form, x)
            got = evaluate(poly, x)
            scale = max(abs(want), mp.mpf(1))
            assert abs(want - got) <= mp.mpf("1e-20") * scale

    def test_trig_expansion_has_expected_degree(self):
        poly = expand_from_roots(ex_factored(TRIGONOMETRIC, EX2_CONFIG, 128))
        assert poly.degree == 3

    def test_odd_total_multiplicity_refused(self):
        cfg = RootConfiguration((1, 2), (1, 2))
        with pytest.raises(InvalidConfigurationError):
            expand_from_roots(FactoredForm(TRIGONOMETRIC, cfg))

    def test_scaled_algebraic_refused(self):
        cfg = RootConfiguration((1, 2), (1, 1))
        with pytest.raises(InvalidConfigurationError):
            expand_from_roots(FactoredForm(ALGEBRAIC, cfg, scale=2))

    def test_factored_expanded_agreement_random(self, rng):
        bits = 128
        tol = mp.mpf(2) ** (-(bits - 12))
        for family in (ALGEBRAIC, TRIGONOMETRIC, EXPONENTIAL):
            for _ in range(5):
                cfg = random_configuration(rng, family, bits=bits)
                form = FactoredForm(family, cfg, precision_bits=bits)
                poly = expand_from_roots(form)
                lo, hi = min(cfg.roots), max(cfg.roots)
                for _ in range(50):
                    x = mp.mpf(rng.uniform(float(lo) - 1.5, float(hi) + 1.5))
                    diff = abs(evaluate(form, x, bits) - evaluate(poly, x, bits))
                    scale = max(magnitude_scale(poly, x, bits), mp.mpf(1))
                    assert diff <= tol * scale


class TestLogDerivativeSum:
    def test_single_other_root(self):
        assert log_derivative_sum(ALGEBRAIC, (0,), (1,), 2, 53) == mp.mpf("0.5")

    def test_two_other_roots_forced_arithmetic(self):
        got = log_derivative_sum(ALGEBRAIC, (0, 4), (2, 1), 2, 53)
        assert got == mp.mpf("0.5")  # 2/2 + 1/(-2)

    def test_trig_against_finite_difference_on_product(self):
        bits = 53

        def product(x):
            return (mp.sin((x - 2) / 2) ** 2
                    * mp.sin((x - mp.mpf("2.5")) / 2))

        x = mp.mpf("0.2")
        h = mp.mpf(2) ** -17
        oracle = (mp.log(abs(product(x + h))) - mp.log(abs(product(x - h)))) / (2 * h)
        got = log_derivative_sum(TRIGONOMETRIC, (2, "2.5"), (2, 1), x, bits)
        assert_close(got, oracle, rel=mp.mpf("1e-8"))

    def test_exp_against_finite_difference_on_product(self):
        def product(x):
            return mp.sinh((x + 2) / 2) ** 2 * mp.sinh((x - 3) / 2) ** 2

        x = mp.mpf("0.7")
        h = mp.mpf(2) ** -17
        oracle = (mp.log(abs(product(x + h))) - mp.log(abs(product(x - h)))) / (2 * h)
        got = log_derivative_sum(EXPONENTIAL, (-2, 3), (2, 2), x, 53)
        assert_close(got, oracle, rel=mp.mpf("1e-8"))

    def test_collision_identifies_other_index(self):
        with pytest.raises(CollisionError) as err:
            log_derivative_sum(ALGEBRAIC, (0, 1), (1, 1), 1 + mp.mpf(2) ** -40, 53)
        assert err.value.j == 1

    def test_multiplicity_doubling_scales_exactly(self, rng):
        for family in (ALGEBRAIC, TRIGONOMETRIC, EXPONENTIAL):
            cfg = random_configuration(rng, family)
            x = max(cfg.roots) + mp.mpf("0.77")
            base = log_derivative_sum(family, cfg.roots, cfg.multiplicities, x, 53)
            doubled = log_derivative_sum(
                family, cfg.roots, [2 * a for a in cfg.multiplicities], x, 53)
            assert doubled == 2 * base


class TestInvariants:
    def test_trig_periodicity(self, rng):
        bits = 128
        poly = expand_from_roots(ex_factored(TRIGONOMETRIC, EX2_CONFIG, bits))
        with mp.workprec(bits):
            period = 2 * mp.pi
            for _ in range(10):
                x = mp.mpf(rng.uniform(-3.0, 3.0))
                diff = abs(evaluate(poly, x) - evaluate(poly, x + period))
                scale = max(magnitude_scale(poly, x), mp.mpf(1))
                assert diff <= mp.mpf(2) ** (-(bits - 12)) * scale

    def test_noise_floor_orders(self):
        # coefficient forms floor absolutely; factored forms floor relatively
        bits = 128
        expanded = expand_from_roots(ex_factored(ALGEBRAIC, EX1_CONFIG, bits))
        factored = ex_factored(ALGEBRAIC, EX1_CONFIG, bits)
        with mp.workprec(bits):
            near_root = mp.mpf("3.00000000000000000001")  # 1e-20 off the root
            true_value = abs(evaluate(factored, near_root))
        assert evaluation_noise(expanded, near_root) > true_value
        assert evaluation_noise(factored, near_root) < true_value
