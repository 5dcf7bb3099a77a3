import json

import numpy as np
import pytest

from core.errors import UsageError
from geometry.prescribed import constant, describe, minimum, parse_prescription, validate_class


def test_constant_in_both_classes_for_hyperbolic_base(H_one):
    report = validate_class(H_one, -1)
    assert report.in_c1k and report.in_c1k_even
    assert report.margin == pytest.approx(2.0)
    assert report.margin_even == pytest.approx(2.0)


def test_half_is_on_the_boundary_and_rejected():
    report = validate_class(constant(0.5), -1)
    assert not report.in_c1k
    assert report.margin == 0.0


def test_soliton_is_in_neither_class(soliton):
    report = validate_class(soliton, -1)
    assert not soliton.even
    assert not report.in_c1k and not report.in_c1k_even
    assert report.witness == pytest.approx(-1.0)


def test_positive_constants_are_admissible_on_sphere_base():
    for v in (0.01, 0.3, 2.0):
        assert validate_class(constant(v), 1).in_c1k
    assert not validate_class(constant(0.0), 1).in_c1k


def test_random_even_polynomials_accepted(rng):
    for _ in range(50):
        coeffs = [float(rng.uniform(0.51, 1.5)), float(rng.uniform(0.0, 0.5)), float(rng.uniform(0.0, 0.5))]
        H = parse_prescription({"type": "even-poly", "coeffs": coeffs})
        assert H.even
        assert validate_class(H, -1).in_c1k_even


def test_class_inclusions(rng):
    for _ in range(20):
        coeffs = rng.uniform(-0.5, 1.5, size=3).tolist()
        H = parse_prescription({"type": "even-poly", "coeffs": coeffs})
        report = validate_class(H, -1)
        if report.in_c1k:
            assert report.in_c1k_even


def test_evaluation_and_derivative():
    H = parse_prescription('{"type": "poly", "coeffs": [1.0, 0.5, 2.0]}')
    y = np.array([-1.0, 0.0, 0.5])
    assert np.allclose(H(y), 1.0 + 0.5 * y + 2.0 * y**2)
    assert np.allclose(H.deriv(y), 0.5 + 4.0 * y)
    assert H(0.5) == pytest.approx(1.75)
    assert H.scalar(0.5) == pytest.approx(1.75)
    assert not H.even


def test_even_poly_expands_to_even_powers():
    H = parse_prescription({"type": "even-poly", "coeffs": [1.0, 0.0, 3.0]})
    assert H(0.5) == pytest.approx(1.0 + 3.0 * 0.5**4)
    assert H.even


def test_dense_table_agrees_with_polynomial():
    y = np.linspace(-1.0, 1.0, 2001)
    nodes = [[float(a), float(1.0 + 0.5 * a * a)] for a in y]
    table = parse_prescription({"type": "table", "nodes": nodes})
    poly = parse_prescription({"type": "even-poly", "coeffs": [1.0, 0.5]})
    r_table, r_poly = validate_class(table, -1), validate_class(poly, -1)
    assert r_table.in_c1k == r_poly.in_c1k
    assert r_table.margin == pytest.approx(r_poly.margin, abs=1e-6)


def test_table_nodes_are_sorted():
    H = parse_prescription({"type": "table", "nodes": [[1, 2], [-1, 2], [0, 1], [0.5, 1.5]]})
    assert H(0.0) == pytest.approx(1.0)
    assert H(1.0) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        "[1, 2]",
        '{"type": "cubic"}',
        '{"type": "constant"}',
        '{"type": "constant", "value": 1, "extra": 2}',
        '{"type": "table", "nodes": [[0, 1], [0.5, 1], [1, 1]]}',
        '{"type": "table", "nodes": [[-2, 1], [0, 1], [0.5, 1], [1, 1]]}',
        '{"type": "poly", "coeffs": []}',
        '{"type": "constant", "value": NaN}',
    ],
)
def test_malformed_descriptors(text):
    with pytest.raises(UsageError):
        parse_prescription(text)


def test_describe_round_trips():
    H = parse_prescription({"type": "even-poly", "coeffs": [1.0, 0.25]})
    again = parse_prescription(json.dumps(describe(H)))
    y = np.linspace(-1, 1, 11)
    assert np.array_equal(H(y), again(y))
    assert describe(constant(2.0)) == {"type": "constant", "value": 2.0}


def test_minimum():
    H = parse_prescription({"type": "poly", "coeffs": [1.0, 0.5]})
    assert minimum(H) == pytest.approx(0.5)
