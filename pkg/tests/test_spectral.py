import math
from fractions import Fraction as F

import pytest

from gticheck import linalg
from gticheck.spectral import (
    Classification,
    classify_expanding,
    guo_matrix,
    remark_matrix,
    singular_ratio,
    uce_guarantee_by_singular,
)


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (((2, 0), (0, 2)), Classification.EXPANDING),
        (((1, 0), (0, 2)), Classification.EXPANDING_ON_SUBSPACE_ONLY),
        (guo_matrix(2), Classification.NOT_EXPANDING_ON_SUBSPACE),
        (remark_matrix(F(7, 10)), Classification.NOT_EXPANDING_ON_SUBSPACE),
        (((F(1, 2), 0), (0, 3)), Classification.NOT_EXPANDING_ON_SUBSPACE),
        (((0, -1), (1, 0)), Classification.NOT_EXPANDING_ON_SUBSPACE),
        (((0, -1, 0), (1, 0, 0), (0, 0, 3)), Classification.EXPANDING_ON_SUBSPACE_ONLY),
        (((1, 1), (-1, 1)), Classification.EXPANDING),
    ],
)
def test_exact_classification(matrix, expected):
    rep = classify_expanding(matrix)
    assert rep.certainty == "exact"
    assert rep.classification is expected


def test_guo_reports_jordan_block():
    rep = classify_expanding(guo_matrix(2))
    unit = rep.unit_factors
    assert len(unit) == 1 and unit[0].multiplicity == 2 and unit[0].min_poly_exponent == 2
    assert rep.conditions == {"a": True, "b": True, "c": False}


def test_unit_circle_detected_for_irreducible_quartic():
    # companion matrix of x^4 - x^3 - x^2 - x + 1 (a Salem polynomial, roots on and off the circle)
    c = ((0, 0, 0, -1), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1))
    rep = classify_expanding(c)
    f = rep.factors[0]
    assert (f.inside, f.on_circle, f.outside) == (1, 2, 1)
    assert rep.classification is Classification.NOT_EXPANDING_ON_SUBSPACE


def test_float_path_is_flagged():
    rep = classify_expanding(remark_matrix(1 / math.sqrt(2)))
    assert rep.certainty == "tolerance-based"
    assert rep.classification is Classification.NOT_EXPANDING_ON_SUBSPACE


def test_float_expanding():
    rep = classify_expanding(((2.5, 0.0), (0.0, 1.5)))
    assert rep.classification is Classification.EXPANDING


def test_singular_matrix_rejected():
    with pytest.raises(linalg.SingularMatrixError):
        classify_expanding(((1, 2), (2, 4)))


def test_report_dict_and_render():
    rep = classify_expanding(((1, 0), (0, 2)))
    d = rep.to_dict()
    assert d["classification"] == "ExpandingOnSubspaceOnly"
    assert "x - 1" in d["unit_circle_factors"][0]
    assert "ExpandingOnSubspaceOnly" in rep.render()


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (((0, -1), (1, 0)), 1.0),
        (linalg.diag([F(1, 5), 5]), 25.0),
        (((F(3, 2), 0), (0, F(3, 2))), 1.0),
    ],
)
def test_singular_ratio(matrix, expected):
    assert singular_ratio(matrix) == pytest.approx(expected)


def test_uce_guarantee():
    iso = [linalg.diag([s, s]) for s in (F(1, 4), 1, 7)]
    assert uce_guarantee_by_singular(iso, 1).holds
    diag = [linalg.diag([F(1, j), j]) for j in range(1, 11)]
    assert not uce_guarantee_by_singular(diag, 99).holds
    single = [((1, 2), (0, 1))]
    assert uce_guarantee_by_singular(single, singular_ratio(single[0])).holds
