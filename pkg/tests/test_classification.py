"""Testes da classificação de ℙⁿ e dos fibrados extremais."""

from __future__ import annotations

from itertools import product

import pytest

from src.analysis.classification import (
    BUNDLE,
    NONE,
    PROJECTIVE_SPACE,
    BundleDescriptor,
    balanced_twists,
    classify_extremal,
    extremal_labels,
)
from src.fans.builders import (
    BundleSpec,
    hirzebruch_fan,
    projective_bundle_fan,
    projective_space_fan,
    weighted_p2_quotient,
)
from src.fans.chern import c1_divisibility
from src.fans.multifan import MaximalSimplex, MultiFan
from src.utils.errors import NotDivisible, PreconditionViolated


def _sample_blown_up_surface() -> MultiFan:
    rays = [(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)]
    simplices = [MaximalSimplex(key) for key in ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4))]
    return MultiFan(2, rays, simplices, name="blowup")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_space_is_recognized(n):
    result = classify_extremal(projective_space_fan(n))
    assert result.kind == PROJECTIVE_SPACE
    assert result.ty_form == "n+1"
    assert result.bundle is None


@pytest.mark.parametrize("n", [2, 3])
def test_bundles_over_projective_line(n):
    for twists in product(range(-2, 3), repeat=n - 1):
        spec = BundleSpec(n, 1, twists)
        result = classify_extremal(projective_bundle_fan(spec))
        assert result.kind == BUNDLE, spec.label
        assert result.ty_form == "n"
        assert result.bundle.spec == spec
        assert len(result.bundle.labeling) == n + 2


def test_labeling_realizes_bundle_relations():
    fan = projective_bundle_fan(BundleSpec(3, 1, (2, -1)))
    descriptor = classify_extremal(fan).bundle
    v = [fan.rays[i] for i in descriptor.labeling]
    k = (0, 0) + descriptor.twists
    for c in range(fan.rank):
        assert v[0][c] + v[1][c] + sum(k[i] * v[i][c] for i in range(2, 4)) == 0
        assert v[2][c] + v[3][c] + v[4][c] == 0


def test_hirzebruch_surfaces_recover_twist_up_to_sign():
    for k in range(-2, 3):
        result = classify_extremal(hirzebruch_fan(k))
        assert result.kind == BUNDLE
        assert abs(result.bundle.twists[0]) == abs(k)


def test_projective_line_bundles_over_projective_plane():
    for k in (1, -2):
        spec = BundleSpec(3, 2, (k,))
        result = classify_extremal(projective_bundle_fan(spec))
        assert result.kind == BUNDLE
        assert result.bundle.spec == spec
        assert result.bundle.labeling[-2:] == (3, 4)


def test_non_extremal_surface():
    result = classify_extremal(_sample_blown_up_surface())
    assert result.kind == NONE
    assert result.ty_form is None


def test_preconditions():
    with pytest.raises(PreconditionViolated):
        classify_extremal(weighted_p2_quotient(2))
    rays = [(1, 0), (0, 1), (-1, -1)]
    doubled = MultiFan(2, rays, [MaximalSimplex(key, 2, 0) for key in ((0, 1), (0, 2), (1, 2))])
    with pytest.raises(PreconditionViolated):
        classify_extremal(doubled)


def test_c1_divisible_by_n_flag():
    assert classify_extremal(projective_space_fan(1)).c1_divisible_by_n
    assert not classify_extremal(projective_space_fan(2)).c1_divisible_by_n
    assert classify_extremal(hirzebruch_fan(2)).c1_divisible_by_n
    assert not classify_extremal(hirzebruch_fan(1)).c1_divisible_by_n


def test_divisibility_bound_holds_on_smooth_fixtures():
    fans = [projective_space_fan(n) for n in (1, 2, 3)] + [hirzebruch_fan(k) for k in range(3)]
    fans += [projective_bundle_fan(BundleSpec(3, 1, (a, b))) for a, b in product(range(-1, 2), repeat=2)]
    for fan in fans:
        assert c1_divisibility(fan).n_max <= fan.rank + 1, fan.name


def test_balanced_twists():
    descriptor = BundleDescriptor(BundleSpec(3, 1, (2, 2)), (0, 1, 2, 3, 4))
    assert balanced_twists(descriptor) == (-2, 0, 0)
    assert sum(balanced_twists(BundleDescriptor(BundleSpec(2, 1, (2,)), (0, 1, 2, 3)))) == -2


def test_balanced_twists_requires_divisibility():
    with pytest.raises(NotDivisible):
        balanced_twists(BundleDescriptor(BundleSpec(3, 1, (1, -1)), (0, 1, 2, 3, 4)))
    with pytest.raises(NotDivisible):
        balanced_twists(BundleDescriptor(BundleSpec(3, 2, (1,)), (0, 1, 2, 3, 4)))


def test_extremal_labels():
    lines = extremal_labels(classify_extremal(projective_bundle_fan(BundleSpec(2, 1, (1,)))))
    assert lines[0] == "classe: bundle"
    assert "fibrado: bundle:n=2,r=1,k=[1]" in lines
