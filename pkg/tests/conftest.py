"""Fixtures compartilhadas pelos testes."""

from __future__ import annotations

import pytest

from src.fans.builders import hirzebruch_fan, projective_space_fan, weighted_p2_quotient
from src.fans.multifan import MultiFan


@pytest.fixture
def p1() -> MultiFan:
    return projective_space_fan(1)


@pytest.fixture
def p2() -> MultiFan:
    return projective_space_fan(2)


@pytest.fixture
def p2_mod_2() -> MultiFan:
    return weighted_p2_quotient(2)


@pytest.fixture
def f2() -> MultiFan:
    return hirzebruch_fan(2)
