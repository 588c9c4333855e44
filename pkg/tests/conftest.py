"""Shared test fixtures for novconf."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from novconf.tools.confalg import (
    ConfPresentation,
    build_w,
    current_algebra,
    one_dim_np,
    quadratic_from_np,
)
from novconf.tools.idealkit import LocalityFn

SCRIPTS = Path(__file__).parent / "fixtures" / "scripts"

W_SCRIPT = """\
// W with k <= 2
algebra W {
  generators: x, v0, v1, v2;
  bracket(v0, x) = v0;
  bracket(v1, x) = (del + lam)*v1;
  bracket(v2, x) = (del + lam)^2*v2;
}
check rsym_novikov W;
check lcom_novikov W;
locality W v2 x;
"""

QUADRATIC_SCRIPT = """\
npalgebra P {
  basis: e;
  circ(e, e) = e;
  star(e, e) = e;
}
check np_axioms P;
check rsym_novikov P;
product P e(2) e(-1);
locality P e e;
"""


@pytest.fixture
def w_algebra() -> ConfPresentation:
    return build_w(3)


@pytest.fixture
def quadratic() -> ConfPresentation:
    return quadratic_from_np(one_dim_np())


@pytest.fixture
def current() -> ConfPresentation:
    return current_algebra()


@pytest.fixture
def loc1() -> LocalityFn:
    return LocalityFn(1)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def scripts_dir() -> Path:
    return SCRIPTS


@pytest.fixture
def w_script() -> str:
    return W_SCRIPT


@pytest.fixture
def quadratic_script() -> str:
    return QUADRATIC_SCRIPT
