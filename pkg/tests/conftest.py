from __future__ import annotations

import pytest

from metawhit.cgaction import algebra_of
from metawhit.metastruct import MetaplecticData


@pytest.fixture
def a2_n2():
    md = MetaplecticData.build("A2", 2)
    return md, algebra_of(md)


def build(label: str, n: int, kappa: int = 1):
    md = MetaplecticData.build(label, n, kappa)
    return md, algebra_of(md)
