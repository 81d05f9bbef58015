from __future__ import annotations

import doctest
import importlib

import pytest

MODULES = ["rootsys", "metastruct", "gausscoeff", "galgebra", "cgaction", "dlops", "characters", "spherical"]


@pytest.mark.parametrize("name", MODULES)
def test_module_examples(name):
    module = importlib.import_module(f"metawhit.{name}")
    result = doctest.testmod(module)
    assert result.failed == 0
