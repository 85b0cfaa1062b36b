import logging
import shutil

import pytest

from config.settings import ATLAS_SETTINGS, CURVE_SETTINGS, FIELD_SETTINGS, TOWER_SETTINGS
from core.weierstrass import Curve


@pytest.fixture
def anomalous_f3():
    """y^2 = x^3 - x - 1 over F_3: no affine points, trace 3."""
    return Curve(3, 0, -1, -1)


@pytest.fixture
def full_two_torsion_f5():
    """y^2 = x^3 + x over F_5: E(F_5) = Z/2 x Z/2."""
    return Curve(5, 0, 1, 0)


@pytest.fixture
def golden_copy(tmp_path):
    """Writable copy of the shipped golden tables."""
    target = tmp_path / "data"
    shutil.copytree(ATLAS_SETTINGS["data_dir"], target)
    return target


@pytest.fixture
def isolated_run(monkeypatch):
    """Undo what app.main does to the shared caps and the root logger."""
    for settings, key in (
        (CURVE_SETTINGS, "enumeration_bound"),
        (FIELD_SETTINGS, "degree_cap"),
        (TOWER_SETTINGS, "bits_budget"),
    ):
        monkeypatch.setitem(settings, key, settings[key])
    root = logging.getLogger()
    handlers, level = set(root.handlers), root.level
    yield
    for handler in root.handlers[:]:
        if handler not in handlers:
            root.removeHandler(handler)
    root.setLevel(level)
