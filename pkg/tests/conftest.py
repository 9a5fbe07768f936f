import time
from pathlib import Path

import numpy as np
import pytest

from bodyblock import cli

from bodyblock.diffraction import field_grid
from bodyblock.ensemble import nominal_pose
from bodyblock.geometry import build_scene

# acceptance lines collected by tests/test_acceptance.py and echoed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.rstrip("abcd")), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def scene():
    return build_scene()


@pytest.fixture(scope="session")
def surface_scene(scene):
    """Default scene restricted to its first receiver surface (180 x 90)."""
    return scene.with_manifold(scene.manifold.restricted(n_surfaces=1))


@pytest.fixture(scope="session")
def free_surface(surface_scene):
    return field_grid(surface_scene)


@pytest.fixture(scope="session")
def p1_surface(surface_scene):
    return field_grid(surface_scene, nominal_pose("p1"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def surface_run(tmp_path_factory):
    """Single-surface dataset for p1, p2, p3 made through the CLI (a few minutes on one core)."""
    out = tmp_path_factory.mktemp("surface_run")
    path = out / "d.blk"
    cfg = Path(__file__).resolve().parents[1] / "configs" / "default.cfg"
    t0 = time.perf_counter()
    code = cli.main(["simulate", "--config", str(cfg), "--surfaces", "1", "--out", str(path)])
    elapsed = time.perf_counter() - t0
    assert code == 0
    return {"path": path, "dir": out, "seconds": elapsed}
