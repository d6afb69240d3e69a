import random
from pathlib import Path

import pytest

from nocmap import formats
from nocmap.benchgen import BenchConfig, generate
from nocmap.model import Mapping, Mesh, NocParams

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fig1_app():
    return formats.bundled_application("figure1")


@pytest.fixture(scope="session")
def fig1_platform():
    mesh, params = formats.resolve_platform("figure1")
    return mesh, params


@pytest.fixture(scope="session")
def mapping_c():
    return formats.load_mapping(FIXTURES / "figure1_mapping_c.json")


@pytest.fixture(scope="session")
def mapping_d():
    return formats.load_mapping(FIXTURES / "figure1_mapping_d.json")


def random_instance(seed, max_cores=6, max_packets=14, meshes=((2, 2), (3, 2), (2, 3), (3, 3), (1, 4), (4, 1))):
    """Small random application, mesh, platform and mapping for property checks."""
    rng = random.Random(seed)
    w, h = rng.choice(meshes)
    mesh = Mesh(w, h)
    m = rng.randint(2, min(mesh.n, max_cores))
    app = generate(BenchConfig(n_cores=m, n_packets=rng.randint(max(1, (m + 1) // 2), max_packets),
                               volume_range=(1, 96), comp_range=(0, 40), max_fanout=rng.randint(1, 3),
                               seed=seed, name=f"rand{seed}"))
    params = NocParams(erbit=rng.choice([1e-12, 3e-13, 0.0]), elbit=rng.choice([0.0, 5e-13, 1e-12]),
                       ecbit=rng.choice([0.0, 1e-13]), ps_router=rng.choice([0.0, 1e-4, 2e-3]),
                       clock_period=rng.choice([1e-9, 2.5e-9]), tr=rng.randint(1, 4), tl=rng.randint(1, 3),
                       flit_width=rng.choice([1, 4, 16]))
    tiles = rng.sample(range(1, mesh.n + 1), m)
    mapping = Mapping.from_vector(sorted(c.id for c in app.cores), tiles)
    return app, mesh, params, mapping


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
