import numpy as np
import pytest

from sectionlab.geometry import build_polytope, builtin_body
from sectionlab.rng import RngStream


@pytest.fixture(scope="session")
def square():
    return builtin_body("square")


@pytest.fixture(scope="session")
def cube():
    return builtin_body("cube")


@pytest.fixture(scope="session")
def dodecahedron():
    return builtin_body("dodecahedron", normalize_volume=True)


@pytest.fixture(scope="session")
def ball3():
    return builtin_body("ball")


@pytest.fixture(scope="session")
def random_hull20():
    gen = RngStream(2718, 9).generator()
    points = gen.standard_normal((20, 3))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    return build_polytope(points, label="hull20")


def random_directions(dim, size, seed):
    gen = np.random.default_rng(seed)
    if dim == 2:
        phi = gen.uniform(0, 2 * np.pi, size)
        return np.column_stack([np.cos(phi), np.sin(phi)])
    z = gen.uniform(-1, 1, size)
    phi = gen.uniform(0, 2 * np.pi, size)
    rxy = np.sqrt(1 - z * z)
    return np.column_stack([rxy * np.cos(phi), rxy * np.sin(phi), z])
