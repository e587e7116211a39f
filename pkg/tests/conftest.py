import numpy as np
import pytest
from hypothesis import settings

from orliczkit.bodies import random_polygon, square
from orliczkit.orlicz_fn import expm1_normalized, power_law

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

PHI_MATRIX = ["pow:-3", "pow:-1/2", "pow:1/2", "pow:1", "pow:2", "expm1"]


def phi_from(spec: str):
    if spec == "expm1":
        return expm1_normalized()
    num, _, den = spec.split(":")[1].partition("/")
    return power_law(float(num) / float(den) if den else float(num))


def polygons(count: int, seed: int):
    rng = np.random.default_rng(seed)
    return [random_polygon(rng) for _ in range(count)]


def centered(K):
    return K.translate(-K.centroid())


@pytest.fixture
def unit_square():
    return square()
