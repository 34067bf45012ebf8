import numpy as np
import pytest


def random_disc(rng, size):
    return np.sqrt(rng.uniform(size=size)) * np.exp(2j * np.pi * rng.uniform(size=size))


def separated_nodes(rng, K, eta_min, tries=10_000):
    """``K`` points of the closed unit disc with pairwise distance at least ``eta_min``."""
    for _ in range(tries):
        pts = []
        while len(pts) < K:
            p = complex(random_disc(rng, 1)[0])
            if all(abs(p - q) >= eta_min for q in pts):
                pts.append(p)
            elif len(pts) and rng.uniform() < 0.01:
                break
        if len(pts) == K:
            return np.array(pts)
    raise RuntimeError("could not place separated nodes")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
