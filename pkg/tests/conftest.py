import numpy as np
import pytest

from lorspin.lorentz import LorentzNumber, QuatAC, h0_element, real8_to_h0


def random_quat(rng, shape=()):
    return QuatAC(rng.normal(size=shape + (2, 4)) + 1j * rng.normal(size=shape + (2, 4)))


def random_h0(rng, shape=()):
    return real8_to_h0(rng.normal(size=shape + (8,)))


def random_imh0(rng, shape=()):
    a = [LorentzNumber(*rng.normal(size=(2,) + shape)) for _ in range(3)]
    return h0_element(0.0, *a)


def random_vector(rng, shape=()):
    return rng.normal(size=shape + (4,))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def flat_config(n, branch="delta_pos_1", extent=1.0, **extra):
    from lorspin.pipeline import GenerationConfig

    data = {"branch": branch, "grid": {"n": n, "extent": extent}}
    if branch.startswith("delta_pos") and "psi1" not in extra:
        data.update(psi1={"kind": "poly", "data": [0, 1]}, psi2={"kind": "poly", "data": [0, 0.3]})
    data.update(extra)
    return GenerationConfig.from_dict(data)


_CACHE = {}


def generated(n, branch="delta_pos_1", **extra):
    """Generated surfaces are reused across tests (they are not mutated)."""
    import json

    from lorspin.pipeline import generate

    key = (n, branch, json.dumps(extra, sort_keys=True))
    if key not in _CACHE:
        _CACHE[key] = generate(flat_config(n, branch, **extra))
    return _CACHE[key]


def graph_surface(chart):
    """A non-flat test immersion with a Lorentzian induced metric near the origin."""
    S, T = chart.grid()
    return np.stack([S + 0.2 * T ** 2, T, 0.3 * S * T, 0.2 * (S ** 2 + T ** 2)], axis=-1)


# intrinsic curvature of graph_surface at (s, t) = (0.3, 0.2), from a symbolic computation
GRAPH_K_AT_POINT = -0.2355623081273311
