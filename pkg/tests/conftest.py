import numpy as np
import pytest

from polarsym import CodeSpec


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0DE)


def random_spec(rng, n: int, frozen_count: int | None = None) -> CodeSpec:
    """A spec with a uniformly random frozen set (any size unless given)."""
    N = 1 << n
    if frozen_count is None:
        frozen_count = int(rng.integers(0, N + 1))
    idx = rng.choice(N, size=frozen_count, replace=False)
    return CodeSpec(n=n, frozen=frozenset(int(i) for i in idx))


def random_frozen_values(rng, spec: CodeSpec) -> dict[int, int]:
    return {b: int(rng.integers(0, 2)) for b in spec.frozen}
