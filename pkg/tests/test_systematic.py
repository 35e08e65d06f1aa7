import numpy as np
import pytest

from polarsym import (
    CodeSpec,
    polar_transform,
    sc_decode,
    systematic_encode,
    systematic_encode_batch,
)
from polarsym import gf2
from polarsym.oracle import transform_matrix

from conftest import random_spec


def test_n1_worked_example():
    spec = CodeSpec(n=1, frozen=frozenset({0}))
    x = systematic_encode(spec, {1: 1}, {0: 1})
    assert list(x) == [0, 1]
    assert list(polar_transform(x)) == [1, 1]


def test_n2_worked_example():
    # frozen {00, 01} = {0, 1}; systematic positions are {1, 3}
    spec = CodeSpec(n=2, frozen=frozenset({0, 1}))
    assert spec.systematic_unfrozen_sorted == (1, 3)
    x = systematic_encode(spec, {1: 1, 3: 0}, {0: 0, 1: 1})
    assert list(x) == [0, 1, 1, 0]
    u = polar_transform(x)
    assert u[0] == 0 and u[1] == 1


def test_zero_in_zero_out():
    spec = CodeSpec(n=3, frozen=frozenset({0, 1, 2, 4}))
    x = systematic_encode(
        spec,
        {p: 0 for p in spec.systematic_unfrozen},
        {b: 0 for b in spec.frozen},
    )
    assert not x.any()


def _check_pair(spec, x, message, frozen):
    sys_positions = list(spec.systematic_unfrozen_sorted)
    assert np.array_equal(x[..., sys_positions], message)
    u = (x @ transform_matrix(spec.n)) % 2 if spec.n <= 4 else None
    if u is None:
        u = polar_transform(x)
    assert np.array_equal(u[..., list(spec.frozen_sorted)], frozen)


def test_exhaustive_small(rng):
    for n in (1, 2, 3):
        N = 1 << n
        for spec in (random_spec(rng, n), random_spec(rng, n)):
            K = len(spec.unfrozen)
            msgs = np.array(
                [[(m >> (K - 1 - i)) & 1 for i in range(K)] for m in range(1 << K)],
                dtype=np.uint8,
            )
            frzs = np.array(
                [
                    [(f >> (N - K - 1 - i)) & 1 for i in range(N - K)]
                    for f in range(1 << (N - K))
                ],
                dtype=np.uint8,
            )
            x = systematic_encode_batch(
                spec, msgs[:, None, :], frzs[None, :, :]
            )
            msg_grid = np.broadcast_to(msgs[:, None, :], x.shape[:-1] + (K,))
            frz_grid = np.broadcast_to(frzs[None, :, :], x.shape[:-1] + (N - K,))
            _check_pair(spec, x, msg_grid, frz_grid)


def test_randomized_round_trip(rng):
    for _ in range(40):
        n = int(rng.integers(1, 11))
        spec = random_spec(rng, n)
        K = len(spec.unfrozen)
        msg = rng.integers(0, 2, K, dtype=np.uint8)
        frz = rng.integers(0, 2, (1 << n) - K, dtype=np.uint8)
        x = systematic_encode_batch(spec, msg, frz)
        assert np.array_equal(x[list(spec.systematic_unfrozen_sorted)], msg)
        assert np.array_equal(
            polar_transform(x)[list(spec.frozen_sorted)], frz
        )


def test_agrees_with_generic_linear_solver(rng):
    """Solve the same constraint system with plain GF(2) elimination: the
    unknowns are x at the non-systematic positions, the equations pin the
    transform at the frozen indices."""
    for _ in range(20):
        n = int(rng.integers(1, 5))
        N = 1 << n
        spec = random_spec(rng, n, frozen_count=int(rng.integers(1, N)))
        K = len(spec.unfrozen)
        msg = rng.integers(0, 2, K, dtype=np.uint8)
        frz = rng.integers(0, 2, N - K, dtype=np.uint8)
        x = systematic_encode_batch(spec, msg, frz)

        G = transform_matrix(n)
        known = list(spec.systematic_unfrozen_sorted)
        unknown = sorted(set(range(N)) - set(known))
        rows = list(spec.frozen_sorted)
        A = G[np.ix_(unknown, rows)].T
        partial = np.zeros(N, dtype=np.uint8)
        partial[known] = msg
        b = frz ^ ((partial @ G) % 2)[rows]
        sol = gf2.solve(A, b)
        expect = partial.copy()
        expect[unknown] = sol
        assert np.array_equal(x, expect)


def test_end_to_end_systematic_property(rng):
    for _ in range(20):
        n = int(rng.integers(1, 9))
        spec = random_spec(rng, n)
        K = len(spec.unfrozen)
        msg = rng.integers(0, 2, K, dtype=np.uint8)
        frz = rng.integers(0, 2, (1 << n) - K, dtype=np.uint8)
        x = systematic_encode_batch(spec, msg, frz)
        res = sc_decode(spec, 1.0 - 2.0 * x.astype(float), frz)
        assert np.array_equal(
            res.x_hat[list(spec.systematic_unfrozen_sorted)], msg
        )


def test_cover_mismatch_errors():
    spec = CodeSpec(n=2, frozen=frozenset({0}))
    with pytest.raises(ValueError):
        systematic_encode(spec, {0: 1}, {0: 0})  # wrong message positions
    with pytest.raises(ValueError):
        systematic_encode(
            spec, {p: 0 for p in spec.systematic_unfrozen}, {1: 0}
        )
    with pytest.raises(ValueError):
        systematic_encode_batch(spec, np.zeros(2, dtype=np.uint8), [0])
