import numpy as np
import pytest

from polarsym import (
    CodeSpec,
    DecoderMemory,
    genie_error_profile,
    polar_transform,
    sc_decode,
    update_theta,
    update_u,
)
from polarsym.oracle import JointTable, brute_conditional_theta
from polarsym.sc_decoder import sc_decode_noiseless_check

from conftest import random_frozen_values, random_spec


@pytest.mark.parametrize("n", range(1, 11))
def test_memory_cell_counts(n):
    mem = DecoderMemory(n)
    N = 1 << n
    assert mem.theta_cell_count == 2 * N - 1
    assert mem.u_cell_count == 4 * N - 2


def test_memory_validation():
    with pytest.raises(ValueError):
        DecoderMemory(0)


def test_update_theta_level_one_check_and_bit():
    mem = DecoderMemory(1)
    mem.init_priors([0.5, 0.5])
    update_theta(mem, 1, 0)
    assert mem.theta_at(1, 0) == pytest.approx(0.25)
    # decide u0 = 0 and refresh for the bit step
    mem.set_u(1, 0, 0, 0)
    update_theta(mem, 1, 1)
    assert mem.theta_at(1, 0) == pytest.approx(0.8)


def test_update_u_level_one_pair():
    mem = DecoderMemory(1)
    mem.set_u(1, 0, 0, 1)
    mem.set_u(1, 0, 1, 1)
    update_u(mem, 1, 0)
    assert mem.u_at(0, 0, 0) == 0
    assert mem.u_at(0, 1, 0) == 1


def test_all_frozen_decode_is_the_transform():
    # with everything frozen the decode just evaluates x = u * G
    spec = CodeSpec(n=2, frozen=frozenset(range(4)))
    res = sc_decode(spec, np.zeros(4), [1, 1, 0, 0])
    assert list(res.x_hat) == [0, 0, 1, 0]


def test_sc_decode_n1_examples():
    spec = CodeSpec(n=1, frozen=frozenset({0, 1}))
    res = sc_decode(spec, [0.3, -0.4], {0: 1, 1: 1})
    assert list(res.x_hat) == [0, 1]

    spec = CodeSpec(n=1, frozen=frozenset({0}))
    res = sc_decode(spec, [0.8, 0.8], {0: 0})
    assert res.u_hat[1] == 0
    assert list(res.x_hat) == [0, 0]

    # erasure tie decodes to 0 deterministically
    res = sc_decode(
        spec=CodeSpec(n=1, frozen=frozenset({1})),
        priors=np.array([1, 0], dtype=np.int8),
        frozen_values={1: 0},
        ternary=True,
    )
    assert res.u_hat[0] == 0
    assert list(res.x_hat) == [0, 0]


def test_theorem_2_and_1_small(rng):
    for n in (1, 2, 3):
        N = 1 << n
        for _ in range(20):
            spec = random_spec(rng, n)
            fv = random_frozen_values(rng, spec)
            pri = rng.uniform(-1, 1, N)
            res = sc_decode(spec, pri, fv)
            table = JointTable(pri)
            for b in range(N):
                ref = brute_conditional_theta(pri, res.u_hat[:b], b, table=table)
                assert res.step_thetas[b] == pytest.approx(ref, abs=1e-10)
            assert np.array_equal(res.x_hat, polar_transform(res.u_hat))


def test_noiseless_identity(rng):
    for _ in range(30):
        n = int(rng.integers(1, 11))
        spec = random_spec(rng, n)
        x = rng.integers(0, 2, 1 << n, dtype=np.uint8)
        assert sc_decode_noiseless_check(spec, x)


def test_ternary_matches_real_on_bec(rng):
    for _ in range(50):
        n = int(rng.integers(1, 9))
        N = 1 << n
        spec = random_spec(rng, n)
        x = rng.integers(0, 2, N, dtype=np.uint8)
        u = polar_transform(x)
        fv = {b: int(u[b]) for b in spec.frozen}
        erased = rng.random(N) < 0.4
        pri = np.where(erased, 0.0, 1.0 - 2.0 * x.astype(float))
        real = sc_decode(spec, pri, fv)
        tern = sc_decode(spec, pri.astype(np.int8), fv, ternary=True)
        assert np.array_equal(real.u_hat, tern.u_hat)
        assert np.array_equal(real.x_hat, tern.x_hat)


def test_genie_profile_noiseless_is_error_free(rng):
    n = 6
    x = rng.integers(0, 2, 1 << n, dtype=np.uint8)
    pri = 1.0 - 2.0 * x.astype(float)
    errors = genie_error_profile(pri, polar_transform(x))
    assert not errors.any()


def test_sc_decode_input_validation():
    spec = CodeSpec(n=2, frozen=frozenset({0}))
    with pytest.raises(ValueError):
        sc_decode(spec, np.zeros(3), {0: 0})
    with pytest.raises(ValueError):
        sc_decode(spec, np.zeros(4), {1: 0})  # wrong frozen coverage
    with pytest.raises(ValueError):
        sc_decode(spec, np.full(4, 1.5), {0: 0})  # out-of-range priors
    with pytest.raises(ValueError):
        sc_decode(spec, np.full(4, 2, dtype=np.int8), {0: 0}, ternary=True)


def test_message_bits_view():
    spec = CodeSpec(n=2, frozen=frozenset({0, 1}))
    res = sc_decode(spec, [0.9, 0.9, -0.9, 0.9], {0: 0, 1: 0})
    assert set(res.message_bits) == {2, 3}
    assert all(res.message_bits[b] == res.u_hat[b] for b in (2, 3))
