"""Kernel backend selection and numba/numpy parity."""

import importlib.util
import subprocess
import sys

import numpy as np
import pytest

from swapstable import _kernels, backend, gen_random, u_optimal
from swapstable.profile import _partner_arrays

from helpers import random_matching, make_rng

KERNELS = (
    "first_blocking",
    "blocking_mask",
    "egal_cost",
    "batch_stable",
    "count_inversions",
    "stabilizable_product",
)


def test_backend_reports_active_path():
    assert backend() in ("numba", "numpy")
    assert (backend() == "numba") == _kernels.HAS_NUMBA


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("seed", range(20))
def test_matching_kernels_agree_across_backends(seed):
    rng = make_rng(seed)
    p = gen_random(rng.randint(1, 6), rng.randint(1, 6), rng.choice([0.5, 1.0]), seed)
    for m in (u_optimal(p), random_matching(p, rng)):
        args = _partner_arrays(p, m)
        assert _kernels._first_blocking_nb(*args) == _kernels.first_blocking_np(*args)
        assert np.array_equal(
            _kernels._blocking_mask_nb(*args), _kernels.blocking_mask_np(*args)
        )
        assert _kernels._egal_cost_nb(*args) == _kernels.egal_cost_np(*args)


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not installed")
def test_batch_and_inversion_kernels_agree_across_backends():
    rng = np.random.default_rng(3)
    p = gen_random(5, 5, 1.0, seed=8)
    pus = np.empty((12, 5), dtype=np.int64)
    pws = np.empty((12, 5), dtype=np.int64)
    for t in range(12):
        perm = rng.permutation(5).astype(np.int64)
        pus[t] = perm
        pws[t, perm] = np.arange(5, dtype=np.int64)
    args = (p.rank_u, p.rank_w, p.len_u, p.len_w, pus, pws)
    assert np.array_equal(
        _kernels._batch_stable_nb(*args), _kernels.batch_stable_np(*args)
    )
    for size in (0, 1, 2, 30):
        arr = rng.integers(0, 10, size=size).astype(np.int64)
        assert _kernels._count_inversions_nb(arr) == _kernels.count_inversions_np(arr)


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("seed", range(8))
def test_stabilizable_product_agrees_across_backends(seed):
    from swapstable.oracle import _variant_rank_rows

    rng = make_rng(seed)
    p = gen_random(3, 3, 1.0, seed=seed)
    ru, cnt_u = _variant_rank_rows(p.u_lists, p.n_w, 1)
    rw, cnt_w = _variant_rank_rows(p.w_lists, p.n_u, 1)
    m = random_matching(p, rng)
    args = (ru, rw, p.len_u, p.len_w, cnt_u, cnt_w, m.pu, m.pw)
    assert _kernels._stabilizable_product_nb(*args) == _kernels.stabilizable_product_np(*args)


@pytest.mark.parametrize("flag", ["numpy", "auto"])
def test_env_flag_selects_backend(flag):
    if flag == "numpy":
        expect = "numpy"
    else:
        # what auto resolves to depends only on numba being importable,
        # not on how this parent process was configured
        expect = "numba" if importlib.util.find_spec("numba") else "numpy"
    code = "import swapstable; print(swapstable.backend())"
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"PATH": "", "SWAPSTABLE_KERNELS": flag},
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == expect


def test_env_flag_rejects_unknown_value():
    out = subprocess.run(
        [sys.executable, "-c", "import swapstable"],
        env={"PATH": "", "SWAPSTABLE_KERNELS": "gpu"},
        capture_output=True,
        text=True,
    )
    assert out.returncode != 0
    assert "SWAPSTABLE_KERNELS" in out.stderr
