"""Compiled kernels against the pure-Python reference.

The two backends are not bit-identical (the C side may contract
multiplies and adds), so every comparison here is at relative tolerance.
"""

import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from ellsixj import backend
from ellsixj import _kernels_py as kpy

kcy = pytest.importorskip("ellsixj._kernels_cy")


def _cnum(rng, lo=0.3, hi=2.0):
    r = rng.uniform(lo, hi)
    t = rng.uniform(0, 2 * math.pi)
    return complex(r * math.cos(t), r * math.sin(t))


def _close(a, b, rtol=1e-10):
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)


def test_theta_and_pochhammer_kernels_agree():
    rng = np.random.default_rng(71)
    for _ in range(200):
        x = _cnum(rng)
        p = complex(rng.uniform(0.05, 0.5))
        nfac = int(math.ceil(math.log(1e-16) / math.log(abs(p)))) + 2
        assert _close(kpy.theta(x, p, nfac), kcy.theta(x, p, nfac))
        q = _cnum(rng, 0.3, 0.8)
        k = int(rng.integers(0, 9))
        assert _close(kpy.qpoch(x, q, k), kcy.qpoch(x, q, k))
        assert _close(kpy.epoch(x, q, p, k, nfac), kcy.epoch(x, q, p, k, nfac))


def test_series_kernels_agree():
    rng = np.random.default_rng(72)
    for _ in range(80):
        q = complex(rng.uniform(0.3, 0.6))
        n = int(rng.integers(0, 6))
        top = (_cnum(rng), _cnum(rng), q**-n)
        bottom = (_cnum(rng), _cnum(rng))
        z = _cnum(rng)
        v1 = kpy.phi_sum(top, bottom, q, z, n, 0)
        v2 = kcy.phi_sum(top, bottom, q, z, n, 0)
        assert _close(v1, v2, 1e-11)
        ftop = (_cnum(rng), complex(-n))
        v1 = kpy.f_sum(ftop, bottom, z, n)
        v2 = kcy.f_sum(ftop, bottom, z, n)
        assert _close(v1, v2, 1e-11)


def test_well_poised_kernel_agrees():
    rng = np.random.default_rng(73)
    for _ in range(60):
        q = complex(rng.uniform(0.3, 0.6))
        p = complex(rng.uniform(0.0, 0.3))
        n = int(rng.integers(1, 5))
        a = _cnum(rng)
        free = [_cnum(rng) for _ in range(5)]
        g = a**3 * q ** (n + 2) / np.prod(free)
        bs = (*free, g, q**-n)
        nfac = 60
        v1 = kpy.vwp_sum(a, bs, q, p, q, n, nfac)
        v2 = kcy.vwp_sum(a, bs, q, p, q, n, nfac)
        assert _close(v1, v2, 1e-10)


def test_error_messages_match():
    q = 0.5
    cases = [
        lambda mod: mod.phi_sum((q**-2,), (q**-1,), q, 0.3, 2, 1),
        lambda mod: mod.vwp_sum(1.0 + 0j, (0.7, q**-1), q, 0j, q, 1, 40),
        lambda mod: mod.vwp_sum(0.9 + 0j, (0.0j, q**-1), q, 0j, q, 1, 40),
    ]
    for call in cases:
        msgs = []
        for mod in (kpy, kcy):
            with pytest.raises(ZeroDivisionError) as exc:
                call(mod)
            msgs.append(str(exc.value))
        assert msgs[0] == msgs[1]
    with pytest.raises(ZeroDivisionError) as exc:
        kcy.phi_sum((q**-2,), (q**-1,), q, 0.3, 2, 1)
    assert "denominator Pochhammer factor vanishes at term 2" == str(exc.value)


def test_backend_selection_env_switch():
    code = (
        "from ellsixj.backend import BACKEND; print(BACKEND)"
    )
    env = dict(os.environ)
    env["SIXJ_PURE_PYTHON"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"
    env.pop("SIXJ_PURE_PYTHON")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "cython"
    assert backend.backend_name() in ("python", "cython")


def test_pure_python_backend_reproduces_a_matrix():
    # end to end: the same CLI invocation under both backends agrees to
    # well below the verification tolerances
    args = [
        "-m", "ellsixj.cli", "sixj", "--level", "elliptic",
        "--a", "1.2,0.3", "--b", "0.8,-0.2", "--c", "1.1,0.4",
        "--d", "0.7,0.2", "--N", "3", "--q", "0.45", "--p", "0.1",
    ]
    env = dict(os.environ)
    env.pop("SIXJ_PURE_PYTHON", None)
    fast = subprocess.run(
        [sys.executable, *args], env=env, capture_output=True, text=True
    )
    env["SIXJ_PURE_PYTHON"] = "1"
    slow = subprocess.run(
        [sys.executable, *args], env=env, capture_output=True, text=True
    )
    assert fast.returncode == slow.returncode == 0
    A = json.loads(fast.stdout)["entries"]
    B = json.loads(slow.stdout)["entries"]
    for ra, rb in zip(A, B):
        for va, vb in zip(ra, rb):
            za, zb = complex(*va), complex(*vb)
            assert abs(za - zb) <= 1e-10 * max(abs(za), abs(zb), 1e-300)
