#!/usr/bin/env python3
"""Smoke test for the triband_py extension module.

Builds nothing itself: run `cargo build -p triband-py` (or --release)
first, then `python3 python/smoke_test.py`.  The script locates the
cdylib in the workspace target directory and exposes it as an
importable module.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path


def locate_module() -> Path:
    root = Path(__file__).resolve().parents[1]
    candidates = [
        root / "target" / "release" / "libtriband_py.so",
        root / "target" / "debug" / "libtriband_py.so",
        root / "target" / "release" / "libtriband_py.dylib",
        root / "target" / "debug" / "libtriband_py.dylib",
    ]
    for c in candidates:
        if c.exists():
            return c
    sys.exit("build the extension first: cargo build -p triband-py")


def main() -> None:
    lib = locate_module()
    stage = Path(tempfile.mkdtemp(prefix="triband-py-"))
    shutil.copy(lib, stage / "triband_py.so")
    sys.path.insert(0, str(stage))
    import triband_py as tb

    # elliptic kernel: the classical value 1/k(i) = sqrt(2)
    md = tb.EllipticModulus(1.0)
    assert abs(md.kinv - math.sqrt(2.0)) < 1e-13, md.kinv
    u = tb.inverse_x(0.5, 0.25, md)
    back = tb.x_map(u[0], u[1], md)
    assert abs(back[0] - 0.5) < 1e-12 and abs(back[1] - 0.25) < 1e-12

    # theta normalization identity K = (pi/2) theta3^2
    th3 = tb.theta(3, 0.0, 0.0, md.q)[0]
    assert abs(md.big_k - math.pi / 2 * th3 * th3) < 1e-13

    # Zolotarev fraction: n = 1 is the identity, corners are fixed
    z1 = tb.ZolotarevFraction(1, 0.8)
    assert abs(z1.eval(0.37) - 0.37) < 1e-10
    z3 = tb.ZolotarevFraction(3, 0.5)
    assert abs(z3.eval(1.0) - 1.0) < 1e-10
    scale, mu = z3.rescaled_solution()
    (em, ep) = z3.bands()
    worst = 0.0
    for i in range(2001):
        x = ep[0] + (ep[1] - ep[0]) * i / 2000
        worst = max(worst, abs(scale * z3.eval(x) - 1.0))
    assert abs(worst - mu) < 1e-7, (worst, mu)

    # a genus-2 solution end to end: construct, verify, oracle-check
    sol, bands = tb.forward_construct("Genus2Stiefel", 0.6, 3, 1, h=0.2, v=1.5)
    assert sol.family == "Genus2Stiefel" and sol.n == 3
    report = tb.verify_solution(sol, bands, grid_density=128)
    assert report["alternation_count"] == 2 * 3 + 2, report
    assert report["sigma"] == (1, 0, 0)
    assert report["extremality"] == 2
    assert report["theorem1_ok"]
    oracle = tb.oracle_compare(sol, bands, 3)
    assert oracle["local_opt"], oracle
    assert oracle["mu_grid"] <= oracle["mu_constructed"] + 2e-3

    # inverse design recovers the family and parameters
    designed, recovered = tb.design(bands, 3, (1, 0, 0))
    assert designed.family == "Genus2Stiefel"
    assert abs(recovered["t"] - 0.6) < 1e-6, recovered
    assert abs(recovered["h"] - 0.2) < 1e-6, recovered

    print("smoke test passed")


if __name__ == "__main__":
    main()
