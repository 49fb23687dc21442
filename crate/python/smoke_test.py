#!/usr/bin/env python3
"""Smoke test for the permarith_py extension module.

Builds the cdylib if needed, loads it from the cargo target directory,
and exercises the main types and operations end to end.

Usage: python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from fractions import Fraction
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    lib = REPO / "target" / "release" / "libpermarith_py.so"
    if not lib.exists():
        subprocess.run(
            ["cargo", "build", "--release", "-p", "permarith-py"],
            cwd=REPO,
            check=True,
        )
    ext = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    stage = Path(tempfile.mkdtemp(prefix="permarith_py_"))
    shutil.copy2(lib, stage / f"permarith_py{ext}")
    sys.path.insert(0, str(stage))
    import permarith_py

    return permarith_py


def main():
    pa = load_module()
    checks = 0

    def check(cond, what):
        nonlocal checks
        if not cond:
            print(f"FAIL: {what}")
            sys.exit(1)
        checks += 1
        print(f"ok   {what}")

    # exact counts
    r = pa.count_permutations("lcm", 12)
    check(r.count == 12192 and r.nth_root == 2.1903, "count lcm(12) = 12192, root 2.1903")
    r = pa.count_permutations("div", 6)
    check(r.count == 36, "count div(6) = 36")
    r = pa.count_permutations("anticoprime", 4)
    check(r.count == 2, "count anticoprime(4) = 2")

    rows = pa.table1(8)
    check(rows[5] == (6, 36, 1.8171, 56, 1.9560), "table1 row n=6")

    # predicates
    check(not pa.is_compatible("lcm", 12, 18, 30), "lcm(12,18) > 30")
    check(pa.triple_decomposition(12, 18, 36) == (2, 6, 3), "triple decomposition (12,18,36)")
    check(pa.triple_decomposition(12, 18, 30) is None, "no triple beyond n")

    # the number-theory table and bound constants
    t = pa.SpfTable()
    check(t.divisors(12) == [1, 2, 3, 4, 6, 12], "divisors(12)")
    check(t.tau(480) == 24, "tau(480) = 24")
    check(Fraction(*t.alpha(12)) == Fraction(3, 7), "alpha(12) = 3/7")
    check(t.p_lcm(12, 12) == 720, "p(12,12) = 6!")
    check(t.p_div(4, 4) == 6, "p_d(4,4) = 6")

    lb = t.lower_bound_report(4)
    check(
        abs(lb.c_alpha - 0.354987) < 5e-7 and lb.exp_c_alpha == 1.4261,
        "lower bound row b=4",
    )

    check(abs(pa.ub_yseq_const(30) - 0.1554) < 5e-5, "series constant yseq(30)")
    ub = t.upper_bound_report(30)
    check(2.6070 <= ub.total_analytic <= 2.6075, "analytic total at k=30")

    rc = t.ratio_constants()
    check(rc.lcm6 == 56 and rc.div6 == 36 and rc.c > 1.00057, "ratio constants")

    # constructions
    fam = t.build_family(2, 8)
    check(fam.blocks_nontrivial == 3 and fam.family_count == 8, "block family b=2, n=8")
    members = t.emit_members(2, 8, 8)
    check(len(members) == 8 and sorted(members[0]) == list(range(1, 9)), "emitted members")
    for m in members:
        for x, y in enumerate(m, start=1):
            assert pa.is_compatible("lcm", x, y, 8), (x, y)
    checks += 1
    print("ok   all members lie in S_lcm(8)")

    # a permanent straight from Python
    ident = [[1 if i == j else 0 for j in range(5)] for i in range(5)]
    check(pa.permanent_of(ident) == 1, "permanent of identity")
    check(pa.permanent_of([[1] * 12 for _ in range(12)]) == math.factorial(12), "permanent of ones(12)")

    print(f"\nsmoke test passed ({checks} checks)")


if __name__ == "__main__":
    main()
