"""Smoke test for the `floorsum` extension module.

Build first with `pip install --no-build-isolation -e crates/python`, then run
`python3 python/smoke_test.py`.
"""

import json
from fractions import Fraction

import floorsum


def check(name, cond):
    print(f"{'PASS' if cond else 'FAIL'} {name}")
    return cond


def main():
    ok = True
    bourgain = floorsum.ExponentPair.from_seed("bourgain")

    ok &= check("lambda exponent 97/203", floorsum.theorem_exponent("lambda", bourgain) == "97/203")
    ok &= check("tau exponent 19/40", floorsum.theorem_exponent("tau", bourgain) == "19/40")
    ok &= check("A(bourgain)", (bourgain.a().k, bourgain.a().l) == ("13/194", "76/97"))
    ok &= check("BA(bourgain)", (bourgain.apply_word("BA").k, bourgain.apply_word("BA").l) == ("55/194", "55/97"))
    ok &= check("B is an involution", bourgain.b().b() == bourgain)

    for r in (4, 5, 6):
        e = Fraction(floorsum.theorem_exponent(f"tau:{r}", floorsum.heath_brown_pair(2 * r - 1)))
        ok &= check(f"tau_{r} closed form", e == Fraction(1, 2) - Fraction(1, 2 * (4 * r**3 - r - 1)))

    infeasible = floorsum.ExponentPair("1/2", "1/2")
    ok &= check("infeasible pair gives None", floorsum.theorem_exponent("lambda", infeasible) is None)

    problem = {"free": "N", "terms": [{"N": "1"}, {"x": "1", "N": "-1"}]}
    ok &= check("balance", floorsum.balance(json.dumps(problem))["nu_star"] == "1/2")

    for kind in ("tau", "mu", "mu2", "2omega", "omega"):
        ok &= check(f"floor_sum {kind} fast == naive", floorsum.floor_sum(kind, 10**5) == floorsum.floor_sum(kind, 10**5, "naive"))
    lam = floorsum.floor_sum("lambda", 10**4)
    ok &= check("lambda sum is a float", isinstance(lam, float))

    ok &= check("sieve mu", floorsum.sieve("mu", 1, 6) == [1, -1, -1, 0, -1, 1])
    one = floorsum.main_term_constant("one", 1000)
    ok &= check("C_1 telescopes to 1", abs(one["completed"] - 1.0) < 1e-12)

    ok &= check("Vaaler bound H=10", floorsum.verify_pointwise_bound(10) <= 1e-9)
    suite = floorsum.random_suite("vaughan-mu", trials=5, seed=3)
    ok &= check("Vaughan mu identity", suite["max_relative"] <= 1e-9)

    s = floorsum.exp_sum("one", 10, 20, 0.0)
    ok &= check("exp_sum zero phase", s == complex(10, 0))
    rep = floorsum.check_bound("lambda", 1e6, 3981)
    ok &= check("check_bound report", rep["claimed"] > 0 and rep["ratio"] >= 0)

    try:
        floorsum.ExponentPair("0.1", "1/2")
        ok &= check("decimal rational rejected", False)
    except floorsum.FloorsumError:
        ok &= check("decimal rational rejected", True)

    print("smoke test", "passed" if ok else "FAILED")
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
