"""Smoke test for the altchain_py extension module."""

import math
from pathlib import Path

import altchain_py as ac

A = 0.01
REFERENCE = Path(__file__).resolve().parents[2] / "core" / "data" / "reference"


def closed_form(a, p, j):
    s = math.sin(math.pi * j / p)
    r = math.sqrt((1 + a) ** 2 - 4 * a * s * s)
    return 1 + a - r, 1 + a + r


def main():
    chain = ac.Chain(3, A)
    assert len(chain) == 6
    w = chain.linear_spectrum()
    assert abs(w[0] - 2 * (1 + A)) < 1e-12 and abs(w[-1]) < 1e-12

    for p, j in [(3, 1), (9, 3), (47, 20)]:
        got = ac.pair_eigenvalues(A, p, j)
        assert all(abs(g - e) < 1e-12 for g, e in zip(got, closed_form(A, p, j)))

    qh = ac.QuasiHarmonic(9, A)
    an = qh.analyze()
    assert an["jan_agrees"] and [len(k) for k in an["invariant"]] == [2]
    sub = qh.extract(an["invariant"][0])
    assert sub.fit(ac.QuasiHarmonic(3, A))["residual"] < 1e-8

    fit = ac.QuasiHarmonic(3, A).fit(ac.QuasiHarmonic.load(str(REFERENCE / "p3.txt")))
    assert fit["residual"] < 1e-6

    red = ac.ReducedChain(3, A)
    assert len(red.equilibria()) == 4

    tr = ac.QuasiHarmonic(3, A).integrate([0.0, 0.2], [0.0, 0.0], 200.0)
    assert tr.completed and len(tr) == 201 and tr.energy_drift < 1e-8
    assert min(tr.series(0)) < -0.05

    try:
        ac.ReducedChain(4, A)
    except ValueError:
        pass
    else:
        raise AssertionError("even p accepted")

    ok, report = ac.run_sweep(15)
    assert ok and "15" in report
    print("altchain_py smoke test passed")


if __name__ == "__main__":
    main()
