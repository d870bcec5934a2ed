"""Upper slope bound for n >= 4: constants, anchor values and a sweep over enumerated fibres.

Run with ``python3 demos/upper_bound.py``.
"""

from __future__ import annotations

from cyclic_slope.bounds import upper_bound_certificate
from cyclic_slope.core import FibrationParams, lambda_lower, lambda_upper, slope_constants
from cyclic_slope.examples import enumerate_germs
from cyclic_slope.verify import default_budget, models_for


def main() -> None:
    print("lower and upper bounds for h = 0")
    for n, g in [(4, 9), (4, 15), (4, 21), (5, 16), (6, 25)]:
        sc = slope_constants(g, n)
        print(f"  n={n} g={g:>3}: {str(lambda_lower(g, 0, n)):>8} <= slope <= {str(lambda_upper(g, n)):>8}"
              f"   A={sc.A} B={sc.B}")

    n, r = 4, 12
    g = FibrationParams.from_r(n, r).g
    germs = list(enumerate_germs(n, r, default_budget(r)))
    worst = None
    for m in models_for(n, r, germs):
        cert = upper_bound_certificate(m)
        assert cert.verdict is not False and not cert.failing
        if cert.verdict and (worst is None or cert.quantities["slope"] > worst[0]):
            worst = (cert.quantities["slope"], m)
    print(f"\nn={n} r={r} (g={g}): {len(germs)} germs, largest slope {worst[0]} <= {lambda_upper(g, n)}")
    print("germs in that model:", [gm.to_dict()["nodes"] for _, gm in worst[1].germs])


if __name__ == "__main__":
    main()
