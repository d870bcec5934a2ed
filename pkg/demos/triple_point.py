"""Walk through one singular fibre: an ordinary triple point of the branch curve of a double cover.

Run with ``python3 demos/triple_point.py``.
"""

from __future__ import annotations

from fractions import Fraction

from cyclic_slope.cli import report_format
from cyclic_slope.cluster import ClusterNode, FiberGerm, validate_germ
from cyclic_slope.core import FibrationParams
from cyclic_slope.invariants import GlobalModel, invariant_report
from cyclic_slope.resolution import euler_from_indices, euler_local, resolve_germ, vertical_ledger


def main() -> None:
    # genus 2 double covers: n = 2, branch degree r = 6
    params = FibrationParams(n=2, g=2)
    print(f"n={params.n} g={params.g} r={params.r}")

    # a triple point on the fibre, then three double points on its exceptional curve
    germ = FiberGerm(
        n=2,
        r=6,
        nodes=(
            ClusterNode(1, None, 3),
            ClusterNode(2, 1, 2),
            ClusterNode(3, 1, 2),
            ClusterNode(4, 1, 2),
        ),
    )
    print("violations:", validate_germ(germ))

    rg = resolve_germ(germ)
    print("\nindices of the fibre")
    print(report_format({k: v for k, v in rg.to_dict().items() if k != "ledger"}))

    print("\ncurves after resolution")
    for e in rg.ledger:
        tag = "branch" if e.in_branch else ""
        print(f"  curve {e.curve}: self-intersection {e.self_intersection:3d}  {tag}")

    print("\nfamilies of vertical branch curves:", vertical_ledger(rg))

    # two independent Euler numbers: the curve ledger and the index formula
    print(f"\ne_f from the ledger: {euler_local(rg)}, from the indices: {euler_from_indices(rg, 2)}")

    # put the fibre into a global model over P^1 with M = 2
    model = GlobalModel(params=params, M=Fraction(2), germs=(("p", germ),))
    print(f"\nglobal model: M={model.M}, generic alpha_0={model.generic_alpha0}")
    print(report_format(invariant_report(model).to_dict()))


if __name__ == "__main__":
    main()
