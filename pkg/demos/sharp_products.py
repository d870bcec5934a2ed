"""Product surfaces that attain the lower slope bound, with their certificates.

Run with ``python3 demos/sharp_products.py``.
"""

from __future__ import annotations

from cyclic_slope.bounds import lower_bound_certificate
from cyclic_slope.core import genus_hypothesis_holds, lambda_lower
from cyclic_slope.examples import ProductExampleParams, product_example, product_surface_data


def main() -> None:
    print(f"{'n':>2} {'h':>2} {'N':>2} {'M':>2} {'g':>4} {'K^2':>6} {'chi':>6} {'slope':>8} {'lambda':>8}  certificate")
    for n, h, N, M in [(2, 1, 3, 4), (3, 1, 2, 2), (3, 2, 1, 2), (3, 2, 1, 6), (4, 3, 2, 5), (5, 2, 1, 4)]:
        p = ProductExampleParams(n, h, N, M)
        ex = product_example(p)
        cert = lower_bound_certificate(product_surface_data(p))
        note = "equality" if cert.equality["observed"] else "strict"
        if cert.failing:
            note += f", hypotheses failing: {', '.join(cert.failing)}"
        print(f"{n:>2} {h:>2} {N:>2} {M:>2} {ex.g:>4} {str(ex.Kf2):>6} {str(ex.chif):>6} "
              f"{str(ex.slope):>8} {str(lambda_lower(ex.g, h, n)):>8}  {note}")

    # one extra blow-up at a triple point of the branch curve moves off the bound
    p = ProductExampleParams(3, 2, 1, 6)
    cert = lower_bound_certificate(product_surface_data(p), bl=[3])
    q = cert.quantities
    print(f"\nwith one blow-up (n=3, m=3): K^2={q['Kf2']} chi={q['chif']} gap={q['gap']} verdict={cert.verdict}")
    print("genus hypothesis holds:", genus_hypothesis_holds(p.g, p.h, p.n))
    for s in cert.chain:
        print(f"  {s.name:16} {str(s.lhs):>8} {s.relation} {s.rhs}")


if __name__ == "__main__":
    main()
