"""Invariants on the quotient surface W and certificates for the slope bounds.

``SurfaceClassData`` holds the intersection numbers of ``K_phi``, the
divisor ``d`` with ``R ~ n d``, and a fibre ``Gamma`` on W.  The lower-bound
certificate re-derives ``K_f^2 - lambda chi_f`` step by step and logs every
inequality it relies on, so a failing hypothesis is visible by name.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .core import derive_r, format_rational, genus_hypothesis_holds, lambda_lower, slope_constants
from .errors import InvalidInput, ModNViolation, UnsupportedOrder
from .invariants import GlobalModel, relative_invariants
from .resolution import ResolvedGerm

F = Fraction


@dataclass(frozen=True)
class SurfaceClassData:
    n: int
    h: int
    g: int
    Kphi2: Fraction
    KphiD: Fraction
    D2: Fraction
    chiPhi: Fraction
    DGamma: Fraction
    KphiGamma: Fraction

    def __post_init__(self):
        for name in ("Kphi2", "KphiD", "D2", "chiPhi", "DGamma", "KphiGamma"):
            object.__setattr__(self, name, F(getattr(self, name)))
        r = derive_r(self.g, self.h, self.n)
        if self.DGamma != F(r, self.n):
            raise InvalidInput(f"dGamma={format_rational(self.DGamma)} but r/n={format_rational(F(r, self.n))}")
        if self.KphiGamma != 2 * (self.h - 1):
            raise InvalidInput(f"KGamma={format_rational(self.KphiGamma)} but 2(h-1)={2 * (self.h - 1)}")

    @property
    def r(self) -> int:
        return derive_r(self.g, self.h, self.n)

    @classmethod
    def ruled(cls, n: int, g: int, M) -> "SurfaceClassData":
        """P^1-bundle data with ``R ~ -(r/2) K + M Gamma``."""
        r = derive_r(g, 0, n)
        M = F(M)
        return cls(n=n, h=0, g=g, Kphi2=F(0), KphiD=-2 * M / n, D2=2 * r * M / n**2, chiPhi=F(0),
                   DGamma=F(r, n), KphiGamma=F(-2))

    def to_dict(self) -> dict:
        f = format_rational
        return {
            "n": self.n, "h": self.h, "g": self.g,
            "Kphi2": f(self.Kphi2), "KphiD": f(self.KphiD), "D2": f(self.D2),
            "chiPhi": f(self.chiPhi), "DGamma": f(self.DGamma), "KphiGamma": f(self.KphiGamma),
        }


def wlevel_invariants(d: SurfaceClassData) -> tuple[Fraction, Fraction]:
    """``(omega^2, chi)`` of the cyclic cover of W before resolving the branch curve."""
    n = d.n
    omega2 = n * (d.Kphi2 + 2 * (n - 1) * d.KphiD + (n - 1) ** 2 * d.D2)
    chi = n * d.chiPhi + F(n * (n - 1), 4) * d.KphiD + F(n * (n - 1) * (2 * n - 1), 12) * d.D2
    return omega2, chi


def _ds(bl: Iterable[int], n: int) -> list[int]:
    out = []
    for m in bl:
        if m < 0 or m % n not in (0, 1):
            raise ModNViolation(f"blow-up multiplicity {m} is neither in {n}Z nor {n}Z+1")
        out.append(m // n)
    return out


def blowup_corrections(bl: Iterable[int], n: int) -> tuple[Fraction, Fraction]:
    """Drops ``(omega^2 - K^2, chi' - chi)`` caused by blowing up points of the given multiplicities."""
    ds = _ds(bl, n)
    d_omega = F(n * sum(((n - 1) * d - 1) ** 2 for d in ds))
    d_chi = F(n * (n - 1), 12) * sum(d * ((2 * n - 1) * d - 3) for d in ds)
    return d_omega, d_chi


@dataclass
class Step:
    name: str
    lhs: Fraction
    relation: str
    rhs: Fraction

    @property
    def ok(self) -> bool:
        if self.relation == "==":
            return self.lhs == self.rhs
        return self.lhs >= self.rhs

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": format_rational(self.lhs),
            "relation": self.relation,
            "rhs": format_rational(self.rhs),
            "ok": self.ok,
        }


@dataclass
class Certificate:
    kind: str
    verdict: bool | None
    hypotheses: dict[str, bool] = field(default_factory=dict)
    quantities: dict[str, Fraction] = field(default_factory=dict)
    chain: list[Step] = field(default_factory=list)
    equality: dict[str, bool] = field(default_factory=dict)
    failing: list[str] = field(default_factory=list)
    per_fiber: list[dict] = field(default_factory=list)

    @property
    def hypotheses_ok(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def chain_ok(self) -> bool:
        return all(s.ok for s in self.chain)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": "NotApplicable" if self.verdict is None else self.verdict,
            "hypotheses": dict(self.hypotheses),
            "hypotheses_ok": self.hypotheses_ok,
            "failing": list(self.failing),
            "quantities": {k: format_rational(v) for k, v in self.quantities.items()},
            "chain": [s.to_dict() for s in self.chain],
            "chain_ok": self.chain_ok,
            "equality": dict(self.equality),
            "per_fiber": self.per_fiber,
        }


def hodge_determinant(d: SurfaceClassData) -> Fraction:
    """Determinant of the intersection matrix of ``{K_phi, d, Gamma}``."""
    return (
        2 * d.KphiD * d.DGamma * d.KphiGamma
        - d.D2 * d.KphiGamma**2
        - d.DGamma**2 * d.Kphi2
    )


def lower_bound_certificate(d: SurfaceClassData, bl: Iterable[int] = (), eps: int = 0) -> Certificate:
    """Check ``K_f^2 >= lambda_{g,h,n} chi_f`` for ``h >= 1`` and log the argument.

    Hypotheses are reported, never raised: ``h>=1``, the genus bound, the
    slope inequality and Arakelov positivity for ``phi``, the Hodge-index
    determinant, the elliptic canonical-bundle bound when ``h = 1``, and that
    every blow-up centre is a genuine singular point (``[m/n] >= 1``).
    """
    n, h, g = d.n, d.h, d.g
    bl = list(bl)
    ds = _ds(bl, n)
    N = len(bl)
    lam = lambda_lower(g, h, n)
    den = 2 * (2 * n - 1) * (g - 1) - n * (n + 1) * (h - 1)
    hodge = hodge_determinant(d)
    hyp = {
        "h>=1": h >= 1,
        "genus_bound": genus_hypothesis_holds(g, h, n) if h >= 1 else False,
        "arakelov": d.Kphi2 >= 0,
        "slope_inequality": h >= 1 and d.Kphi2 * h >= 4 * (h - 1) * d.chiPhi,
        "hodge_index": hodge >= 0,
        "singular_centres": all(x >= 1 for x in ds),
        "eps_nonnegative": eps >= 0,
    }
    if h == 1:
        hyp["elliptic_canonical_bundle"] = d.Kphi2 == 0 and d.KphiD >= d.chiPhi * d.DGamma
    omega2, chi_p = wlevel_invariants(d)
    d_om, d_chi = blowup_corrections(bl, n)
    K2 = omega2 - d_om + eps
    chi = chi_p - d_chi
    gap_w = omega2 - lam * chi_p
    c8 = F(n * (n - 1), 4) * (8 - lam)
    c12 = F(n * (n - 1), 12) * (12 * (n - 1) - (2 * n - 1) * lam)
    q = {
        "lambda": lam,
        "omega_fprime2": omega2,
        "chi_fprime": chi_p,
        "d_omega2": d_om,
        "d_chi": d_chi,
        "Kf2": K2,
        "chif": chi,
        "hodge_determinant": hodge,
        "W_gap": gap_w,
        "gap": K2 - lam * chi,
    }
    chain = [
        Step("comp", gap_w, "==", n * (d.Kphi2 - lam * d.chiPhi) + c8 * d.KphiD + c12 * d.D2),
        Step("comp1", c8, "==", F(n * (n - 1) * (n + 1) * 2 * (g - 1 - n * (h - 1)), den)),
        Step("comp2", c12, "==", F(n * (n - 1) * (n + 1) * (-n * (n - 1) * (h - 1)), den)),
    ]
    if h == 1:
        chain.append(Step("h1_gap", gap_w, "==", F(n * (n - 1), 2 * n - 1) * ((n + 1) * d.KphiD - 12 * d.chiPhi)))
        chain.append(
            Step(
                "h1_canonical",
                F(n * (n - 1), 2 * n - 1) * ((n + 1) * d.KphiD - 12 * d.chiPhi),
                ">=",
                F(2, 2 * n - 1) * ((n + 1) * g - (2 * n - 1) * (3 * n - 1)) * d.chiPhi,
            )
        )
        chain.append(Step("h1_genus", F(2, 2 * n - 1) * ((n + 1) * g - (2 * n - 1) * (3 * n - 1)) * d.chiPhi, ">=", F(0)))
    elif h >= 2:
        rhs = F((g - 1) * ((n + 1) * g - (2 * h * n + n - 1) * (2 * n - 1)), (h - 1) * den) * d.Kphi2
        chain.append(Step("esti", gap_w, ">=", rhs))
        chain.append(Step("rhsesti", rhs, ">=", F(0)))
    blow = (
        F(n**2 * (n - 1) ** 2 * (n + 1) * (h - 1), den) * sum(x * x for x in ds)
        + F(2 * n * (n - 1) * (n + 1) * (g - 1 - n * (h - 1)), den) * sum(ds)
        - n * N
    )
    chain.append(Step("comp3", K2 - lam * chi, "==", gap_w + blow + eps))
    floor = F(n**2 * (n - 2) * N, den) * ((n + 1) * (n - 2) * (h - 1) + 2 * (g - 1))
    if h >= 1:
        chain.append(Step("blowup_monotone", blow, ">=", floor))
    chain.append(Step("blowup_floor", floor, ">=", F(0)))
    chain.append(Step("W_level", gap_w, ">=", F(0)))
    verdict = K2 >= lam * chi
    negligible = N == 0 or (n == 2 and all(x == 1 for x in ds))
    equality = {
        "branch_nonsingular": negligible,
        "phi_slope_equality": h >= 1 and d.Kphi2 * h == 4 * (h - 1) * d.chiPhi,
        "matrix_singular": hodge == 0,
        "observed": K2 == lam * chi,
    }
    cert = Certificate(kind="lower", verdict=verdict, hypotheses=hyp, quantities=q, chain=chain, equality=equality)
    cert.failing = [k for k, v in hyp.items() if not v] + [s.name for s in chain if not s.ok]
    return cert


def upper_bound_certificate(model: GlobalModel) -> Certificate:
    """Check ``K_f^2 <= (12 - mu) chi_f`` for an h = 0 model with ``n >= 4``.

    Logs the global bound ``(12 - mu) chi - K^2 >= A alpha0 + B sum alpha -
    (2A + 1) eps`` and, per listed fibre, the lower estimate of its share in
    terms of ``j_a``, ``eta`` and ``kappa`` with each coefficient's sign.
    """
    n = model.n
    if n < 4:
        raise UnsupportedOrder(f"no upper bound is available for n={n}; need n >= 4")
    sc = slope_constants(model.g, n)
    A, B, mu = sc.A, sc.B, sc.mu
    K2, chi, e = relative_invariants(model)
    idx = model.totals()
    lam_up = sc.lambda_
    gap = (12 - mu) * chi - K2
    rhs = A * idx.alpha0 + B * idx.alpha_sum - (2 * A + 1) * idx.eps
    q = {
        "mu": mu, "mu_prime": sc.mu_prime, "A": A, "B": B, "lambda_upper": lam_up,
        "Kf2": K2, "chif": chi, "ef": e, "gap": gap, "index_bound": rhs,
    }
    coeffs = sc.coefficient_ledger()
    chain = [
        Step("gap_is_e_minus_mu_chi", gap, "==", e - mu * chi),
        Step("gap_vs_indices", gap, ">=", rhs),
        Step("A_positive", A, ">=", F(0)),
        Step("B_nonnegative", B, ">=", F(0)),
        Step("generic_fibres", A * model.generic_alpha0, ">=", F(0)),
    ]
    if sc.large_r:
        chain.append(Step("-2A+nB-1", coeffs["-2A+nB-1"], "==", F(0)))
        chain.append(Step("(n-2)A-2B", coeffs["(n-2)A-2B"], ">=", F(0)))
        chain.append(Step("2(n-2)A-B", coeffs["2(n-2)A-B"], ">=", F(0)))
    else:
        chain.append(Step("B_zero", B, "==", F(0)))
    per_fiber = []
    for (label, _), rg in zip(model.germs, model.resolved):
        per_fiber.append(_fiber_estimate(label, rg, sc))
        for s in per_fiber[-1]["steps"]:
            chain.append(s)
    for pf in per_fiber:
        pf["steps"] = [s.to_dict() for s in pf["steps"]]
    verdict = None if chi == 0 else K2 <= lam_up * chi
    if chi != 0:
        q["slope"] = K2 / chi
    cert = Certificate(kind="upper", verdict=verdict, quantities=q, chain=chain, per_fiber=per_fiber)
    cert.hypotheses = {"h=0": True, "n>=4": True}
    cert.failing = [s.name for s in chain if not s.ok]
    return cert


def _fiber_estimate(label: str, rg: ResolvedGerm, sc) -> dict:
    n, A, B = sc.n, sc.A, sc.B
    share = A * rg.alpha0 + B * rg.alpha_sum - (2 * A + 1) * rg.eps
    jt = rg.j_total
    steps = []
    if sc.large_r:
        est = (
            sum((-2 * A + a * n * B) * v for a, v in rg.j.items() if a >= 2)
            + (-2 * A + n * B - 1) * rg.j.get(1, 0)
            + ((n - 2) * A - 2 * B) * (jt - rg.eta)
            + (2 * (n - 2) * A - B) * rg.kappa
        )
        steps.append(Step(f"{label}:share>=estimate", share, ">=", est))
        for a in sorted(rg.j):
            if a >= 2:
                steps.append(Step(f"{label}:-2A+{a}nB", -2 * A + a * n * B, ">=", F(0)))
        steps.append(Step(f"{label}:j-eta", F(jt - rg.eta), ">=", F(0)))
        steps.append(Step(f"{label}:estimate", est, ">=", F(0)))
    else:
        steps.append(Step(f"{label}:j=0", F(jt), "==", F(0)))
        est = A * rg.alpha0_plus
        steps.append(Step(f"{label}:share>=A*alpha0+", share, ">=", est))
        steps.append(Step(f"{label}:estimate", est, ">=", F(0)))
    return {"label": label, "share": format_rational(share), "estimate": format_rational(est), "steps": steps}
