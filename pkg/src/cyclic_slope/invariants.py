"""Relative invariants of a genus-g cyclic covering fibration over P^1-bundle data (h = 0).

A :class:`GlobalModel` fixes ``n``, ``g``, the class ``M`` with
``R ~ -(r/2) K + M Gamma`` and a finite list of special fibre germs.  Every
other fibre is generic: its only contribution is simple ramification of the
horizontal branch curve, collected in ``generic_alpha0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .cluster import FiberGerm
from .core import FibrationParams, format_rational, lambda_lower, parse_rational
from .errors import IdentityViolation, InconsistentModel, InvalidInput, NonHalfIntegralM
from .resolution import GermIndices, ResolvedGerm, resolve_germ


def _alpha_weight(n: int, alpha: Mapping[int, int]) -> int:
    return n * sum(k * (n * k - 1) * a for k, a in alpha.items())


def m_from_indices(n: int, r: int, alpha0: int, alpha: Mapping[int, int], eps: int) -> Fraction:
    """``M = (alpha0 + n sum k(nk-1) alpha_k - 2 eps) / (2(r-1))``; must be half-integral."""
    if r < 2:
        raise InvalidInput(f"r={r} < 2")
    M = Fraction(alpha0 + _alpha_weight(n, alpha) - 2 * eps, 2 * (r - 1))
    if M.denominator not in (1, 2):
        raise NonHalfIntegralM(f"M={format_rational(M)} is not in (1/2)Z")
    return M


@dataclass(frozen=True)
class GlobalModel:
    params: FibrationParams
    M: Fraction
    germs: tuple[tuple[str, FiberGerm], ...] = ()
    generic_alpha0: int | None = None
    resolved: tuple[ResolvedGerm, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        p = self.params
        if p.h != 0:
            raise InvalidInput(f"global models need h=0, got h={p.h}")
        M = Fraction(self.M)
        if M.denominator not in (1, 2):
            raise NonHalfIntegralM(f"M={format_rational(M)} is not in (1/2)Z")
        object.__setattr__(self, "M", M)
        germs = tuple((str(lbl), gm) for lbl, gm in self.germs)
        object.__setattr__(self, "germs", germs)
        labels = [lbl for lbl, _ in germs]
        if len(set(labels)) != len(labels):
            raise InvalidInput("fibre labels must be unique")
        r = p.r
        for lbl, gm in germs:
            if gm.n != p.n or gm.r != r:
                raise InconsistentModel(f"germ {lbl!r} has (n, r)=({gm.n}, {gm.r}), model has ({p.n}, {r})")
        if not self.resolved:
            object.__setattr__(self, "resolved", tuple(resolve_germ(gm) for _, gm in germs))
        need = self.required_generic_alpha0()
        if self.generic_alpha0 is None:
            object.__setattr__(self, "generic_alpha0", need)
        elif self.generic_alpha0 != need:
            raise InconsistentModel(
                f"generic_alpha0={self.generic_alpha0} but M={format_rational(M)} forces {need}"
            )
        if need < 0:
            raise InconsistentModel(
                f"M={format_rational(M)} is too small for the listed germs (generic alpha0 would be {need})"
            )

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def g(self) -> int:
        return self.params.g

    def required_generic_alpha0(self) -> int:
        n, r = self.n, self.r
        alpha = self.total_alpha()
        eps = sum(rg.eps for rg in self.resolved)
        listed = sum(rg.alpha0 for rg in self.resolved)
        total = 2 * (r - 1) * self.M - _alpha_weight(n, alpha) + 2 * eps
        if total.denominator != 1:
            raise NonHalfIntegralM(f"2(r-1)M={format_rational(2 * (r - 1) * self.M)} is not an integer")
        return int(total) - listed

    def total_alpha(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for rg in self.resolved:
            for k, v in rg.alpha.items():
                out[k] = out.get(k, 0) + v
        return dict(sorted(out.items()))

    def totals(self) -> GermIndices:
        return GermIndices(
            alpha0=sum(rg.alpha0 for rg in self.resolved) + self.generic_alpha0,
            alpha=self.total_alpha(),
            eps=sum(rg.eps for rg in self.resolved),
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "M": format_rational(self.M),
            "generic_alpha0": self.generic_alpha0,
            "germs": [dict(label=lbl, **gm.to_dict()) for lbl, gm in self.germs],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "GlobalModel":
        params = FibrationParams(n=int(d["n"]), g=int(d["g"]), h=int(d.get("h", 0)))
        germs = []
        for i, gd in enumerate(d.get("germs", ())):
            label = gd.get("label", f"p{i + 1}")
            germs.append((label, FiberGerm.from_dict(gd, n=params.n, r=params.r)))
        ga = d.get("generic_alpha0")
        return cls(params=params, M=parse_rational(d["M"]), germs=tuple(germs), generic_alpha0=ga)

    @classmethod
    def minimal(cls, params: FibrationParams, germs=(), extra_alpha0: int = 0) -> "GlobalModel":
        """Model with the smallest half-integral ``M`` whose generic ``alpha0`` is at least ``extra_alpha0``."""
        n, r = params.n, params.r
        resolved = tuple(resolve_germ(gm) for _, gm in germs)
        alpha: dict[int, int] = {}
        for rg in resolved:
            for k, v in rg.alpha.items():
                alpha[k] = alpha.get(k, 0) + v
        eps = sum(rg.eps for rg in resolved)
        listed = sum(rg.alpha0 for rg in resolved)
        base = listed + extra_alpha0 + _alpha_weight(n, alpha) - 2 * eps
        # 2(r-1)M must be an integer >= base with M in (1/2)Z
        step = r - 1
        twoM = -(-base // step)
        M = Fraction(twoM, 2)
        return cls(params=params, M=M, germs=tuple(germs), resolved=resolved)


def _K2(n: int, r: int, idx: GermIndices) -> Fraction:
    a0e = idx.alpha0 - 2 * idx.eps
    quad = (n + 1) * sum(k * (r - n * k) * a for k, a in idx.alpha.items())
    return (
        Fraction(n - 1, r - 1) * (Fraction((n - 1) * r - 2 * n, n) * a0e + quad)
        - n * idx.alpha_sum
        + idx.eps
    )


def _chi(n: int, r: int, idx: GermIndices) -> Fraction:
    a0e = idx.alpha0 - 2 * idx.eps
    quad = (n + 1) * sum(k * (r - n * k) * a for k, a in idx.alpha.items())
    return Fraction(n - 1, 12 * (r - 1)) * (Fraction((2 * n - 1) * r - 3 * n, n) * a0e + quad)


def euler_number(n: int, idx: GermIndices) -> int:
    return (n - 1) * idx.alpha0 + n * idx.alpha_sum - (2 * n - 1) * idx.eps


def relative_invariants(model: GlobalModel) -> tuple[Fraction, Fraction, Fraction]:
    """``(K_f^2, chi_f, e_f)`` from the global indices; Noether is checked on the way out."""
    n, r = model.n, model.r
    idx = model.totals()
    K2 = _K2(n, r, idx)
    chi = _chi(n, r, idx)
    e = Fraction(euler_number(n, idx))
    if 12 * chi != K2 + e:
        raise IdentityViolation(f"Noether fails: 12chi={12 * chi}, K^2+e={K2 + e}")
    return K2, chi, e


def horikawa_index(n: int, r: int, idx: GermIndices | ResolvedGerm) -> Fraction:
    """Nonnegative local contribution in ``K_f^2 = lambda chi_f + sum Ind``."""
    if r == n:
        # the branch curve is smooth, so every index vanishes anyway
        return Fraction(0)
    den = (2 * n - 1) * r - 3 * n
    total = Fraction(idx.eps)
    for k, a in idx.alpha.items():
        total += n * (Fraction((n + 1) * (n - 1) * (r - n * k) * k, den) - 1) * a
    return total


def slope_lambda(model: GlobalModel) -> Fraction:
    return lambda_lower(model.g, 0, model.n)


def slope_equality_check(model: GlobalModel) -> Fraction:
    """``K_f^2 - lambda chi_f - sum Ind``; zero on every consistent model."""
    K2, chi, _ = relative_invariants(model)
    ind = sum((horikawa_index(model.n, model.r, rg) for rg in model.resolved), Fraction(0))
    return K2 - slope_lambda(model) * chi - ind


def signature_coefficients(n: int, r: int) -> tuple[Fraction, Callable[[int], Fraction], Fraction]:
    c0 = Fraction(-(n - 1) * (n + 1) * r, 3 * n * (r - 1))
    ce = Fraction((n + 2) * (2 * n - 1) * r - 3 * n, 3 * n * (r - 1))

    def ck(k: int) -> Fraction:
        return Fraction((n - 1) * (n + 1) * (r * k - n * k * k), 3 * (r - 1)) - n

    return c0, ck, ce


def local_signature(n: int, r: int, idx: GermIndices | ResolvedGerm) -> Fraction:
    if r < 2:
        raise InvalidInput(f"r={r} < 2")
    c0, ck, ce = signature_coefficients(n, r)
    return c0 * idx.alpha0 + sum((ck(k) * a for k, a in idx.alpha.items()), Fraction(0)) + ce * idx.eps


def signature_total(model: GlobalModel) -> tuple[Fraction, Fraction]:
    """Signature as a sum of local signatures and as ``K_f^2 - 8 chi_f``."""
    n, r = model.n, model.r
    c0, _, _ = signature_coefficients(n, r)
    via_index = sum((local_signature(n, r, rg) for rg in model.resolved), Fraction(0))
    via_index += c0 * model.generic_alpha0
    K2, chi, _ = relative_invariants(model)
    return via_index, K2 - 8 * chi


@dataclass(frozen=True)
class InvariantReport:
    Kf2: Fraction
    chif: Fraction
    ef: Fraction
    slope: Fraction | None
    lambda_: Fraction
    ind_per_fiber: dict[str, Fraction]
    sigma_per_fiber: dict[str, Fraction]
    sign_total: Fraction
    M: Fraction = Fraction(0)
    generic_alpha0: int = 0

    def to_dict(self) -> dict:
        f = format_rational
        return {
            "Kf2": f(self.Kf2),
            "chif": f(self.chif),
            "ef": f(self.ef),
            "slope": None if self.slope is None else f(self.slope),
            "lambda": f(self.lambda_),
            "M": f(self.M),
            "generic_alpha0": self.generic_alpha0,
            "ind_per_fiber": {k: f(v) for k, v in self.ind_per_fiber.items()},
            "sigma_per_fiber": {k: f(v) for k, v in self.sigma_per_fiber.items()},
            "sign_total": f(self.sign_total),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "InvariantReport":
        p = parse_rational
        return cls(
            Kf2=p(d["Kf2"]),
            chif=p(d["chif"]),
            ef=p(d["ef"]),
            slope=None if d.get("slope") is None else p(d["slope"]),
            lambda_=p(d["lambda"]),
            M=p(d.get("M", "0")),
            generic_alpha0=int(d.get("generic_alpha0", 0)),
            ind_per_fiber={k: p(v) for k, v in d["ind_per_fiber"].items()},
            sigma_per_fiber={k: p(v) for k, v in d["sigma_per_fiber"].items()},
            sign_total=p(d["sign_total"]),
        )


def invariant_report(model: GlobalModel) -> InvariantReport:
    n, r = model.n, model.r
    K2, chi, e = relative_invariants(model)
    via_index, via_k = signature_total(model)
    if via_index != via_k:
        raise IdentityViolation(f"signature: local sum {via_index} != K^2 - 8chi = {via_k}")
    residual = slope_equality_check(model)
    if residual != 0:
        raise IdentityViolation(f"slope equality residual {residual}")
    labels = [lbl for lbl, _ in model.germs]
    return InvariantReport(
        Kf2=K2,
        chif=chi,
        ef=e,
        slope=K2 / chi if chi > 0 else None,
        lambda_=slope_lambda(model),
        ind_per_fiber={lbl: horikawa_index(n, r, rg) for lbl, rg in zip(labels, model.resolved)},
        sigma_per_fiber={lbl: local_signature(n, r, rg) for lbl, rg in zip(labels, model.resolved)},
        sign_total=via_k,
        M=model.M,
        generic_alpha0=model.generic_alpha0,
    )
