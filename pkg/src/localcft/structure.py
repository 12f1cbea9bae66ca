"""Condition checks and the finite class-group structure evaluators.

For an elliptic curve over Q, minimal at an odd prime p, base-changed to
k = Q_p(mu_{p^M}), this module decides the hypotheses (good ordinary
reduction, rational p-torsion, the ramification condition) and evaluates
the group-structure formulas, always returning normalized AbGroups.
The evaluators refuse to run when their hypotheses fail rather than
extrapolating beyond what is proved.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .abgroup import AbGroup
from .curves import (
    WeierstrassCurve,
    check_minimal_at,
    fq_group_structure,
    full_torsion_level,
    good_ordinary_at,
)
from .exceptions import IntegrityError, PrecisionError
from .formal import formal_mod_p_dim
from .padic import LocalField, ResidueField, cyclotomic_field
from .symbols import subgroup_Ubar, subgroup_V


@dataclass
class ConditionsReport:
    """Everything the structure formulas need to know about one curve."""

    p: int
    M: int
    label: str
    ainvs: tuple
    good: bool
    ordinary: bool
    a_p: int | None
    rat: bool                  # E[p] rational over k
    torsion_level: int         # N = max{n <= M : E[p^n] rational}
    ram: bool                  # k(mu_{p^{N+1}})/k nontrivial totally ramified
    reduced_group: AbGroup     # E(F_p) of the reduction
    diagnostics: dict = field(default_factory=dict)

    @property
    def hypotheses_met(self) -> bool:
        return self.good and self.ordinary and self.rat and self.ram

    def to_row(self) -> dict:
        return {
            "label": self.label,
            "ainvs": list(self.ainvs),
            "a_p": self.a_p,
            "flags": {"good": self.good, "ord": self.ordinary,
                      "rat": self.rat, "ram": self.ram},
            "N": self.torsion_level,
            "reduced_group": self.reduced_group.to_list(),
        }


def check_conditions(E: WeierstrassCurve, p: int, M: int,
                     label: str = "", prec: int | None = None,
                     skip_torsion: bool = False) -> ConditionsReport:
    """Decide the hypothesis flags for E over k = Q_p(mu_{p^M}).

    Over this cyclotomic k the ramification condition reduces to N = M:
    k(mu_{p^{N+1}})/k is nontrivial exactly when N + 1 > M, and towers of
    p-power cyclotomic fields over Q_p are totally ramified.

    `skip_torsion` suppresses the expensive torsion computation for
    curves that already failed an earlier flag (used by the census).
    """
    diagnostics: dict = {}
    t0 = time.perf_counter()
    minimal_ok = check_minimal_at(E, p)
    if not minimal_ok:
        diagnostics["warning"] = ("minimality not certified by the cheap "
                                  "v_p(c4)/v_p(disc) test (exact only for "
                                  "p >= 5); curve treated as bad at p")
    good, ordinary, a_p = (False, False, None)
    if minimal_ok:
        good, ordinary, a_p = good_ordinary_at(E, p)

    rf = ResidueField(p, 1)
    if good:
        reduced = fq_group_structure(E.reduction(rf), rf)
    else:
        reduced = AbGroup([])

    rat = False
    N = 0
    reduced_p_tors = good and reduced.order % p == 0
    if good and not skip_torsion:
        if ordinary or reduced_p_tors:
            base_prec = prec if prec is not None else 60
            info: dict = {}
            try:
                K = cyclotomic_field(p, M, prec=base_prec)
                N = full_torsion_level(E, K, p, M, info=info)
            except PrecisionError:
                # one retry at doubled precision, re-lifting the exact
                # integer model into the bigger field
                info = {}
                K = cyclotomic_field(p, M, prec=2 * base_prec)
                N = full_torsion_level(E, K, p, M, info=info)
                diagnostics["retried_at_precision"] = 2 * base_prec
            diagnostics.update(info)
            rat = N >= 1
        # good curves with no p-torsion in the reduction cannot have
        # rational E[p]: the formal part contributes at most p points
        # and the reduction the rest
    ram = rat and N == M
    diagnostics["seconds"] = round(time.perf_counter() - t0, 6)
    return ConditionsReport(p=p, M=M, label=label, ainvs=tuple(E.ainvs),
                            good=good, ordinary=ordinary, a_p=a_p, rat=rat,
                            torsion_level=N, ram=ram, reduced_group=reduced,
                            diagnostics=diagnostics)


def _require(report: ConditionsReport):
    if not report.hypotheses_met:
        missing = [name for name, ok in
                   [("good", report.good), ("ordinary", report.ordinary),
                    ("rational p-torsion", report.rat), ("ramification", report.ram)]
                   if not ok]
        raise ValueError("hypotheses unmet: " + ", ".join(missing))


def class_group_finite_part(report: ConditionsReport, g: int = 1,
                            reduced_group: AbGroup | None = None) -> AbGroup:
    """The finite part of the class group: (Z/p^N)^g + reduced group.

    For curves g = 1 and the reduced group comes from the report;
    the abstract evaluator accepts both as parameters.
    """
    _require(report)
    red = report.reduced_group if reduced_group is None else reduced_group
    p, N = report.p, report.torsion_level
    return AbGroup([p ** N] * g + red.to_list())


def class_group_mod(report: ConditionsReport, n: int, g: int = 1,
                    reduced_group: AbGroup | None = None) -> AbGroup:
    """The p^n level: (Z/p^min(n,N))^g + reduced_group/p^n.

    Self-check: for n <= N the order must be p^(2 g n).
    """
    _require(report)
    if n < 1:
        raise ValueError("n must be >= 1")
    red = report.reduced_group if reduced_group is None else reduced_group
    p, N = report.p, report.torsion_level
    out = AbGroup([p ** min(n, N)] * g + red.quotient_mod(p ** n).to_list())
    if n <= N and out.order != p ** (2 * g * n):
        raise IntegrityError(
            f"mod-p^{n} structure has order {out.order}, not p^{2 * g * n}")
    return out


def class_group_prime_to_p(report: ConditionsReport, m: int) -> AbGroup:
    """The prime-to-p level needs only good reduction: reduced group mod m."""
    if not report.good:
        raise ValueError("hypotheses unmet: good")
    if m < 1:
        raise ValueError("m must be >= 1")
    if m % report.p == 0:
        raise ValueError(f"m = {m} is divisible by p = {report.p}")
    return report.reduced_group.quotient_mod(m)


def albanese_kernel_mod(g1: int, g2: int, n: int,
                        report1: ConditionsReport,
                        report2: ConditionsReport) -> AbGroup:
    """(Z/p^n)^(g1 g2) for a product of two curves, when both carry
    ordinary reduction and full rational p^n-torsion."""
    for r in (report1, report2):
        if not (r.good and r.ordinary):
            raise ValueError("hypotheses unmet: good ordinary reduction")
        if r.torsion_level < n:
            raise ValueError(
                f"hypotheses unmet: p^{n}-torsion not rational (N = {r.torsion_level})")
    p = report1.p
    return AbGroup([p ** n] * (g1 * g2))


def kummer_image_dims(K: LocalField, report: ConditionsReport,
                      g: int = 1, level: int = 1) -> dict:
    """Dimension data of the Kummer image at level p, with a cross-check.

    Returns dim Ubar, dim Ker(j) (the unramified kernel), and the total
    g*([K:Q_p] + 2); the total must also equal the formal-group dimension
    plus the reduced p-torsion dimension, and a mismatch raises.  `level`
    asserts rationality of the p^level torsion as a precondition.
    """
    if not (report.good and report.ordinary and report.rat):
        raise ValueError("hypotheses unmet: good ordinary rational p-torsion")
    if report.torsion_level < level:
        raise ValueError(
            f"hypotheses unmet: torsion rational only to level "
            f"{report.torsion_level} < {level}")
    p = report.p
    dim_ubar = subgroup_Ubar(K).dim
    dim_kerj = subgroup_V(K).dim
    total = g * (K.degree + 2)
    if g * (dim_ubar + dim_kerj) != total:
        raise IntegrityError("Kummer image dimensions do not add up")
    E = WeierstrassCurve(*report.ainvs)
    d_formal = formal_mod_p_dim(E, K, p)
    qm = report.reduced_group.quotient_mod(p)  # E(F_p)/p = E(F_p)[p] here
    red_p_dim = 0
    while p ** (red_p_dim + 1) <= qm.order:
        red_p_dim += 1
    if d_formal + red_p_dim != total:
        raise IntegrityError(
            f"cross-check failed: formal dim {d_formal} + reduced torsion "
            f"{red_p_dim} != Mattuck total {total}")
    return {
        "rank_Ubar": g,
        "rank_KerJ": g,
        "dim_Ubar": dim_ubar,
        "dim_KerJ": dim_kerj,
        "mattuck_total": total,
        "formal_dim": d_formal,
        "reduced_p_dim": red_p_dim,
    }
