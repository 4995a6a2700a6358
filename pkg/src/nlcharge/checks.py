"""Self-verification suite behind ``nlcharge verify``.

Each check measures a residual and compares it with a tolerance.  The
suite covers the deformed su(1,1) algebra, quadrature commutators,
eigenvalue equations, agreement of the analytic measures with the Fock
engine, and reductions to the undeformed case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import fock
from .nonclassicality import compare_reports, evaluate, evaluate_fock, measure_scales
from .nonlinearity import NonlinearityModel, catalog, model_poschl_teller, model_unit
from .numerics import bessel_I, log_factorial
from .states import build_state, eigen_residual, normalization, overlap

__all__ = ["CheckResult", "run_checks", "format_report", "commutator_checks"]

ALGEBRA_TOL = 1e-9
EIGEN_TOL = 1e-10
ORACLE_TOL = 1e-9
REDUCTION_TOL = 1e-12
BESSEL_TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tol)


def commutator_checks(
    model: NonlinearityModel, cutoff: int, margin: int = 3, k0_builder: Callable = fock.build_K0
) -> list[tuple[str, float]]:
    """Residuals of every commutator identity for ``model`` on a ``cutoff`` box."""
    Km, Kp, K0 = fock.K_minus(model), fock.K_plus(model), k0_builder(model)
    g = fock.build_g(model)
    ops = fock.quadratures(model)
    e = model.energy

    def c_mode(mode):
        if mode == 1:
            return fock.diagonal(lambda n1, n2: e(n1 + 1) - e(n1), "C1")
        return fock.diagonal(lambda n1, n2: e(n2 + 1) - e(n2), "C2")

    one = fock.identity()
    pairs = [
        ("[K-,K+]-2K0", Km, Kp, 2 * K0),
        ("[K0,K-]+K-g", K0, Km, -1 * (Km * g)),
        ("[K0,K+]-gK+", K0, Kp, g * Kp),
        ("[a1,a1+]-1", fock.a(1), fock.adag(1), one),
        ("[a2,a2+]-1", fock.a(2), fock.adag(2), one),
        ("[y1,y2]-i/2", ops["y1"], ops["y2"], 0.5j * one),
        ("[z1,z2]-i/2", ops["z1"], ops["z2"], 0.5j * one),
        ("[Y1,Y2]-iC1/2", ops["Y1"], ops["Y2"], 0.5j * c_mode(1)),
        ("[Z1,Z2]-iC2/2", ops["Z1"], ops["Z2"], 0.5j * c_mode(2)),
        ("[w1,w2]-i/2", ops["w1"], ops["w2"], 0.5j * one),
        ("[W1,W2]-i(C1+C2)/4", ops["W1"], ops["W2"], 0.25j * (c_mode(1) + c_mode(2))),
        ("[x1,x2]-ik0", ops["x1"], ops["x2"], 1j * k0_builder(model_unit())),
        ("[X1,X2]-iK0", ops["X1"], ops["X2"], 1j * K0),
    ]
    out = []
    for label, x, y, c in pairs:
        out.append((label, fock.commutator_residual(x, y, c, cutoff, margin)))
    return out


def _spot_xis(model: NonlinearityModel):
    for xi in (0.3, 0.3 + 0.4j):
        if math.isfinite(model.radius) and abs(xi) >= model.radius:
            xi = xi * 0.5 * model.radius / abs(xi)
        yield xi


def _oracle_xs(model: NonlinearityModel):
    if math.isfinite(model.radius):
        return (0.25 * model.radius**2, 0.5 * model.radius**2, 0.75 * model.radius**2)
    return (0.25, 1.0, 4.0)


def run_checks(level: str = "quick", k0_builder: Callable = fock.build_K0) -> list[CheckResult]:
    """Run the suite; ``quick`` uses f = 1 and Poschl-Teller only."""
    if level == "quick":
        models, cutoff, oracle_qs, oracle_xs = [model_unit(), model_poschl_teller(3.0)], 20, (0, 2), (1.0,)
    elif level == "full":
        models, cutoff, oracle_qs, oracle_xs = catalog(), 24, (0, 1, 2, -2), None
    else:
        raise ValueError("level must be 'quick' or 'full'")
    results: list[CheckResult] = []
    for model in models:
        tag = model.describe()
        for label, res in commutator_checks(model, cutoff, 3, k0_builder):
            results.append(CheckResult(f"algebra {tag} N={cutoff} {label}", res, ALGEBRA_TOL))
        for q in (0, 1, 2, -2):
            for xi in _spot_xis(model):
                full = build_state(xi, q, model)
                even = build_state(xi, q, model, "even")
                odd = build_state(xi, q, model, "odd")
                where = f"{tag} q={q} xi={xi}"
                results.append(CheckResult(f"eigen {where}", eigen_residual(full), EIGEN_TOL))
                results.append(CheckResult(f"eigen^2 even {where}", eigen_residual(even, True), EIGEN_TOL))
                results.append(CheckResult(f"eigen^2 odd {where}", eigen_residual(odd, True), EIGEN_TOL))
                results.append(CheckResult(f"<even|odd> {where}", abs(overlap(even, odd)), 1e-14))
                results.append(CheckResult(f"sum P {where}", abs(full.probabilities.sum() - 1.0), 1e-12))
        for q in oracle_qs:
            for x in oracle_xs or _oracle_xs(model):
                state = build_state(math.sqrt(x), q, model)
                diff = compare_reports(evaluate(state), evaluate_fock(state), measure_scales(state))
                worst = max(diff.values())
                results.append(CheckResult(f"oracle {tag} q={q} x={x:g}", worst, ORACLE_TOL))
    results.extend(_reduction_checks(level))
    return results


def _reduction_checks(level: str) -> list[CheckResult]:
    out = []
    unit = model_unit()
    qs = range(6) if level == "full" else (0, 2)
    for q in qs:
        for x in (0.5, 1.0, 2.0, 4.0, 8.0):
            n, _ = normalization(x, q, unit)
            r = math.sqrt(x)
            oracle = float(log_factorial(q)) * bessel_I(q, 2 * r) / r**q
            rel = abs(float(n) - oracle) / oracle
            out.append(CheckResult(f"bessel f=1 q={q} x={x:g}", rel, BESSEL_TOL))
    pairs = (("S_x1", "S_X1"), ("S_x2", "S_X2"), ("Q_a1", "Q_A1"), ("Q_a2", "Q_A2"), ("g", "G"))
    for x in (0.5, 4.0):
        rep = evaluate(build_state(math.sqrt(x), 2, unit))
        worst = max(abs(rep[a] - rep[b]) for a, b in pairs)
        out.append(CheckResult(f"f=1 deformed==undeformed x={x:g}", worst, REDUCTION_TOL))
    return out


def format_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name}: residual {r.value:.3e} (tol {r.tol:.0e})")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)

