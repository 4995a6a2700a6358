"""Variances, squeezing parameters, Mandel parameters and correlation factors.

Everything is computed from shifted-index sums over the ladder coefficients
``c_n`` of a :class:`~nlcharge.states.ChargeState`.  On a charge ladder only
operators that conserve ``n1 - n2`` have nonzero expectation, so

* ``<a_i> = <a_i^2> = <a_1^dag a_2> = 0``,
* ``<a_1 a_2> = <k->`` and ``<A_1 A_2> = <K->`` are the only off-diagonal
  first moments, and ``<k-^2>``, ``<K-^2>`` the only second ones.

:func:`evaluate_fock` recomputes every measure by brute force on the
two-mode Fock engine and serves as the cross-check.

Squeezing is reported as signed ``S = variance - |<[P1, P2]>| / 2``
(negative means squeezed) for each quadrature pair ``(P1, P2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import fock
from .errors import UndefinedAtVacuum, UndefinedDenominator, UnknownMeasure
from .states import ChargeState, to_fock

__all__ = [
    "MEASURE_NAMES",
    "MEASURES",
    "MeasureReport",
    "LadderMoments",
    "moments_diagonal",
    "ladder_moments",
    "single_mode_variances",
    "generalized_single_mode_variances",
    "two_mode_squeezing",
    "su11_squeezing",
    "su11_variances",
    "mandel",
    "correlation",
    "uncertainty_saturation",
    "evaluate",
    "evaluate_fock",
    "UNDEFINED",
    "measure_scales",
    "compare_reports",
    "check_measures",
]

MEASURE_NAMES = (
    "var_y1", "var_z1",
    "var_Y1", "var_Y2", "var_Z1", "var_Z2",
    "S_w1", "S_w2", "S_W1", "S_W2",
    "S_x1", "S_x2", "S_X1", "S_X2",
    "Q_a1", "Q_a2", "Q_A1", "Q_A2",
    "g", "G",
    "uncertainty_saturation_X",
)  # fmt: skip

UNDEFINED = "undefined"


def _energy(state: ChargeState, n) -> np.ndarray:
    return np.asarray(state.model.energy(np.asarray(n)), dtype=float)


def moments_diagonal(state: ChargeState, h: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
    """``sum_n P(n) h(n1(n), n2(n))`` for an observable diagonal in the number basis."""
    n1, n2 = state.occupations
    p = state.probabilities
    vals = np.broadcast_to(np.asarray(h(n1, n2), dtype=float), p.shape)
    mask = p > 0
    return math.fsum(p[mask] * vals[mask])


@dataclass(frozen=True)
class LadderMoments:
    """``m1 = <K->``, ``m2 = <K-^2>``, ``m11 = <K+ K->``, ``mK0 = <K0>``."""

    m1: complex
    m2: complex
    m11: float
    mK0: float

    def __iter__(self):
        return iter((self.m1, self.m2, self.m11, self.mK0))


def _pair_energy(state: ChargeState, deformed: bool):
    """``E(n1) E(n2)`` along the ladder (``n1 n2`` when not deformed)."""
    n1, n2 = state.occupations
    if deformed:
        return _energy(state, n1) * _energy(state, n2), _energy(state, n1 + 1) * _energy(state, n2 + 1)
    return (n1 * n2).astype(float), ((n1 + 1) * (n2 + 1)).astype(float)


def ladder_moments(state: ChargeState, deformed: bool = True) -> LadderMoments:
    """First and second moments of the pair operators.

    ``K-`` lowers ladder index ``n`` by one with matrix element
    ``h_n = sqrt(E(n1) E(n2))`` (``sqrt(n1 n2)`` undeformed), so

    ``m1 = sum_n conj(c_{n-1}) c_n h_n`` and
    ``m2 = sum_n conj(c_{n-2}) c_n h_n h_{n-1}``.
    """
    c = state.coefficients
    low, high = _pair_energy(state, deformed)
    h = np.sqrt(low)
    m1 = np.sum(np.conj(c[:-1]) * c[1:] * h[1:]) if c.size > 1 else 0j
    m2 = np.sum(np.conj(c[:-2]) * c[2:] * h[2:] * h[1:-1]) if c.size > 2 else 0j
    p = state.probabilities
    m11 = math.fsum(p * low)
    mK0 = 0.5 * math.fsum(p * (high - low))
    return LadderMoments(complex(m1), complex(m2), float(m11), float(mK0))


def single_mode_variances(state: ChargeState) -> tuple[float, float]:
    """``(var y_1, var z_1)`` with ``var y_1 = var y_2 = (2<n1> + 1) / 4``.

    ``y`` quadratures belong to mode 1 and ``z`` quadratures to mode 2.
    """
    n1 = moments_diagonal(state, lambda a, b: a)
    n2 = moments_diagonal(state, lambda a, b: b)
    return 0.25 * (2.0 * n1 + 1.0), 0.25 * (2.0 * n2 + 1.0)


def generalized_single_mode_variances(state: ChargeState):
    """Deformed single-mode variances and their commutator bounds.

    Returns ``(var_Y1, var_Y2, var_Z1, var_Z2, rhs_Y, rhs_Z)`` where
    ``var_Y1 = var_Y2 = <E(n1) + E(n1+1)> / 4`` and
    ``rhs_Y = |<E(n1+1) - E(n1)>| / 4`` is half the commutator modulus.
    Mode ``i`` is squeezed in ``Y_j`` iff ``var_Yj < rhs_Y``.
    """
    e = state.model.energy
    vY = 0.25 * moments_diagonal(state, lambda a, b: e(a) + e(a + 1))
    vZ = 0.25 * moments_diagonal(state, lambda a, b: e(b) + e(b + 1))
    rY = 0.25 * abs(moments_diagonal(state, lambda a, b: e(a + 1) - e(a)))
    rZ = 0.25 * abs(moments_diagonal(state, lambda a, b: e(b + 1) - e(b)))
    return vY, vY, vZ, vZ, rY, rZ


def two_mode_squeezing(state: ChargeState, deformed: bool = False) -> tuple[float, float]:
    """``S_{w_i}`` (or ``S_{W_i}``) for ``w_1,2 = (y_1,2 + z_1,2) / sqrt(2)``.

    ``var w_1,2 = (var y + var z) / 2 +- Re<a1 a2> / 2`` and the bound is
    ``|<[w1, w2]>| / 2 = 1/4``; the deformed bound is ``|<C1 + C2>| / 8``
    with ``C_i = E(n_i + 1) - E(n_i)``.
    """
    m1 = ladder_moments(state, deformed).m1
    if deformed:
        vY, _, vZ, _, _, _ = generalized_single_mode_variances(state)
        e = state.model.energy
        bound = 0.125 * abs(moments_diagonal(state, lambda a, b: e(a + 1) - e(a) + e(b + 1) - e(b)))
    else:
        vY, vZ = single_mode_variances(state)
        bound = 0.25
    mean = 0.5 * (vY + vZ)
    return mean + 0.5 * m1.real - bound, mean - 0.5 * m1.real - bound


def su11_variances(state: ChargeState, deformed: bool = False) -> tuple[float, float, float]:
    """``(var x1, var x2, <k0>)`` for ``x1 = (k+ + k-)/2``, ``x2 = i(k+ - k-)/2``.

    ``[x1, x2] = i k0``; ``<k- k+>`` is taken as ``<k+ k-> + 2<k0>``.
    """
    m1, m2, m11, mK0 = ladder_moments(state, deformed)
    sym = 2.0 * m11 + 2.0 * mK0
    v1 = 0.25 * (sym + 2.0 * m2.real) - m1.real**2
    v2 = 0.25 * (sym - 2.0 * m2.real) - m1.imag**2
    return v1, v2, mK0


def su11_squeezing(state: ChargeState, deformed: bool = False) -> tuple[float, float]:
    """``S_{x_i} = var x_i - |<k0>| / 2`` (``S_{X_i}`` with ``K0`` when deformed)."""
    v1, v2, k0 = su11_variances(state, deformed)
    return v1 - 0.5 * abs(k0), v2 - 0.5 * abs(k0)


def _negligible_bound(k0: float, v1: float, v2: float) -> bool:
    # K0 can vanish identically (harmonious spectrum, odd ladder); rounding
    # then leaves a meaningless ratio.
    return abs(k0) <= 1e-13 * (abs(v1) + abs(v2))


def uncertainty_saturation(state: ChargeState, deformed: bool = True) -> float:
    """Relative excess ``(var1 var2 - <K0>^2/4) / (<K0>^2/4)``; zero for intelligent states."""
    v1, v2, k0 = su11_variances(state, deformed)
    bound = 0.25 * k0 * k0
    if _negligible_bound(k0, v1, v2):
        raise UndefinedDenominator("<K0> = 0; the uncertainty bound vanishes")
    return (v1 * v2 - bound) / bound


def mandel(state: ChargeState, generalized: bool = False, mode: int = 1) -> float:
    """``Q = (<N^2> - <N>^2) / <N> - 1`` with ``N = n_i`` or ``E(n_i)``."""
    if mode not in (1, 2):
        raise ValueError("mode must be 1 or 2")
    e = state.model.energy
    pick = (lambda a, b: a) if mode == 1 else (lambda a, b: b)
    obs = (lambda a, b: e(pick(a, b))) if generalized else pick
    mean = moments_diagonal(state, obs)
    if mean <= 0.0:
        raise UndefinedAtVacuum(f"<n_{mode}> = 0; the Mandel parameter is undefined")
    second = moments_diagonal(state, lambda a, b: np.asarray(obs(a, b), dtype=float) ** 2)
    return (second - mean * mean) / mean - 1.0


def correlation(state: ChargeState, generalized: bool = False, normal_ordered: bool = True) -> float:
    """Two-mode correlation factor.

    Normal-ordered (default): ``g = <a1^dag2 a2^dag2 a1^2 a2^2> / <n1 n2>^2
    = <n1(n1-1) n2(n2-1)> / <n1 n2>^2``; the generalized ``G`` uses
    ``A_i`` and reads ``<E(n1)E(n1-1)E(n2)E(n2-1)> / <E(n1)E(n2)>^2``.
    ``normal_ordered=False`` gives the raw ratio ``<(N1 N2)^2> / <N1 N2>^2``,
    which is bounded below by 1 for every state.
    """
    if generalized:
        e = state.model.energy

        def fall(n):
            return e(n) * e(np.maximum(n - 1, 0))

        def single(n):
            return e(n)
    else:

        def fall(n):
            return n * (n - 1.0)

        def single(n):
            return n * 1.0

    den = moments_diagonal(state, lambda a, b: single(a) * single(b))
    if den <= 0.0:
        raise UndefinedDenominator("<N1 N2> = 0; the correlation factor is undefined")
    if normal_ordered:
        num = moments_diagonal(state, lambda a, b: fall(a) * fall(b))
    else:
        num = moments_diagonal(state, lambda a, b: (single(a) * single(b)) ** 2)
    return num / (den * den)


@dataclass
class MeasureReport:
    """All measures at one grid point.

    ``values[name]`` is ``None`` where the measure is undefined for the
    state (for instance Mandel parameters at the vacuum).
    """

    x: float
    values: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.values[name]

    def row(self, names=MEASURE_NAMES) -> list:
        return [self.x] + [self.values[n] for n in names]


def _guard(fn):
    try:
        return fn()
    except (UndefinedAtVacuum, UndefinedDenominator):
        return None


def _registry() -> dict[str, Callable[[ChargeState], float]]:
    return {
        "var_y1": lambda s: single_mode_variances(s)[0],
        "var_z1": lambda s: single_mode_variances(s)[1],
        "var_Y1": lambda s: generalized_single_mode_variances(s)[0],
        "var_Y2": lambda s: generalized_single_mode_variances(s)[1],
        "var_Z1": lambda s: generalized_single_mode_variances(s)[2],
        "var_Z2": lambda s: generalized_single_mode_variances(s)[3],
        "S_w1": lambda s: two_mode_squeezing(s, False)[0],
        "S_w2": lambda s: two_mode_squeezing(s, False)[1],
        "S_W1": lambda s: two_mode_squeezing(s, True)[0],
        "S_W2": lambda s: two_mode_squeezing(s, True)[1],
        "S_x1": lambda s: su11_squeezing(s, False)[0],
        "S_x2": lambda s: su11_squeezing(s, False)[1],
        "S_X1": lambda s: su11_squeezing(s, True)[0],
        "S_X2": lambda s: su11_squeezing(s, True)[1],
        "Q_a1": lambda s: mandel(s, False, 1),
        "Q_a2": lambda s: mandel(s, False, 2),
        "Q_A1": lambda s: mandel(s, True, 1),
        "Q_A2": lambda s: mandel(s, True, 2),
        "g": lambda s: correlation(s, False),
        "G": lambda s: correlation(s, True),
        "uncertainty_saturation_X": lambda s: uncertainty_saturation(s, True),
    }


MEASURES = _registry()


def check_measures(names) -> list[str]:
    names = list(names)
    bad = [n for n in names if n not in MEASURES]
    if bad:
        raise UnknownMeasure(f"unknown measure(s) {bad}; choose from {', '.join(MEASURE_NAMES)}")
    return names


def evaluate(state: ChargeState, measures=None) -> MeasureReport:
    """Evaluate the named measures (all of them by default)."""
    names = check_measures(MEASURE_NAMES if measures is None else measures)
    values = {}
    for name in names:
        values[name] = _guard(lambda: float(MEASURES[name](state)))
    return MeasureReport(state.x, values)


# Fock-engine oracle ---------------------------------------------------------


def _fock_cutoff(state: ChargeState) -> int:
    n_top = state.n_used + abs(state.q)
    return max(state.n_used + 6, n_top + 4)


def evaluate_fock(state: ChargeState, cutoff: int | None = None) -> MeasureReport:
    """Recompute every measure by applying operators to the embedded state.

    Independent of the ladder formulas above: variances come from
    ``<P P> - <P>^2``, bounds from ``<[P1, P2]>`` built with
    :func:`fock.commutator`, and correlations from ``||a1^2 a2^2 psi||^2``.
    """
    model = state.model
    psi = to_fock(state, cutoff if cutoff is not None else _fock_cutoff(state))
    ops = fock.quadratures(model)

    def ev(op):
        return fock.expectation(op, psi)

    def var(op):
        mean = ev(op).real
        v = fock.apply(op, psi)
        return v.vdot(v).real - mean * mean

    def bound(p1, p2):
        return 0.5 * abs(ev(fock.commutator(p1, p2)))

    def s_pair(k1, k2):
        b = bound(ops[k1], ops[k2])
        return var(ops[k1]) - b, var(ops[k2]) - b

    def q_param(op):
        mean = ev(op).real
        if mean <= 0.0:
            return None
        v = fock.apply(op, psi)
        return (v.vdot(v).real - mean * mean) / mean - 1.0

    def corr(low1, low2, n1n2):
        den = ev(n1n2).real
        if den <= 0.0:
            return None
        v = fock.apply(low1 * low1 * low2 * low2, psi)
        return v.vdot(v).real / den**2

    a1, a2 = fock.a(1), fock.a(2)
    A1, A2 = fock.A(1, model), fock.A(2, model)
    N1, N2 = fock.Adag(1, model) * A1, fock.Adag(2, model) * A2
    v1, v2 = var(ops["X1"]), var(ops["X2"])
    k0 = abs(ev(fock.commutator(ops["X1"], ops["X2"])))
    values = {
        "var_y1": var(ops["y1"]),
        "var_z1": var(ops["z1"]),
        "var_Y1": var(ops["Y1"]),
        "var_Y2": var(ops["Y2"]),
        "var_Z1": var(ops["Z1"]),
        "var_Z2": var(ops["Z2"]),
    }
    values["S_w1"], values["S_w2"] = s_pair("w1", "w2")
    values["S_W1"], values["S_W2"] = s_pair("W1", "W2")
    values["S_x1"], values["S_x2"] = s_pair("x1", "x2")
    values["S_X1"], values["S_X2"] = s_pair("X1", "X2")
    values["Q_a1"] = q_param(fock.num(1))
    values["Q_a2"] = q_param(fock.num(2))
    values["Q_A1"] = q_param(N1)
    values["Q_A2"] = q_param(N2)
    values["g"] = corr(a1, a2, fock.num(1) * fock.num(2))
    values["G"] = corr(A1, A2, N1 * N2)
    if _negligible_bound(k0, v1, v2):
        values["uncertainty_saturation_X"] = None
    else:
        values["uncertainty_saturation_X"] = (v1 * v2 - 0.25 * k0 * k0) / (0.25 * k0 * k0)
    return MeasureReport(state.x, values)


def measure_scales(state: ChargeState) -> dict[str, float]:
    """Natural magnitude of each measure, for absolute comparison tolerances.

    Signed squeezing values are differences of a variance and a bound that
    can cancel exactly (intelligent states give ``S = 0``); their rounding
    error scales with the variance, not with ``S`` itself.
    """
    vy, vz = single_mode_variances(state)
    vY1, vY2, vZ1, vZ2, _, _ = generalized_single_mode_variances(state)
    xs = su11_variances(state, False)
    Xs = su11_variances(state, True)
    sw = two_mode_squeezing(state, False)
    sW = two_mode_squeezing(state, True)
    scales = {
        "var_y1": vy, "var_z1": vz,
        "var_Y1": vY1, "var_Y2": vY2, "var_Z1": vZ1, "var_Z2": vZ2,
        "S_w1": abs(sw[0]) + 0.25, "S_w2": abs(sw[1]) + 0.25,
        "S_W1": vY1 + vZ1, "S_W2": vY2 + vZ2,
        "S_x1": xs[0] + abs(xs[2]), "S_x2": xs[1] + abs(xs[2]),
        "S_X1": Xs[0] + abs(Xs[2]), "S_X2": Xs[1] + abs(Xs[2]),
        "uncertainty_saturation_X": 1.0,
    }  # fmt: skip
    for name in ("Q_a1", "Q_a2", "Q_A1", "Q_A2", "g", "G"):
        scales[name] = 1.0
    return scales


def compare_reports(
    a: MeasureReport, b: MeasureReport, scales: dict[str, float] | None = None, rtol: float = 1e-9
) -> dict[str, float]:
    """Relative discrepancy per measure, normalized by ``max(|a|, |b|, scale)``.

    Measures undefined on exactly one side get ``inf``; undefined on both, ``0``.
    """
    out = {}
    for name in a.values.keys() & b.values.keys():
        u, v = a.values[name], b.values[name]
        if u is None or v is None:
            out[name] = 0.0 if u is None and v is None else math.inf
            continue
        ref = max(abs(u), abs(v), (scales or {}).get(name, 0.0), 1e-300)
        out[name] = abs(u - v) / ref
    return out
