"""Nonlinear charge coherent states and their even/odd superpositions.

A state of charge ``q`` lives on a single ladder of two-mode number states

    |n + s1, n + s2>,   s1 = max(q, 0),  s2 = max(-q, 0),   n = 0, 1, 2, ...

with coefficients ``c_n ∝ xi**n / (sqrt(n! [n+|q|]!) [f(n)]! [f(n+|q|)]!)``.
Here ``[n+s]! = (n+s)(n-1+s)...(1+s) = (n+s)!/s!`` and
``[f(n+s)]! = f(n+s) f(n-1+s) ... f(1+s)``; both empty products equal 1.
Note the bracket factorial differs from ``(n+s)!`` by the constant ``s!``,
which only rescales the normalization.

Even (odd) states keep the even (odd) rungs of the same ladder.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from . import fock
from .errors import InvalidParameter, OutOfRadius, ParityMismatch
from .nonlinearity import NonlinearityModel
from .numerics import LogNumber, TruncationPolicy, log_factorial_table, sum_log_series_log

log = logging.getLogger(__name__)

__all__ = [
    "PARITIES",
    "ChargeState",
    "raw_coefficient",
    "raw_log_coefficients",
    "normalization",
    "parity_normalization_identity",
    "build_state",
    "probability",
    "to_fock",
    "eigen_residual",
    "overlap",
    "ladder_occupation",
    "state_rows",
    "write_state_csv",
]

PARITIES = ("full", "even", "odd")

# Ladder length is chosen so that P(n) * (n+|q|+2)**MOMENT_POWER is negligible,
# which keeps fourth-order number moments converged on unit-disk models.
MOMENT_POWER = 4
_CHUNK = 256


def ladder_occupation(n, q: int):
    """Mode occupations ``(n1, n2)`` carried by ladder index ``n``."""
    s1, s2 = max(q, 0), max(-q, 0)
    return n + s1, n + s2


def _raw_log_chunks(q: int, model: NonlinearityModel) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(n, ln r_n)`` in chunks, r_n being the xi-independent coefficient."""
    s = abs(q)
    start = 0
    acc_f = acc_fs = 0.0
    while True:
        n = np.arange(start, start + _CHUNK)
        lf = log_factorial_table(n[-1] + s)
        lfact = lf[n]
        lshift = lf[n + s] - lf[s]
        k = np.maximum(n, 1)
        lfk = np.where(n >= 1, model.log_f(k), 0.0)
        lfks = np.where(n >= 1, model.log_f(k + s), 0.0)
        cf = acc_f + np.cumsum(lfk)
        cfs = acc_fs + np.cumsum(lfks)
        acc_f, acc_fs = cf[-1], cfs[-1]
        yield n, -0.5 * (lfact + lshift) - cf - cfs
        start += _CHUNK


def raw_log_coefficients(n_max: int, q: int, model: NonlinearityModel) -> np.ndarray:
    """``ln r_n`` for ``n = 0 .. n_max``."""
    parts = []
    for n, vals in _raw_log_chunks(q, model):
        parts.append(vals)
        if n[-1] >= n_max:
            break
    return np.concatenate(parts)[: n_max + 1]


def raw_coefficient(n: int, q: int, model: NonlinearityModel) -> LogNumber:
    """``1 / (sqrt(n! [n+|q|]!) [f(n)]! [f(n+|q|)]!)`` as a LogNumber."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return LogNumber(1, float(raw_log_coefficients(n, q, model)[n]))


def _check_radius(x: float, model: NonlinearityModel, policy: TruncationPolicy) -> None:
    if not math.isfinite(x) or x < 0:
        raise InvalidParameter(f"|xi|^2 must be finite and nonnegative, got {x}")
    if math.isfinite(model.radius) and x > policy.radius_guard * model.radius**2:
        raise OutOfRadius(
            f"|xi|^2 = {x:g} exceeds {policy.radius_guard:g} x radius^2 = "
            f"{policy.radius_guard * model.radius ** 2:g} for {model.describe()}"
        )


def _term_stream(x: float, q: int, model: NonlinearityModel, parity: str, weight_power: int = 0):
    lx = math.log(x)
    s = abs(q)
    for n, raw in _raw_log_chunks(q, model):
        logs = n * lx + 2.0 * raw
        if weight_power:
            logs = logs + weight_power * np.log(n + s + 2.0)
        for k, val in zip(n.tolist(), logs.tolist()):
            if (parity == "even" and k % 2) or (parity == "odd" and not k % 2):
                yield LogNumber(0)
            else:
                yield LogNumber(1, val)


def normalization(
    x: float, q: int, model: NonlinearityModel, policy: TruncationPolicy | None = None
) -> tuple[LogNumber, int]:
    """Series ``N(x) = sum_n x**n / (n! [n+|q|]! ([f(n)]! [f(n+|q|)]!)**2)``.

    Returns the sum as a LogNumber and the highest ladder index used.
    """
    policy = policy or TruncationPolicy()
    _check_radius(x, model, policy)
    if x == 0:
        return LogNumber.one(), 0
    total, used = sum_log_series_log(_term_stream(x, q, model, "full"), policy)
    return total, used - 1


def parity_normalization_identity(
    x: float, q: int, model: NonlinearityModel, parity: str, policy: TruncationPolicy | None = None
) -> LogNumber:
    """``(N(x) +- N(-x)) / 2`` for ``parity`` even (+) or odd (-).

    Independent of the direct even/odd sums used by :func:`build_state`;
    kept as a cross-check.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    policy = policy or TruncationPolicy()
    plus, _ = normalization(x, q, model, policy)
    if x == 0:
        return LogNumber.one() if parity == "even" else LogNumber(0)

    def alternating():
        for k, t in enumerate(_term_stream(x, q, model, "full")):
            yield -t if k % 2 else t

    minus, _ = sum_log_series_log(alternating(), policy)
    sign = 1 if parity == "even" else -1
    ratio = sign * float(LogNumber(minus.sign, minus.log_magnitude - plus.log_magnitude))
    if 1.0 + ratio <= 0.0:
        return LogNumber(0)
    return LogNumber(1, plus.log_magnitude - math.log(2.0) + math.log1p(ratio))


@dataclass(frozen=True, eq=False)
class ChargeState:
    """Normalized state on one charge ladder.

    Attributes
    ----------
    q : int
        Charge number ``n1 - n2``.
    xi : complex
        Eigenvalue of the pair operator (of its square for even/odd states).
    parity : {'full', 'even', 'odd'}
    model : NonlinearityModel
    log_coeffs : ndarray
        ``ln |c_n|`` after normalization, ``-inf`` on suppressed rungs.
    norm_log : LogNumber
        Normalization constant (sum of squared unnormalized coefficients).
    n_used : int
        Highest ladder index retained.
    """

    q: int
    xi: complex
    parity: str
    model: NonlinearityModel
    log_coeffs: np.ndarray
    norm_log: LogNumber
    n_used: int

    @property
    def x(self) -> float:
        return abs(self.xi) ** 2

    @property
    def ladder(self) -> np.ndarray:
        return np.arange(self.n_used + 1)

    @property
    def occupations(self) -> tuple[np.ndarray, np.ndarray]:
        return ladder_occupation(self.ladder, self.q)

    @property
    def probabilities(self) -> np.ndarray:
        return np.exp(2.0 * self.log_coeffs)

    @property
    def coefficients(self) -> np.ndarray:
        phase = np.exp(1j * self.ladder * np.angle(self.xi))
        return np.exp(self.log_coeffs) * phase

    def __repr__(self):
        return (
            f"ChargeState(q={self.q}, xi={self.xi}, parity={self.parity!r}, "
            f"model={self.model.describe()}, n_used={self.n_used})"
        )


def build_state(
    xi: complex,
    q: int,
    model: NonlinearityModel,
    parity: str = "full",
    policy: TruncationPolicy | None = None,
) -> ChargeState:
    """Construct the normalized state ``|xi, q, f>`` or its even/odd part."""
    if parity not in PARITIES:
        raise InvalidParameter(f"parity must be one of {PARITIES}, got {parity!r}")
    policy = policy or TruncationPolicy()
    q = int(q)
    xi = complex(xi)
    x = abs(xi) ** 2
    _check_radius(x, model, policy)
    if x == 0:
        if parity == "odd":
            raise InvalidParameter("the odd state does not exist at xi = 0")
        return ChargeState(q, xi, parity, model, np.zeros(1), LogNumber.one(), 0)

    _, used = sum_log_series_log(_term_stream(x, q, model, parity, MOMENT_POWER), policy)
    n_used = used - 1
    n = np.arange(n_used + 1)
    log_c = n * (0.5 * math.log(x)) + raw_log_coefficients(n_used, q, model)
    if parity == "even":
        log_c[1::2] = -np.inf
    elif parity == "odd":
        log_c[0::2] = -np.inf
    top = np.max(2.0 * log_c)
    log_norm = top + math.log(math.fsum(np.exp(2.0 * log_c - top)))
    return ChargeState(q, xi, parity, model, log_c - 0.5 * log_norm, LogNumber(1, log_norm), n_used)


def probability(state: ChargeState, n: int) -> float:
    """``P(n) = |c_n|^2`` for ladder index ``n`` (occupation from ladder_occupation)."""
    if not 0 <= n <= state.n_used:
        raise IndexError(f"ladder index {n} outside 0..{state.n_used}")
    return float(np.exp(2.0 * state.log_coeffs[n]))


def to_fock(state: ChargeState, cutoff: int | None = None) -> fock.FockVector:
    """Embed the ladder into the two-mode box (default: smallest box that fits)."""
    n1, n2 = state.occupations
    needed = int(max(n1[-1], n2[-1]))
    cutoff = needed if cutoff is None else cutoff
    if cutoff < needed:
        raise ValueError(f"cutoff {cutoff} cannot hold occupation {needed}")
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amps[n1, n2] = state.coefficients
    return fock.FockVector(cutoff, amps)


def eigen_residual(state: ChargeState, squared: bool = False) -> float:
    """``||Op psi - lam psi|| / max(|lam|, 1)`` on the Fock engine.

    ``Op = A1 A2`` (eigenvalue xi, full states only) or ``(A1 A2)**2``
    (eigenvalue xi**2).  The top one (two) rungs are excluded: their
    equation involves coefficients beyond the retained ladder.
    """
    if not squared and state.parity != "full":
        raise ParityMismatch("even/odd states are eigenstates of (A1 A2)^2 only; use squared=True")
    steps = 2 if squared else 1
    op = fock.K_minus(state.model)
    if squared:
        op = op * op
    lam = state.xi**steps
    v = to_fock(state)
    r = np.array((fock.apply(op, v) - v * lam).amplitudes)
    n1, n2 = state.occupations
    r[n1[-steps:], n2[-steps:]] = 0.0
    return float(np.linalg.norm(r) / max(abs(lam), 1.0))


def overlap(s1: ChargeState, s2: ChargeState) -> complex:
    """Inner product ``<s1|s2>``."""
    if s1.q != s2.q:
        return 0j
    if {s1.parity, s2.parity} == {"even", "odd"}:
        return 0j
    if s1.model.describe() != s2.model.describe():
        log.warning("overlap between different models: %s vs %s", s1.model.describe(), s2.model.describe())
    m = min(s1.n_used, s2.n_used) + 1
    return complex(np.vdot(s1.coefficients[:m], s2.coefficients[:m]))


STATE_COLUMNS = ("n", "n1", "n2", "re_c", "im_c", "P")


def state_rows(state: ChargeState) -> list[tuple]:
    """Rows ``(n, n1, n2, Re c_n, Im c_n, P(n))``; suppressed parity rungs omitted."""
    n1, n2 = state.occupations
    c = state.coefficients
    p = state.probabilities
    rows = []
    for k in range(state.n_used + 1):
        if state.log_coeffs[k] == -np.inf:
            continue
        rows.append((k, int(n1[k]), int(n2[k]), c[k].real, c[k].imag, p[k]))
    return rows


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_state_csv(state: ChargeState, path, metadata: dict | None = None) -> None:
    """Write the ladder dump to a path or open text file.

    ``metadata`` goes into leading ``#`` lines.
    """
    if hasattr(path, "write"):
        _write_state(state, path, metadata)
        return
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        _write_state(state, fh, metadata)


def _write_state(state, fh, metadata):
    for key, value in (metadata or {}).items():
        fh.write(f"# {key}={value}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(STATE_COLUMNS)
    for row in state_rows(state):
        writer.writerow([_fmt(v) for v in row])
