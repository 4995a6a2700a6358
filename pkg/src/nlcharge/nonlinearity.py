"""Catalog of nonlinearity functions f(n) and the spectrum bridge e_n = n f(n)^2.

Each model carries a direct evaluator ``f`` and a log evaluator ``log_f``;
series code only ever uses ``log_f`` at ``n >= 1`` so that the super-factorial
products ``[f(n)]! = f(1) f(2) ... f(n)`` stay representable.

The value at ``n = 0`` is stored but never enters a series.  Where the
formula is singular there (harmonious, Gilmore-Perelomov with kappa=1/2) the
stored value is 1; it only ever appears multiplied by a vanishing matrix
element, e.g. in ``A|0> = a f(0)|0> = 0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import InvalidParameter, InvalidSpectrum, UnknownModel

log = logging.getLogger(__name__)

__all__ = [
    "NonlinearityModel",
    "model_unit",
    "model_poschl_teller",
    "model_hydrogen",
    "model_harmonious",
    "model_dual_harmonious",
    "model_barut_girardello",
    "model_gilmore_perelomov",
    "model_q_deformed",
    "model_from_spectrum",
    "load_spectrum",
    "estimate_radius",
    "get_model",
    "catalog",
    "MODEL_NAMES",
]

RADIUS_CHECK_TERMS = 200
_INFINITE_ESTIMATE = 1e6


def _as_int_array(n) -> np.ndarray:
    return np.asarray(n, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class NonlinearityModel:
    """A named, real, positive nonlinearity function on the nonnegative integers.

    Parameters
    ----------
    name : str
        Identifier used in CSV headers and on the command line.
    params : mapping
        Named real parameters (e.g. ``{"nu": 3.0}``).
    log_func : callable
        Vectorized ``n -> ln f(n)`` valid for ``n >= 1``.
    radius : float
        Convergence radius of the associated states in |xi| (may be ``inf``).
    func : callable, optional
        Vectorized direct evaluator; defaults to ``exp(log_func)``.
    f0 : float
        Value reported for ``f(0)``.
    energy_func : callable, optional
        Closed form of ``e_n = n f(n)^2`` for ``n >= 1``; keeps integer
        spectra exact.  Defaults to ``n exp(2 log_func)``.
    """

    name: str
    params: Mapping[str, float]
    log_func: Callable[[np.ndarray], np.ndarray]
    radius: float
    func: Callable[[np.ndarray], np.ndarray] | None = None
    f0: float = 1.0
    energy_func: Callable[[np.ndarray], np.ndarray] | None = None
    radius_estimate: float = field(init=False, default=math.nan)

    def __post_init__(self):
        n = np.arange(1, RADIUS_CHECK_TERMS + 2)
        with np.errstate(all="ignore"):
            lf = np.asarray(self.log_func(n), dtype=float)
        if not np.all(np.isfinite(lf)):
            bad = int(n[~np.isfinite(lf)][0])
            raise InvalidParameter(f"{self.name}: f({bad}) is zero or not finite")
        est = estimate_radius(self.log_func)
        object.__setattr__(self, "radius_estimate", est)
        if not _radius_consistent(self.radius, est):
            log.warning("%s: declared radius %g, ratio-test estimate %g", self.name, self.radius, est)

    def f(self, n):
        """Evaluate f(n); accepts scalars or integer arrays."""
        arr = _as_int_array(n)
        with np.errstate(all="ignore"):
            if self.func is not None:
                out = np.asarray(self.func(np.maximum(arr, 1)), dtype=float)
            else:
                out = np.exp(self.log_func(np.maximum(arr, 1)))
        out = np.where(arr == 0, self.f0, out)
        return float(out) if out.ndim == 0 else out

    __call__ = f

    def log_f(self, n):
        arr = _as_int_array(n)
        if np.any(arr < 1):
            raise ValueError("log_f is only defined for n >= 1")
        out = np.asarray(self.log_func(arr), dtype=float)
        return float(out) if out.ndim == 0 else out

    def energy(self, n):
        """``n f(n)^2`` with the value 0 at ``n = 0`` (eigenvalue of A^dag A)."""
        arr = _as_int_array(n)
        safe = np.maximum(arr, 1)
        with np.errstate(all="ignore"):
            if self.energy_func is not None:
                val = np.asarray(self.energy_func(safe), dtype=float)
            else:
                val = np.exp(np.log(safe) + 2.0 * np.asarray(self.log_func(safe), dtype=float))
        out = np.where(arr <= 0, 0.0, val)
        return float(out) if out.ndim == 0 else out

    def log_factorial_f(self, n_max: int) -> np.ndarray:
        """``ln [f(k)]!`` for ``k = 0 .. n_max`` with ``[f(0)]! = 1``."""
        out = np.zeros(n_max + 1)
        if n_max > 0:
            out[1:] = np.cumsum(self.log_f(np.arange(1, n_max + 1)))
        return out

    def describe(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}({inner})"

    def __repr__(self):
        return f"NonlinearityModel({self.describe()}, radius={self.radius:g})"


def estimate_radius(log_func, n_terms: int = RADIUS_CHECK_TERMS) -> float:
    """Ratio-test estimate of the convergence radius in |xi|.

    Uses the q=0 normalization series in ``x = |xi|^2`` whose coefficient
    ratio is ``rho_n = a_n / a_{n+1} = e_{n+1}^2`` and removes the leading
    ``1/n`` correction by linear extrapolation, ``n rho_n - (n-1) rho_{n-1}``.
    A ratio still growing by more than half between ``n/2`` and ``n``, or
    an estimate above 1e6 (in x), is reported as ``inf``.
    """
    n = np.array([n_terms // 2, n_terms - 1, n_terms], dtype=float)
    with np.errstate(all="ignore"):
        log_rho = 2.0 * (np.log(n + 1) + 2.0 * np.asarray(log_func((n + 1).astype(np.int64)), dtype=float))
    if log_rho[2] > math.log(_INFINITE_ESTIMATE) or log_rho[2] - log_rho[0] > math.log(1.5):
        return math.inf
    rho = np.exp(log_rho[1:])
    n = n[1:]
    est_x = n[1] * rho[1] - n[0] * rho[0]
    if est_x <= 0 or not math.isfinite(est_x):
        est_x = rho[1]
    if est_x > _INFINITE_ESTIMATE:
        return math.inf
    return math.sqrt(est_x)


def _radius_consistent(declared: float, estimate: float) -> bool:
    if math.isinf(declared):
        return math.isinf(estimate)
    if math.isinf(estimate):
        return False
    ratio = declared**2 / estimate**2
    return 1 / 1.01 <= ratio <= 1.01


def model_unit() -> NonlinearityModel:
    """f(n) = 1: the standard (undeformed) charge coherent states."""
    return NonlinearityModel(
        "unit",
        {},
        lambda n: np.zeros(np.shape(n)),
        math.inf,
        func=lambda n: np.ones(np.shape(n)),
        f0=1.0,
        energy_func=lambda n: np.asarray(n, dtype=float),
    )


def model_poschl_teller(nu: float = 3.0) -> NonlinearityModel:
    """Poschl-Teller potential, spectrum ``n(n+nu)``; ``nu = 2`` is the infinite well."""
    nu = float(nu)
    if not nu >= 2:
        raise InvalidParameter(f"Poschl-Teller requires nu >= 2, got {nu}")
    return NonlinearityModel(
        "poschl_teller",
        {"nu": nu},
        lambda n: 0.5 * np.log(n + nu),
        math.inf,
        func=lambda n: np.sqrt(n + nu),
        f0=math.sqrt(nu),
        energy_func=lambda n: n * (n + nu),
    )


def model_hydrogen() -> NonlinearityModel:
    """Hydrogen-like shifted spectrum ``1 - 1/(n+1)^2``; states live on the unit disk."""
    return NonlinearityModel(
        "hydrogen",
        {},
        lambda n: 0.5 * np.log(n + 2.0) - np.log(n + 1.0),
        1.0,
        func=lambda n: np.sqrt(n + 2.0) / (n + 1.0),
        f0=math.sqrt(2.0),
        energy_func=lambda n: 1.0 - 1.0 / (n + 1.0) ** 2,
    )


def model_harmonious() -> NonlinearityModel:
    """f(n) = 1/sqrt(n); flat spectrum e_n = 1, unit-disk states."""
    return NonlinearityModel(
        "harmonious",
        {},
        lambda n: -0.5 * np.log(n),
        1.0,
        func=lambda n: 1.0 / np.sqrt(n),
        f0=1.0,
        energy_func=lambda n: np.ones(np.shape(n)),
    )


def model_dual_harmonious() -> NonlinearityModel:
    """f(n) = sqrt(n), dual of the harmonious model; e_n = n^2."""
    return NonlinearityModel(
        "dual_harmonious",
        {},
        lambda n: 0.5 * np.log(n),
        math.inf,
        func=lambda n: np.sqrt(n),
        f0=0.0,
        energy_func=lambda n: np.asarray(n, dtype=float) ** 2,
    )


def _check_kappa(kappa) -> float:
    kappa = float(kappa)
    if kappa < 0.5 or not float(2 * kappa).is_integer():
        raise InvalidParameter(f"kappa must be a positive half-integer (1/2, 1, 3/2, ...), got {kappa}")
    return kappa


def model_barut_girardello(kappa: float = 0.5) -> NonlinearityModel:
    """f(n) = sqrt(n + 2 kappa - 1), kappa a positive half-integer."""
    kappa = _check_kappa(kappa)
    shift = 2 * kappa - 1
    return NonlinearityModel(
        "barut_girardello",
        {"kappa": kappa},
        lambda n: 0.5 * np.log(n + shift),
        math.inf,
        func=lambda n: np.sqrt(n + shift),
        f0=math.sqrt(shift),
        energy_func=lambda n: n * (n + shift),
    )


def model_gilmore_perelomov(kappa: float = 0.5) -> NonlinearityModel:
    """f(n) = 1/sqrt(n + 2 kappa - 1), dual of Barut-Girardello; unit-disk states."""
    kappa = _check_kappa(kappa)
    shift = 2 * kappa - 1
    return NonlinearityModel(
        "gilmore_perelomov",
        {"kappa": kappa},
        lambda n: -0.5 * np.log(n + shift),
        1.0,
        func=lambda n: 1.0 / np.sqrt(n + shift),
        f0=1.0 / math.sqrt(shift) if shift > 0 else 1.0,
        energy_func=lambda n: n / (n + shift),
    )


def model_q_deformed(qbar: float) -> NonlinearityModel:
    """q-deformed oscillator, ``f^2 = (qb^(n+1) - qb^-(n+1)) / ((n+1)(qb - 1/qb))``.

    Evaluated as ``qb^-(n+1) (1 - qb^(2n+2)) / ((n+1)(1/qb - qb))`` in logs;
    ``qbar = 1`` is the undeformed limit f = 1.
    """
    qbar = float(qbar)
    if not 0 < qbar <= 1:
        raise InvalidParameter(f"qbar must lie in (0, 1], got {qbar}")
    if qbar == 1.0:
        m = model_unit()
        return NonlinearityModel(
            "q_deformed", {"qbar": 1.0}, m.log_func, math.inf, func=m.func, f0=1.0, energy_func=m.energy_func
        )
    lq = math.log(qbar)
    lden = math.log(1.0 / qbar - qbar)

    def log_f(n):
        n = np.asarray(n, dtype=float)
        return 0.5 * (-(n + 1) * lq + np.log1p(-np.exp(2 * (n + 1) * lq)) - np.log(n + 1) - lden)

    def direct(n):
        n = np.asarray(n, dtype=float)
        return np.sqrt((qbar ** (n + 1) - qbar ** (-n - 1)) / ((n + 1) * (qbar - 1.0 / qbar)))

    return NonlinearityModel("q_deformed", {"qbar": qbar}, log_f, math.inf, func=direct, f0=1.0)


def _spectrum_callable(e) -> tuple[Callable[[np.ndarray], np.ndarray], int | None]:
    if callable(e):
        return (lambda n: np.asarray(e(np.asarray(n)), dtype=float)), None
    if isinstance(e, Mapping):
        keys = sorted(int(k) for k in e)
        table = np.array([float(e[k]) for k in keys])
        if keys != list(range(keys[0], keys[0] + len(keys))):
            raise InvalidSpectrum("spectrum table must cover consecutive n")
        start = keys[0]
    else:
        table = np.asarray(e, dtype=float)
        start = 0
    last = start + len(table) - 1

    def lookup(n):
        n = np.asarray(n)
        if np.any(n < start) or np.any(n > last):
            raise InvalidSpectrum(f"spectrum only tabulated for n in [{start}, {last}]")
        return table[n - start]

    return lookup, last


def model_from_spectrum(e, name: str = "spectrum") -> NonlinearityModel:
    """Build f(n) = sqrt(e_n / n) from a discrete non-degenerate spectrum.

    ``e`` may be a vectorized callable, a sequence indexed from 0, or a
    mapping ``n -> e_n``.  Tabulated spectra must extend at least to
    ``n = 201`` (the radius check) and bound the usable ladder length.
    """
    e_of, last = _spectrum_callable(e)
    check_to = RADIUS_CHECK_TERMS + 1
    if last is not None and last < check_to:
        raise InvalidSpectrum(f"tabulated spectrum must extend to n >= {check_to}, got {last}")
    n = np.arange(1, check_to + 1)
    vals = e_of(n)
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
        bad = int(n[(~np.isfinite(vals)) | (vals <= 0)][0])
        raise InvalidSpectrum(f"e_{bad} = {float(e_of(np.array([bad]))[0])!r}; need e_n > 0 for n >= 1")

    def log_f(k):
        k = np.asarray(k)
        ev = e_of(k)
        if np.any(ev <= 0):
            raise InvalidSpectrum("spectrum has e_n <= 0 at some n >= 1")
        return 0.5 * (np.log(ev) - np.log(k))

    f0 = 1.0
    if last is None:
        try:
            with np.errstate(all="ignore"):
                e0 = float(e_of(np.array(0.0)))
                h = 1e-7
                slope = float(e_of(np.array(h))) / h
            if e0 == 0.0 and math.isfinite(slope) and slope > 0:
                f0 = math.sqrt(slope)
        except Exception:  # the callable may only accept integers
            f0 = 1.0
    est = estimate_radius(log_f)
    return NonlinearityModel(name, {}, log_f, est, f0=f0, energy_func=lambda k: e_of(np.asarray(k)))


def load_spectrum(path, name: str | None = None) -> NonlinearityModel:
    """Read a two-column text file ``n e_n`` ('#' comments allowed)."""
    data = np.loadtxt(Path(path), comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise InvalidSpectrum(f"{path}: expected two columns (n, e_n)")
    table = {int(round(n)): float(v) for n, v in data}
    return model_from_spectrum(table, name or Path(path).stem)


_BUILDERS: dict[str, Callable[..., NonlinearityModel]] = {
    "unit": model_unit,
    "poschl_teller": model_poschl_teller,
    "hydrogen": model_hydrogen,
    "harmonious": model_harmonious,
    "dual_harmonious": model_dual_harmonious,
    "barut_girardello": model_barut_girardello,
    "gilmore_perelomov": model_gilmore_perelomov,
    "q_deformed": model_q_deformed,
}
_ALIASES = {
    "f1": "unit",
    "standard": "unit",
    "pt": "poschl_teller",
    "h": "hydrogen",
    "hs": "harmonious",
    "dhs": "dual_harmonious",
    "bg": "barut_girardello",
    "gp": "gilmore_perelomov",
    "q": "q_deformed",
    "qdef": "q_deformed",
}
MODEL_NAMES = tuple(_BUILDERS) + ("spectrum",)


def get_model(name: str, **params) -> NonlinearityModel:
    """Build a model by name (aliases such as ``pt``, ``bg`` accepted).

    ``spectrum`` needs a ``file`` parameter pointing at a two-column table.
    """
    key = _ALIASES.get(name.lower(), name.lower())
    if key == "spectrum":
        path = params.pop("file", None)
        if path is None:
            raise InvalidParameter("model 'spectrum' needs file=<path>")
        if params:
            raise InvalidParameter(f"unexpected parameters for spectrum: {sorted(params)}")
        return load_spectrum(path)
    try:
        builder = _BUILDERS[key]
    except KeyError:
        raise UnknownModel(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}") from None
    try:
        return builder(**params)
    except TypeError as exc:
        raise InvalidParameter(f"bad parameters for {key}: {exc}") from None


def catalog() -> list[NonlinearityModel]:
    """f = 1 plus the six physical models at the parameters used for the figures."""
    return [
        model_unit(),
        model_poschl_teller(3.0),
        model_hydrogen(),
        model_harmonious(),
        model_dual_harmonious(),
        model_barut_girardello(0.5),
        model_gilmore_perelomov(0.5),
    ]
