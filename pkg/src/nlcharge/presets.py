"""Parameter sweeps and the twelve figure presets.

A sweep evaluates a list of measures on states ``xi = sqrt(x)`` (real,
positive) along an ``x = |xi|^2`` grid.  Every figure preset pairs the
nonlinear curve with the ``f = 1`` baseline on the same grid.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter
from .nonclassicality import MeasureReport, check_measures, evaluate
from .nonlinearity import NonlinearityModel, get_model
from .numerics import TruncationPolicy
from .states import PARITIES, _check_radius, build_state

__all__ = ["SweepSpec", "Curve", "FigurePreset", "PRESETS", "run_sweep", "default_grid"]

INFINITE_GRID = (0.2, 20.0, 100)
UNIT_DISK_GRID = (0.0099, 0.99, 100)


def default_grid(model: NonlinearityModel) -> tuple[float, float, int]:
    """``(x_min, x_max, count)`` used by the presets for this model."""
    if math.isfinite(model.radius):
        r2 = model.radius**2
        return UNIT_DISK_GRID[0] * r2, UNIT_DISK_GRID[1] * r2, UNIT_DISK_GRID[2]
    return INFINITE_GRID


@dataclass(frozen=True)
class SweepSpec:
    """One curve: a model, a ladder, a grid in ``x`` and the measures to report."""

    model: str
    q: int
    parity: str = "full"
    x_min: float = INFINITE_GRID[0]
    x_max: float = INFINITE_GRID[1]
    count: int = INFINITE_GRID[2]
    spacing: str = "linear"
    measures: tuple[str, ...] = ("g",)
    params: tuple[tuple[str, float], ...] = ()
    output: str | None = None

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise InvalidParameter(f"parity must be one of {PARITIES}, got {self.parity!r}")
        if self.count < 2:
            raise InvalidParameter("a sweep needs at least 2 points")
        if self.spacing not in ("linear", "log"):
            raise InvalidParameter("spacing must be 'linear' or 'log'")
        if not 0 <= self.x_min < self.x_max:
            raise InvalidParameter(f"need 0 <= x_min < x_max, got {self.x_min}, {self.x_max}")
        if self.spacing == "log" and self.x_min <= 0:
            raise InvalidParameter("log spacing needs x_min > 0")
        object.__setattr__(self, "measures", tuple(check_measures(self.measures)))
        object.__setattr__(self, "params", tuple(sorted(dict(self.params).items())))

    def build_model(self) -> NonlinearityModel:
        return get_model(self.model, **dict(self.params))

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.x_min, self.x_max, self.count)
        return np.linspace(self.x_min, self.x_max, self.count)


def _point(model_name, params, q, parity, x, measures, policy) -> MeasureReport:
    model = get_model(model_name, **dict(params))
    state = build_state(math.sqrt(x), q, model, parity, policy)
    report = evaluate(state, measures)
    report.x = x  # the grid value, not |sqrt(x)|^2
    return report


def run_sweep(spec: SweepSpec, jobs: int = 1, policy: TruncationPolicy | None = None) -> list[MeasureReport]:
    """Evaluate ``spec`` on its grid; rows come back in ascending ``x``."""
    policy = policy or TruncationPolicy()
    model = spec.build_model()
    grid = spec.grid()
    _check_radius(float(grid[-1]), model, policy)
    args = [(spec.model, spec.params, spec.q, spec.parity, float(x), spec.measures, policy) for x in grid]
    if jobs <= 1:
        return [_point(*a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_point, *zip(*args), chunksize=max(1, len(args) // (4 * jobs))))


@dataclass(frozen=True)
class Curve:
    label: str
    style: str  # 'solid' or 'dashed'
    spec: SweepSpec


@dataclass(frozen=True)
class FigurePreset:
    id: int
    title: str
    measures: tuple[str, ...]
    curves: tuple[Curve, ...] = field(default_factory=tuple)


_MODEL_LABELS = {"poschl_teller": "f_PT", "hydrogen": "f_H", "barut_girardello": "f_BG"}


def _preset(fid, title, model, params, parity, measures) -> FigurePreset:
    nl = get_model(model, **params)
    x_min, x_max, count = default_grid(nl)
    common = dict(q=2, parity=parity, x_min=x_min, x_max=x_max, count=count, measures=tuple(measures))
    curves = (
        Curve("f=1", "dashed", SweepSpec("unit", **common)),
        Curve(_MODEL_LABELS[model], "solid", SweepSpec(model, params=tuple(params.items()), **common)),
    )
    return FigurePreset(fid, title, tuple(measures), curves)


PT = ("poschl_teller", {"nu": 3.0})
HY = ("hydrogen", {})
BG = ("barut_girardello", {"kappa": 0.5})

PRESETS: dict[int, FigurePreset] = {
    p.id: p
    for p in (
        _preset(1, "su(1,1) squeezing, Poschl-Teller charge states", *PT, "full", ["S_x1", "S_x2"]),
        _preset(2, "su(1,1) squeezing, even Poschl-Teller charge states", *PT, "even", ["S_x1", "S_x2"]),
        _preset(3, "generalized su(1,1) squeezing, even Poschl-Teller charge states", *PT, "even", ["S_X1", "S_X2"]),
        _preset(4, "two-mode correlation g, Poschl-Teller charge states", *PT, "full", ["g"]),
        _preset(5, "generalized correlation G, odd Poschl-Teller charge states", *PT, "odd", ["G"]),
        _preset(6, "Mandel parameter of mode 1, Poschl-Teller charge states", *PT, "full", ["Q_a1"]),
        _preset(7, "su(1,1) squeezing, hydrogen-like charge states", *HY, "full", ["S_x1", "S_x2"]),
        _preset(8, "generalized su(1,1) squeezing, even hydrogen-like charge states", *HY, "even", ["S_X1", "S_X2"]),
        _preset(9, "two-mode correlation g, odd hydrogen-like charge states", *HY, "odd", ["g"]),
        _preset(10, "generalized Mandel parameter of mode 1, even hydrogen-like states", *HY, "even", ["Q_A1"]),
        _preset(11, "two-mode correlation g, Barut-Girardello type charge states", *BG, "full", ["g"]),
        _preset(12, "generalized Mandel parameter of mode 2, Barut-Girardello type states", *BG, "full", ["Q_A2"]),
    )
}
