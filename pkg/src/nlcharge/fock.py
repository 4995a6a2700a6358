"""Truncated two-mode Fock space and the operators acting on it.

States are stored on the box ``0 <= n1, n2 <= cutoff``.  Operators are small
expression trees over the primitives ``a_i``, ``a_i^dag``, ``n_i``, ``f(n_i)``
and diagonal functions of ``(n1, n2)``.  They can be applied directly to a
:class:`FockVector` (right-to-left, dropping amplitude pushed past the cutoff)
or densified into a sparse matrix for commutator checks.

Everything here is deliberately naive: it is the brute-force reference that
the closed ladder formulas in :mod:`nlcharge.nonclassicality` are tested
against.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .nonlinearity import NonlinearityModel

__all__ = [
    "FockVector",
    "OperatorExpr",
    "apply",
    "expectation",
    "to_matrix",
    "to_dense",
    "commutator",
    "commutator_residual",
    "a",
    "adag",
    "num",
    "f_of",
    "identity",
    "diagonal",
    "A",
    "Adag",
    "charge",
    "k_minus",
    "k_plus",
    "k0",
    "K_minus",
    "K_plus",
    "build_K0",
    "build_g",
    "quadratures",
    "MAX_DENSE_CUTOFF",
]

MAX_DENSE_CUTOFF = 64


@dataclass(frozen=True)
class FockVector:
    """Complex amplitudes on the two-mode box ``(cutoff+1) x (cutoff+1)``.

    ``amplitudes[n1, n2]`` is the coefficient of ``|n1, n2>``.
    ``truncation_loss`` accumulates the squared norm dropped at the box edge
    by the operator applications that produced this vector.
    """

    cutoff: int
    amplitudes: np.ndarray
    truncation_loss: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.cutoff + 1, self.cutoff + 1):
            raise ValueError(f"amplitudes must have shape {(self.cutoff + 1,) * 2}, got {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zeros(cls, cutoff: int) -> "FockVector":
        return cls(cutoff, np.zeros((cutoff + 1, cutoff + 1), dtype=complex))

    @classmethod
    def basis(cls, n1: int, n2: int, cutoff: int) -> "FockVector":
        amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        amps[n1, n2] = 1.0
        return cls(cutoff, amps)

    @classmethod
    def from_dict(cls, entries: dict, cutoff: int) -> "FockVector":
        amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        for (n1, n2), value in entries.items():
            if not (0 <= n1 <= cutoff and 0 <= n2 <= cutoff):
                raise ValueError(f"|{n1},{n2}> lies outside the cutoff {cutoff}")
            amps[n1, n2] += value
        return cls(cutoff, amps)

    def to_dict(self, atol: float = 0.0) -> dict:
        """Sparse view ``{(n1, n2): amplitude}`` of the entries above ``atol``."""
        idx = np.argwhere(np.abs(self.amplitudes) > atol)
        return {(int(i), int(j)): complex(self.amplitudes[i, j]) for i, j in idx}

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def vdot(self, other: "FockVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __add__(self, other: "FockVector") -> "FockVector":
        return FockVector(
            self.cutoff, self.amplitudes + other.amplitudes, self.truncation_loss + other.truncation_loss
        )

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other * -1

    def __mul__(self, scalar) -> "FockVector":
        return FockVector(self.cutoff, self.amplitudes * scalar, self.truncation_loss * abs(scalar) ** 2)

    __rmul__ = __mul__


class OperatorExpr:
    """Base class of operator expressions.

    ``A * B`` composes (``B`` acts first), ``A + B`` sums, numbers scale.
    """

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = other * identity()
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return _Sum(_terms(self) + _terms(other))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return _Scaled(-1.0, self)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return _Scaled(complex(other), self)
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return _Product(_factors(self) + _factors(other))

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return _Scaled(complex(other), self)
        return NotImplemented

    def dag(self) -> "OperatorExpr":
        raise NotImplementedError

    def _act(self, amps: np.ndarray) -> tuple[np.ndarray, float]:
        raise NotImplementedError

    def _matrix(self, cutoff: int, dtype) -> sp.csr_matrix:
        raise NotImplementedError


def _terms(op):
    return list(op.terms) if isinstance(op, _Sum) else [op]


def _factors(op):
    return list(op.factors) if isinstance(op, _Product) else [op]


def _embed(single: sp.spmatrix, mode: int, cutoff: int, dtype) -> sp.csr_matrix:
    eye = sp.identity(cutoff + 1, format="csr", dtype=dtype)
    return sp.kron(single, eye, format="csr") if mode == 1 else sp.kron(eye, single, format="csr")


class _Primitive(OperatorExpr):
    def __init__(self, kind: str, mode: int = 0, model: NonlinearityModel | None = None):
        if kind not in ("a", "adag", "n", "f", "id"):
            raise ValueError(kind)
        if kind != "id" and mode not in (1, 2):
            raise ValueError("mode must be 1 or 2")
        self.kind, self.mode, self.model = kind, mode, model

    def __repr__(self):
        if self.kind == "id":
            return "I"
        if self.kind == "f":
            return f"f{self.mode}[{self.model.describe()}]"
        return f"{self.kind}{self.mode}"

    def dag(self):
        swap = {"a": "adag", "adag": "a"}
        return _Primitive(swap.get(self.kind, self.kind), self.mode, self.model)

    def _act(self, amps):
        if self.kind == "id":
            return amps.copy(), 0.0
        work = amps if self.mode == 1 else amps.T
        size = work.shape[0]
        n = np.arange(size)
        out = np.zeros_like(work)
        loss = 0.0
        if self.kind == "a":
            out[:-1] = np.sqrt(n[1:])[:, None] * work[1:]
        elif self.kind == "adag":
            out[1:] = np.sqrt(n[1:])[:, None] * work[:-1]
            loss = float(size * np.sum(np.abs(work[-1]) ** 2))
        elif self.kind == "n":
            out = n[:, None] * work
        else:
            out = np.asarray(self.model.f(n))[:, None] * work
        return (out if self.mode == 1 else out.T), loss

    def _matrix(self, cutoff, dtype):
        if self.kind == "id":
            return sp.identity((cutoff + 1) ** 2, format="csr", dtype=dtype)
        n = np.arange(cutoff + 1)
        root = np.sqrt(n[1:].astype(np.longdouble))
        if self.kind == "a":
            single = sp.diags(root.astype(dtype), 1)
        elif self.kind == "adag":
            single = sp.diags(root.astype(dtype), -1)
        elif self.kind == "n":
            single = sp.diags(n.astype(dtype), 0)
        else:
            single = sp.diags(np.asarray(self.model.f(n)).astype(dtype), 0)
        return _embed(single.astype(dtype), self.mode, cutoff, dtype)


class _Diagonal(OperatorExpr):
    def __init__(self, fn: Callable[[np.ndarray, np.ndarray], np.ndarray], label: str, hermitian: bool = True):
        self.fn, self.label, self.hermitian = fn, label, hermitian

    def __repr__(self):
        return self.label

    def dag(self):
        if self.hermitian:
            return self
        fn = self.fn
        return _Diagonal(lambda n1, n2: np.conj(fn(n1, n2)), self.label + "^dag")

    def _values(self, cutoff):
        n1, n2 = np.meshgrid(np.arange(cutoff + 1), np.arange(cutoff + 1), indexing="ij")
        return np.broadcast_to(np.asarray(self.fn(n1, n2)), n1.shape)

    def _act(self, amps):
        return self._values(amps.shape[0] - 1) * amps, 0.0

    def _matrix(self, cutoff, dtype):
        return sp.diags(self._values(cutoff).ravel().astype(dtype), 0, format="csr")


class _Scaled(OperatorExpr):
    def __init__(self, coeff: complex, op: OperatorExpr):
        self.coeff, self.op = coeff, op

    def __repr__(self):
        return f"{self.coeff}*({self.op!r})"

    def dag(self):
        return _Scaled(np.conj(self.coeff), self.op.dag())

    def _act(self, amps):
        out, loss = self.op._act(amps)
        return self.coeff * out, abs(self.coeff) ** 2 * loss

    def _matrix(self, cutoff, dtype):
        return self.op._matrix(cutoff, dtype) * np.asarray(self.coeff).astype(dtype)


class _Sum(OperatorExpr):
    def __init__(self, terms):
        self.terms = tuple(terms)

    def __repr__(self):
        return " + ".join(map(repr, self.terms))

    def dag(self):
        return _Sum([t.dag() for t in self.terms])

    def _act(self, amps):
        total = np.zeros_like(amps)
        loss = 0.0
        for t in self.terms:
            out, lt = t._act(amps)
            total = total + out
            loss += lt
        return total, loss

    def _matrix(self, cutoff, dtype):
        mats = [t._matrix(cutoff, dtype) for t in self.terms]
        return sum(mats[1:], mats[0]).tocsr()


class _Product(OperatorExpr):
    def __init__(self, factors):
        self.factors = tuple(factors)

    def __repr__(self):
        return " ".join(f"({f!r})" if isinstance(f, _Sum) else repr(f) for f in self.factors)

    def dag(self):
        return _Product([f.dag() for f in reversed(self.factors)])

    def _act(self, amps):
        loss = 0.0
        for factor in reversed(self.factors):
            amps, lt = factor._act(amps)
            loss += lt
        return amps, loss

    def _matrix(self, cutoff, dtype):
        mat = self.factors[-1]._matrix(cutoff, dtype)
        for factor in reversed(self.factors[:-1]):
            mat = factor._matrix(cutoff, dtype) @ mat
        return mat.tocsr()


def apply(op: OperatorExpr, v: FockVector) -> FockVector:
    """Apply ``op`` to ``v``; weight pushed past the cutoff is dropped and
    added to ``truncation_loss`` of the result."""
    out, loss = op._act(np.asarray(v.amplitudes))
    return FockVector(v.cutoff, out, v.truncation_loss + loss)


def expectation(op: OperatorExpr, v: FockVector) -> complex:
    """``<v|op|v>`` (no normalization by ``<v|v>``)."""
    return v.vdot(apply(op, v))


def to_matrix(op: OperatorExpr, cutoff: int, dtype=complex) -> sp.csr_matrix:
    """Sparse matrix of ``op`` on the box, basis index ``n1*(cutoff+1) + n2``.

    ``dtype=np.clongdouble`` gives extended-precision products where the
    platform supports them.
    """
    return op._matrix(cutoff, dtype).tocsr()


def to_dense(op: OperatorExpr, cutoff: int) -> np.ndarray:
    if cutoff > MAX_DENSE_CUTOFF:
        raise ValueError(f"dense matrices are limited to cutoff <= {MAX_DENSE_CUTOFF}")
    return to_matrix(op, cutoff).toarray()


def commutator(x: OperatorExpr, y: OperatorExpr) -> OperatorExpr:
    return x * y - y * x


def commutator_residual(
    a_op: OperatorExpr, b_op: OperatorExpr, c_op: OperatorExpr, cutoff: int, margin: int = 2
) -> float:
    """Largest entry of ``([A, B] - C) v_k`` over interior basis vectors.

    Interior means ``n1, n2 <= cutoff - margin``; columns closer to the edge
    are distorted by truncation and skipped.  Products are formed in
    extended precision so that large matrix elements (~1e7 for quadratic
    spectra at cutoff 24) do not swamp the residual with rounding.
    """
    if margin < 2:
        raise ValueError("margin must be at least 2")
    if cutoff - margin < 0:
        raise ValueError("cutoff too small for the requested margin")
    am, bm, cm = (to_matrix(o, cutoff, np.clongdouble) for o in (a_op, b_op, c_op))
    resid = (am @ bm - bm @ am - cm).tocsc()
    n1, n2 = np.meshgrid(np.arange(cutoff + 1), np.arange(cutoff + 1), indexing="ij")
    interior = np.flatnonzero(((n1 <= cutoff - margin) & (n2 <= cutoff - margin)).ravel())
    block = resid[:, interior]
    if block.nnz == 0:
        return 0.0
    return float(np.max(np.abs(block.data.astype(np.clongdouble))))


def a(mode: int) -> OperatorExpr:
    return _Primitive("a", mode)


def adag(mode: int) -> OperatorExpr:
    return _Primitive("adag", mode)


def num(mode: int) -> OperatorExpr:
    return _Primitive("n", mode)


def f_of(mode: int, model: NonlinearityModel) -> OperatorExpr:
    return _Primitive("f", mode, model)


def identity() -> OperatorExpr:
    return _Primitive("id")


def diagonal(fn, label: str = "D") -> OperatorExpr:
    """Operator diagonal in the number basis with eigenvalue ``fn(n1, n2)``."""
    return _Diagonal(fn, label)


def A(mode: int, model: NonlinearityModel) -> OperatorExpr:
    """Deformed annihilator ``a_i f(n_i)``."""
    return a(mode) * f_of(mode, model)


def Adag(mode: int, model: NonlinearityModel) -> OperatorExpr:
    return f_of(mode, model) * adag(mode)


def charge() -> OperatorExpr:
    return num(1) - num(2)


def k_minus() -> OperatorExpr:
    return a(1) * a(2)


def k_plus() -> OperatorExpr:
    return adag(1) * adag(2)


def k0() -> OperatorExpr:
    return 0.5 * (num(1) + num(2) + identity())


def K_minus(model: NonlinearityModel) -> OperatorExpr:
    return A(1, model) * A(2, model)


def K_plus(model: NonlinearityModel) -> OperatorExpr:
    return Adag(1, model) * Adag(2, model)


def build_K0(model: NonlinearityModel) -> OperatorExpr:
    """``K0 = 1/2 [e(n1+1) e(n2+1) - e(n1) e(n2)]`` with ``e(n) = n f(n)^2``."""
    e = model.energy

    def fn(n1, n2):
        return 0.5 * (e(n1 + 1) * e(n2 + 1) - e(n1) * e(n2))

    return _Diagonal(fn, f"K0[{model.describe()}]")


def build_g(model: NonlinearityModel) -> OperatorExpr:
    """Diagonal ``g(n1, n2)`` with ``[K0, K-] = -K- g`` and ``[K0, K+] = g K+``.

    ``g = 1/2 [e(n1+1)e(n2+1) - 2 e(n1)e(n2) + e(n1-1)e(n2-1)]``; the last
    product is taken as 0 when either ``n_i = 0`` (K- annihilates those
    states, so the value there is immaterial).
    """
    e = model.energy

    def fn(n1, n2):
        low = np.where((n1 > 0) & (n2 > 0), e(np.maximum(n1 - 1, 0)) * e(np.maximum(n2 - 1, 0)), 0.0)
        return 0.5 * (e(n1 + 1) * e(n2 + 1) - 2.0 * e(n1) * e(n2) + low)

    return _Diagonal(fn, f"g[{model.describe()}]")


def quadratures(model: NonlinearityModel | None = None) -> dict[str, OperatorExpr]:
    """All quadrature operators used by the squeezing measures.

    Lower-case names use the bosonic operators, upper-case ones the deformed
    ``A_i`` (and need ``model``).
    """
    ops = {
        "y1": 0.5 * (adag(1) + a(1)),
        "y2": 0.5j * (adag(1) - a(1)),
        "z1": 0.5 * (adag(2) + a(2)),
        "z2": 0.5j * (adag(2) - a(2)),
        "x1": 0.5 * (k_plus() + k_minus()),
        "x2": 0.5j * (k_plus() - k_minus()),
    }
    s = 1 / np.sqrt(2.0)
    ops["w1"] = s * (ops["y1"] + ops["z1"])
    ops["w2"] = s * (ops["y2"] + ops["z2"])
    if model is not None:
        ops["Y1"] = 0.5 * (Adag(1, model) + A(1, model))
        ops["Y2"] = 0.5j * (Adag(1, model) - A(1, model))
        ops["Z1"] = 0.5 * (Adag(2, model) + A(2, model))
        ops["Z2"] = 0.5j * (Adag(2, model) - A(2, model))
        ops["W1"] = s * (ops["Y1"] + ops["Z1"])
        ops["W2"] = s * (ops["Y2"] + ops["Z2"])
        ops["X1"] = 0.5 * (K_plus(model) + K_minus(model))
        ops["X2"] = 0.5j * (K_plus(model) - K_minus(model))
    return ops
