"""Association parameters for 2^k tables.

The central family is the *parity contrast*

    f(p) = sum_{even cells} h(p(t)) - sum_{odd cells} h(p(t))

for a monotone increasing continuous ``h``.  ``h = log`` gives the log
odds ratio (LOR), the identity gives the entry difference (DI), and
``h = exp`` gives EX.  The *aggregate contrast* ``d(S_even) - d(S_odd)``
compares the two parity-class totals through a strictly monotone nonlinear
``d``; it always signs like DI.  The Bahadur parameter is the order-k
standardized central cross-moment of the k category-1 indicators.

All of these are zero on constant tables, strictly increasing in the
(1, ..., 1) entry, and flip sign when the categories of any one variable
are swapped.  Only the contrasts built from conditional-invariant ``h``
(LOR) are unchanged under rescaling of conditional pairs.

Sums are accumulated with ``math.fsum`` because e.g. EX contrasts cancel
catastrophically (parity sums of exponentials of similar magnitude).
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvaluationError, InvalidTableError
from .table import BinaryTable, even_mask, slice_table

#: Relative threshold below which a parameter value reports sign 0.
SIGN_TAU = 1e-9


def _identity(x: float) -> float:
    return x


@dataclass(frozen=True)
class ContrastKind:
    """Parity contrast through a monotone increasing continuous ``h``.

    ``h`` must be a side-effect-free total function on the positive reals.
    """

    name: str
    h: Callable[[float], float]


@dataclass(frozen=True)
class AggregateContrastKind:
    """Contrast of the parity-class totals through a strictly monotone ``d``."""

    name: str
    d: Callable[[float], float]


@dataclass(frozen=True)
class BahadurKind:
    """Order-k standardized central cross-moment of the category-1 indicators."""

    name: str = "bahadur"


AssociationKind = Union[ContrastKind, AggregateContrastKind, BahadurKind]

LOR = ContrastKind("lor", math.log)
DI = ContrastKind("di", _identity)
EX = ContrastKind("ex", math.exp)
BAHADUR = BahadurKind()

_NAMED_KINDS = {"lor": LOR, "di": DI, "ex": EX, "bahadur": BAHADUR}


def resolve_kind(name: str) -> AssociationKind:
    """Map a kind name (``lor``, ``di``, ``ex``, ``bahadur``) to its kind object."""
    try:
        return _NAMED_KINDS[name.lower()]
    except KeyError:
        raise InvalidTableError(
            f"unknown association kind {name!r}; expected one of {sorted(_NAMED_KINDS)}"
        ) from None


def _h_values(entries: np.ndarray, h: Callable[[float], float]) -> list[float]:
    try:
        vals = [float(h(float(x))) for x in entries]
    except (OverflowError, ValueError) as exc:
        raise EvaluationError(f"h failed on a table entry: {exc}") from exc
    if not all(math.isfinite(v) for v in vals):
        raise EvaluationError("h produced a non-finite value on a table entry")
    return vals


def _contrast_arr(entries: np.ndarray, k: int, h: Callable[[float], float]) -> float:
    vals = _h_values(entries, h)
    even = even_mask(k)
    return math.fsum(v if e else -v for v, e in zip(vals, even))


def contrast(table: BinaryTable, h: Callable[[float], float]) -> float:
    """Parity contrast sum(h over even cells) - sum(h over odd cells)."""
    return _contrast_arr(table.entries, table.k, h)


def lor(table: BinaryTable) -> float:
    """Log odds ratio: the parity contrast of the log entries."""
    return contrast(table, math.log)


def di(table: BinaryTable) -> float:
    """Entry-difference parameter: the parity contrast of the entries themselves."""
    return contrast(table, _identity)


def ex(table: BinaryTable) -> float:
    """Parity contrast of the exponentials of the entries.

    Raises :class:`EvaluationError` on overflow rather than saturating.
    """
    return contrast(table, math.exp)


def odds_ratio(table: BinaryTable) -> float:
    """Product of even-parity entries over product of odd-parity entries.

    Computed as ``exp(lor)`` to avoid overflow of the raw products.
    """
    return math.exp(lor(table))


def recursive_contrast(table: BinaryTable, h: Callable[[float], float], i: int) -> float:
    """Contrast evaluated by the slice recursion along variable ``i``.

    ``f_k = f_{k-1}(V_i = 1 part) - f_{k-1}(V_i = 2 part)``, down to
    ``f_1 = h(p(1)) - h(p(2))``; equal to :func:`contrast` for every ``i``.
    """
    if table.k == 0:
        return _h_values(table.entries, h)[0]
    if table.k == 1:
        vals = _h_values(table.entries, h)
        return vals[0] - vals[1]
    upper = recursive_contrast(slice_table(table, i, 1), h, 1)
    lower = recursive_contrast(slice_table(table, i, 2), h, 1)
    return upper - lower


def _parity_totals(entries: np.ndarray, k: int) -> tuple[float, float]:
    even = even_mask(k)
    return float(entries[even].sum()), float(entries[~even].sum())


def _aggregate_arr(entries: np.ndarray, k: int, d: Callable[[float], float]) -> float:
    s_even, s_odd = _parity_totals(entries, k)
    try:
        a, b = float(d(s_even)), float(d(s_odd))
    except (OverflowError, ValueError) as exc:
        raise EvaluationError(f"d failed on a parity-class total: {exc}") from exc
    if not (math.isfinite(a) and math.isfinite(b)):
        raise EvaluationError("d produced a non-finite value on a parity-class total")
    return a - b


def aggregate_contrast(table: BinaryTable, d: Callable[[float], float]) -> float:
    """``d(sum over even cells) - d(sum over odd cells)``."""
    return _aggregate_arr(table.entries, table.k, d)


def _bahadur_z(entries: np.ndarray, k: int, absolute: bool = False) -> np.ndarray:
    """Per-cell product of standardized indicator factors (normalized weights)."""
    arr = (entries / entries.sum()).reshape((2,) * k)
    z = np.ones_like(arr)
    for axis in range(k):
        shape = [1] * k
        shape[axis] = 2
        mu = float(arr.sum(axis=tuple(a for a in range(k) if a != axis))[0])
        if not 0.0 < mu < 1.0:
            raise EvaluationError(f"degenerate marginal for variable {axis + 1}: mu={mu}")
        sigma = math.sqrt(mu * (1.0 - mu))
        factor = np.array([1.0 - mu, -mu])
        if absolute:
            factor = np.abs(factor)
        z = z * (factor.reshape(shape) / sigma)
    return arr * z


def _bahadur_arr(entries: np.ndarray, k: int) -> float:
    if k < 2:
        raise InvalidTableError(f"bahadur requires k >= 2, got k={k}")
    return float(math.fsum(_bahadur_z(entries, k).reshape(-1)))


def bahadur(table: BinaryTable) -> float:
    """Standardized central cross-moment of all k category-1 indicators.

    The table is normalized to sum 1; with ``X_i = 1`` when ``j_i = 1`` and
    0 otherwise, returns ``E[prod_i (X_i - mu_i) / sigma_i]``.
    """
    return _bahadur_arr(table.entries, table.k)


def evaluate(table: BinaryTable, kind: AssociationKind) -> float:
    """Evaluate any association kind on a table."""
    if isinstance(kind, ContrastKind):
        return contrast(table, kind.h)
    if isinstance(kind, AggregateContrastKind):
        return aggregate_contrast(table, kind.d)
    if isinstance(kind, BahadurKind):
        return bahadur(table)
    raise TypeError(f"not an association kind: {kind!r}")


def _magnitude_scale_arr(entries: np.ndarray, k: int, kind: AssociationKind) -> float:
    if isinstance(kind, ContrastKind):
        return math.fsum(abs(v) for v in _h_values(entries, kind.h))
    if isinstance(kind, AggregateContrastKind):
        s_even, s_odd = _parity_totals(entries, k)
        return abs(float(kind.d(s_even))) + abs(float(kind.d(s_odd)))
    if isinstance(kind, BahadurKind):
        return float(_bahadur_z(entries, k, absolute=True).sum())
    raise TypeError(f"not an association kind: {kind!r}")


def magnitude_scale(table: BinaryTable, kind: AssociationKind) -> float:
    """Scale against which a value of ``kind`` is compared for sign extraction.

    The sum of the absolute summands entering the parameter; a value within
    ``SIGN_TAU`` of zero relative to this scale reports sign 0.
    """
    return _magnitude_scale_arr(table.entries, table.k, kind)


def thresholded_sign(value: float, scale: float, tau: float = SIGN_TAU) -> int:
    """-1, 0 or +1; zero when ``|value| <= tau * scale``."""
    if abs(value) <= tau * scale:
        return 0
    return 1 if value > 0 else -1


def sign(table: BinaryTable, kind: AssociationKind, tau: float = SIGN_TAU) -> int:
    """Thresholded sign of ``kind`` on ``table``."""
    return thresholded_sign(evaluate(table, kind), magnitude_scale(table, kind), tau)
