"""Exact feasibility of strict homogeneous systems ``A y > 0``.

By cone scaling, ``A y > 0`` is feasible iff ``A y >= 1`` is.  We decide the
latter through its Farkas alternative

    lambda >= 0,   A^T lambda = 0,   sum(lambda) = 1,

which has only ``d + 1`` equality rows.  A phase-1 simplex on that system
(Bland's rule, exact rationals) either finds such a ``lambda`` -- a
certificate that ``A y >= 1`` is infeasible -- or stops with a positive
phase-1 optimum whose dual multipliers ``(z, w0)`` give the witness
``y = -z / w0``.  The tableau is ``(d + 1) x (n + d + 1)``, so one pivot
costs O(n d) and the whole solve is linear in the number of rows for fixed d.
"""

from __future__ import annotations

from typing import Sequence

from .geometry import ONE, ZERO, DimensionError, Rat, as_rat

INFEASIBLE = None


class LPCycleError(RuntimeError):
    """Raised if the simplex exceeds its pivot budget (cannot happen under Bland's rule)."""


def _phase_one(rows: list[list], d: int):
    """Run phase 1 on the Farkas system; return (objective, duals, lambda)."""
    n = len(rows)
    ncols = n + d + 1
    # constraint k < d:  sum_i rows[i][k] * lam_i + r_k = 0
    # constraint d:      sum_i lam_i + r_d = 1
    tab = []
    for k in range(d):
        line = [rows[i][k] for i in range(n)]
        line.extend(ONE if j == k else ZERO for j in range(d + 1))
        line.append(ZERO)
        tab.append(line)
    line = [ONE] * n
    line.extend(ONE if j == d else ZERO for j in range(d + 1))
    line.append(ONE)
    tab.append(line)
    basis = [n + k for k in range(d + 1)]
    # reduced costs of min sum(r): c_j - c_B B^-1 A_j
    cost = [ZERO] * (ncols + 1)
    for k in range(d + 1):
        row = tab[k]
        for j in range(ncols + 1):
            cost[j] -= row[j]
    for k in range(d + 1):
        cost[n + k] = ZERO
    # cost[-1] holds -objective

    budget = 50 * (ncols + 10) ** 2
    for _ in range(budget):
        enter = -1
        for j in range(ncols):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for k in range(d + 1):
            a = tab[k][enter]
            if a > 0:
                ratio = tab[k][-1] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[k] < basis[leave])
                ):
                    best = ratio
                    leave = k
        if leave < 0:  # pragma: no cover - phase 1 is bounded below by zero
            raise LPCycleError("phase-1 objective unbounded")
        prow = tab[leave]
        piv = prow[enter]
        if piv != 1:
            inv = ONE / piv
            prow = [v * inv for v in prow]
            tab[leave] = prow
        nz = [j for j, v in enumerate(prow) if v != 0]
        for k in range(d + 1):
            if k == leave:
                continue
            row = tab[k]
            f = row[enter]
            if f != 0:
                for j in nz:
                    row[j] -= f * prow[j]
        f = cost[enter]
        for j in nz:
            cost[j] -= f * prow[j]
        basis[leave] = enter
    else:  # pragma: no cover
        raise LPCycleError("pivot budget exhausted")

    objective = -cost[-1]
    duals = [ONE - cost[n + k] for k in range(d + 1)]
    lam = [ZERO] * n
    for k, b in enumerate(basis):
        if b < n:
            lam[b] = tab[k][-1]
    return objective, duals, lam


def _normalise(rows: Sequence[Sequence], dim: int | None) -> tuple[list[list], int]:
    rows = [[as_rat(v) for v in r] for r in rows]
    if dim is None:
        if not rows:
            raise ValueError("dimension required when there are no rows")
        dim = len(rows[0])
    for r in rows:
        if len(r) != dim:
            raise DimensionError(f"row of length {len(r)} in a {dim}-dimensional system")
    return rows, dim


def strict_homogeneous_lp(rows: Sequence[Sequence], dim: int | None = None):
    """Find an exact rational ``y`` with ``row . y >= 1`` for every row.

    Returns the witness as a tuple, or ``INFEASIBLE`` (``None``) when the
    open cone ``{y : row . y > 0 for all rows}`` is empty.  With no rows any
    nonzero vector is returned.
    """
    rows, d = _normalise(rows, dim)
    if not rows:
        return tuple(ONE if j == 0 else ZERO for j in range(d))
    objective, duals, _ = _phase_one(rows, d)
    if objective == 0:
        return INFEASIBLE
    w0 = duals[d]
    y = tuple(-duals[k] / w0 for k in range(d))
    for r in rows:
        if sum((a * b for a, b in zip(r, y)), ZERO) < 1:  # pragma: no cover
            raise ArithmeticError("LP witness failed re-substitution")
    return y


def farkas_certificate(rows: Sequence[Sequence], dim: int | None = None):
    """Return ``lambda >= 0`` with ``sum(lambda) == 1`` and ``A^T lambda == 0``, or None.

    Exists exactly when :func:`strict_homogeneous_lp` reports infeasibility.
    """
    rows, d = _normalise(rows, dim)
    if not rows:
        return None
    objective, _, lam = _phase_one(rows, d)
    if objective != 0:
        return None
    return tuple(lam)


def is_strictly_feasible(rows: Sequence[Sequence], dim: int | None = None) -> bool:
    return strict_homogeneous_lp(rows, dim) is not INFEASIBLE


__all__ = [
    "INFEASIBLE",
    "LPCycleError",
    "Rat",
    "farkas_certificate",
    "is_strictly_feasible",
    "strict_homogeneous_lp",
]
