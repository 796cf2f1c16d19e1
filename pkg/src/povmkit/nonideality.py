"""Nonideal-measurement relations between measures and the Martens bound.

One measure is a nonideal (smeared) version of another when every observed
element decomposes as ``M_i = sum_j lambda_ij N_j`` with a column-stochastic
nonnegative matrix ``lambda``.  This module solves for that matrix, quantifies
the smearing with an average row entropy, and checks the state-independent
complementarity bound on joint nonideal measurements of two maximal PVMs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import xlogy

from .errors import (
    DimensionMismatchError,
    InternalConsistencyError,
    UnsupportedMeasureError,
    ValidationError,
)
from .measures import PovmMeasure, PvmMeasure
from .operators import DEFAULT_TOL

#: Residual above which a solved decomposition is flagged as *not* an exact
#: nonideal-measurement relation.  Repo convention, configurable per call.
DECOMPOSITION_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class NonidealityMatrix:
    """Column-stochastic nonnegative matrix relating two measures.

    ``matrix[i, j]`` is the weight of target outcome ``j`` inside observed
    outcome ``i``; each column sums to one.  ``residual`` is the
    Hilbert-Schmidt misfit of the decomposition that produced the matrix and
    ``unique`` records whether the target elements determined it uniquely.
    """

    matrix: np.ndarray
    row_labels: tuple = ()
    col_labels: tuple = ()
    residual: float = 0.0
    unique: bool = True
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValidationError("nonideality matrix must be a non-empty 2-D array")
        if float(arr.min()) < -self.tol:
            raise ValidationError(
                f"nonideality matrix has negative entry {arr.min():.3e}"
            )
        column_sums = arr.sum(axis=0)
        if float(np.max(np.abs(column_sums - 1.0))) > max(self.tol, self.tol * arr.shape[0]):
            raise ValidationError(
                f"columns must sum to 1, got {column_sums.tolist()}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)
        if self.row_labels and len(self.row_labels) != arr.shape[0]:
            raise ValidationError("row_labels do not match the matrix shape")
        if self.col_labels and len(self.col_labels) != arr.shape[1]:
            raise ValidationError("col_labels do not match the matrix shape")

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def is_exact(self) -> bool:
        """True when the decomposition residual is below the exactness threshold."""
        return self.residual <= DECOMPOSITION_TOL


def apply_nonideality(target: PovmMeasure, matrix, labels=None, *, tol: float = DEFAULT_TOL) -> PovmMeasure:
    """Build the smeared measure ``M_i = sum_j matrix[i, j] N_j`` from a target."""
    weights = np.asarray(matrix, dtype=float)
    if weights.ndim != 2 or weights.shape[1] != target.n_outcomes:
        raise DimensionMismatchError(
            f"matrix shape {weights.shape} does not match {target.n_outcomes} target outcomes"
        )
    elements = np.einsum("ij,jab->iab", weights, target.stack())
    return PovmMeasure(elements, labels=labels, tol=tol)


def _stochastic_least_squares(gram: np.ndarray, cross: np.ndarray) -> np.ndarray:
    """Minimize the decomposition misfit over column-stochastic nonnegative matrices.

    Primal active-set iteration on the quadratic program with Hessian
    ``I (x) gram``, equality constraints fixing each column sum to one, and
    nonnegativity bounds.  Problem sizes here are tiny (at most a few dozen
    unknowns), so dense KKT solves are exact enough.
    """
    n_rows, n_cols = cross.shape
    n_vars = n_rows * n_cols
    hessian = np.kron(np.eye(n_rows), gram)
    linear = cross.reshape(-1)
    eq = np.zeros((n_cols, n_vars))
    for j in range(n_cols):
        eq[j, j::n_cols] = 1.0

    x = np.full(n_vars, 1.0 / n_rows)
    active: set[int] = set()
    for _ in range(200):
        free = np.array(sorted(set(range(n_vars)) - active), dtype=int)
        kkt = np.zeros((free.size + n_cols, free.size + n_cols))
        kkt[: free.size, : free.size] = hessian[np.ix_(free, free)]
        kkt[: free.size, free.size:] = eq[:, free].T
        kkt[free.size:, : free.size] = eq[:, free]
        gradient = hessian @ x - linear
        rhs = np.concatenate([-gradient[free], np.zeros(n_cols)])
        solution, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
        step = np.zeros(n_vars)
        step[free] = solution[: free.size]
        multipliers = solution[free.size:]

        if float(np.max(np.abs(step), initial=0.0)) <= 1e-12:
            if not active:
                break
            bound_multipliers = gradient + eq.T @ multipliers
            worst = min(active, key=lambda k: bound_multipliers[k])
            if bound_multipliers[worst] >= -1e-10:
                break
            active.remove(worst)
            continue

        alpha = 1.0
        blocking = None
        for k in free:
            if step[k] < -1e-14:
                limit = -x[k] / step[k]
                if limit < alpha:
                    alpha = limit
                    blocking = int(k)
        x = x + alpha * step
        if blocking is not None:
            x[blocking] = 0.0
            active.add(blocking)
        elif alpha >= 1.0:
            # Full step taken with no blocking bound; loop once more to
            # confirm stationarity or release an active bound.
            continue
    return np.clip(x, 0.0, None).reshape(n_rows, n_cols)


def solve_nonideality(
    observed: PovmMeasure, target: PovmMeasure, tol: float = DEFAULT_TOL
) -> NonidealityMatrix:
    """Find the nonideality matrix expressing ``observed`` in terms of ``target``.

    Minimizes ``sum_i || M_i - sum_j lambda_ij N_j ||**2`` in Hilbert-Schmidt
    norm subject to ``lambda >= 0`` and unit column sums.  When an exact
    decomposition exists and the target elements are linearly independent, the
    exact matrix is recovered (the unconstrained Gram solve already satisfies
    the constraints); otherwise a constrained quadratic program supplies the
    best feasible approximation.  A residual above the exactness threshold
    flags the result as not being a nonideal measurement of the target.

    Returns
    -------
    NonidealityMatrix
        With ``residual`` the Hilbert-Schmidt misfit and ``unique`` False when
        linearly dependent targets left the minimum-norm choice arbitrary.
    """
    if observed.dim != target.dim:
        raise DimensionMismatchError(
            f"observed dimension {observed.dim} does not match target dimension {target.dim}"
        )
    observed_stack = observed.stack()
    target_stack = target.stack()
    gram = np.real(np.einsum("jab,kba->jk", target_stack, target_stack))
    cross = np.real(np.einsum("iab,jba->ij", observed_stack, target_stack))

    rank = int(np.linalg.matrix_rank(gram))
    unique = rank == target.n_outcomes

    candidate = cross @ np.linalg.pinv(gram, hermitian=True)
    feasible = (
        float(candidate.min()) >= -tol
        and float(np.max(np.abs(candidate.sum(axis=0) - 1.0))) <= tol
    )
    if not feasible:
        candidate = _stochastic_least_squares(gram, cross)

    misfit = observed_stack - np.einsum("ij,jab->iab", candidate, target_stack)
    residual = float(np.linalg.norm(misfit))
    return NonidealityMatrix(
        candidate,
        row_labels=tuple(observed.labels),
        col_labels=tuple(target.labels),
        residual=residual,
        unique=unique,
        tol=tol,
    )


def nonideality_entropy(lam) -> float:
    """Average row entropy of a nonideality matrix (0 for an ideal relation).

    Entries are normalized within each row before taking entropies; zero
    entries and all-zero rows contribute nothing, keeping the measure
    continuous at degenerate parameter values.  The averaging constant is the
    number of observed outcomes (matrix rows).
    """
    matrix = lam.matrix if isinstance(lam, NonidealityMatrix) else np.asarray(lam, dtype=float)
    if matrix.ndim != 2 or matrix.size == 0:
        raise ValidationError("nonideality entropy requires a non-empty 2-D matrix")
    clipped = np.clip(matrix, 0.0, None)
    row_sums = clipped.sum(axis=1)
    entropy = xlogy(row_sums, row_sums).sum() - xlogy(clipped, clipped).sum()
    return float(max(entropy, 0.0) / matrix.shape[0])


def _require_maximal_pvm(measure: PovmMeasure, name: str, tol: float) -> None:
    if not isinstance(measure, PvmMeasure):
        raise UnsupportedMeasureError(f"{name} must be a PVM")
    if not measure.is_maximal(tol):
        raise UnsupportedMeasureError(
            f"{name} is not maximal (an element has rank above one); "
            "only maximal PVMs are supported"
        )


def martens_bound(pvm1: PvmMeasure, pvm2: PvmMeasure, tol: float = DEFAULT_TOL) -> float:
    """State-independent lower bound on joint-smearing entropies of two maximal PVMs.

    Returns ``-ln(max_{mn} Tr(P_m Q_n))``.  Identical PVMs give 0; mutually
    unbiased qubit PVMs give ``ln 2``.
    """
    _require_maximal_pvm(pvm1, "pvm1", tol)
    _require_maximal_pvm(pvm2, "pvm2", tol)
    if pvm1.dim != pvm2.dim:
        raise DimensionMismatchError("PVMs must act on the same space")
    overlaps = np.real(np.einsum("mab,nba->mn", pvm1.stack(), pvm2.stack()))
    peak = float(overlaps.max())
    if peak <= 0.0:
        raise InternalConsistencyError("maximal PVMs cannot have all-zero overlaps")
    return float(-np.log(min(peak, 1.0)))


@dataclass(frozen=True)
class MartensReport:
    """Entropies, bound and slack of one joint nonideal measurement."""

    j_lambda: float
    j_mu: float
    bound: float
    slack: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "slack", self.j_lambda + self.j_mu - self.bound)


def check_martens(
    lam: NonidealityMatrix,
    mu: NonidealityMatrix,
    pvm1: PvmMeasure,
    pvm2: PvmMeasure,
    tol: float = DEFAULT_TOL,
) -> MartensReport:
    """Evaluate the complementarity inequality for one bivariate arrangement.

    ``lam`` must relate the first marginal to ``pvm1`` and ``mu`` the second
    marginal to ``pvm2``.  The returned slack is nonnegative (within ``tol``)
    whenever the two matrices really come from the marginals of one bivariate
    POVM; a violation indicates the precondition does not hold and raises.
    """
    report = MartensReport(
        j_lambda=nonideality_entropy(lam),
        j_mu=nonideality_entropy(mu),
        bound=martens_bound(pvm1, pvm2, tol),
    )
    if report.slack < -tol:
        raise InternalConsistencyError(
            f"joint-measurement bound violated (slack {report.slack:.3e}); "
            "the matrices do not come from one bivariate arrangement"
        )
    return report
