"""Summhammer-Rauch-Tuppinger neutron interferometry model.

An absorber of transmissivity ``a`` in one interferometer path interpolates
between a pure interference measurement (``a = 1``) and a pure which-path
measurement (``a = 0``).  In between, the detector statistics are described by
a three-outcome POVM that acts as a joint nonideal measurement of the path and
interference observables.  This module builds the two standard PVMs, the
absorber POVM, its bivariate arrangement, and the entropy trade-off data for a
grid of absorber settings.

Representation choice: the two-dimensional path space uses the basis
``|+>`` (open path) and ``|->`` (absorber path).  Any unitarily equivalent
representation yields identical entropy curves.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
from scipy.special import xlogy

from .errors import InternalConsistencyError, ValidationError
from .measures import PovmMeasure, PvmMeasure
from .nonideality import NonidealityMatrix, check_martens, solve_nonideality
from .operators import DEFAULT_TOL

#: Agreement required between the generic solver pipeline and the closed-form
#: entropies during a sweep.
PIPELINE_AGREEMENT_TOL = 1e-8


@dataclass(frozen=True)
class SrtConfig:
    """Absorber transmissivity and interferometer phase."""

    absorber: float
    phase: float = 0.0

    def __post_init__(self):
        if not 0.0 <= float(self.absorber) <= 1.0:
            raise ValidationError(
                f"absorber transmissivity must lie in [0, 1], got {self.absorber!r}"
            )
        object.__setattr__(self, "absorber", float(self.absorber))
        object.__setattr__(self, "phase", float(self.phase))


def path_pvm(tol: float = DEFAULT_TOL) -> PvmMeasure:
    """Which-path observable: projectors onto the two interferometer paths."""
    p_plus = np.diag([1.0, 0.0]).astype(complex)
    p_minus = np.diag([0.0, 1.0]).astype(complex)
    return PvmMeasure([p_plus, p_minus], labels=("+", "-"), tol=tol)


def interference_pvm(chi: float = 0.0, tol: float = DEFAULT_TOL) -> PvmMeasure:
    """Interference observable at phase ``chi``.

    Projectors onto ``(|+> +- exp(i chi)|->) / sqrt(2)``; both overlap each
    path projector with weight one half for every phase.
    """
    phase = np.exp(1j * float(chi))
    q1_vec = np.array([1.0, phase]) / np.sqrt(2.0)
    q2_vec = np.array([1.0, -phase]) / np.sqrt(2.0)
    q1 = np.outer(q1_vec, q1_vec.conj())
    q2 = np.outer(q2_vec, q2_vec.conj())
    return PvmMeasure([q1, q2], labels=("1", "2"), tol=tol)


def srt_povm(config: SrtConfig, tol: float = DEFAULT_TOL) -> PovmMeasure:
    """Three-outcome POVM of the absorber experiment.

    Outcomes 1 and 2 are the interferometer detectors; outcome 3 collects the
    absorbed neutrons.  At ``a = 1`` the family reduces to the interference
    PVM plus a zero element, at ``a = 0`` to a split path measurement.
    """
    a = config.absorber
    p = path_pvm(tol)
    q = interference_pvm(config.phase, tol)
    p_plus, p_minus = p.elements
    q_diff = q.elements[0] - q.elements[1]
    root = np.sqrt(a)
    m1 = 0.5 * (p_plus + a * p_minus + root * q_diff)
    m2 = 0.5 * (p_plus + a * p_minus - root * q_diff)
    m3 = (1.0 - a) * p_minus
    return PovmMeasure([m1, m2, m3], labels=("1", "2", "3"), tol=tol)


def srt_bivariate(config: SrtConfig, tol: float = DEFAULT_TOL) -> PovmMeasure:
    """Bivariate arrangement of the absorber POVM.

    Index ``(m, n)`` with ``m`` path-like and ``n`` interference-like: the two
    detector outcomes occupy the ``m = '+'`` row and the absorption outcome is
    split evenly over the ``m = '-'`` row.  The ``n``-marginal is a smeared
    interference observable and the ``m``-marginal a smeared path observable.
    """
    povm = srt_povm(config, tol)
    m1, m2, m3 = povm.elements
    elements = [m1, m2, 0.5 * m3, 0.5 * m3]
    labels = (("+", "1"), ("+", "2"), ("-", "1"), ("-", "2"))
    return PovmMeasure(elements, labels=labels, index_shape=(2, 2), tol=tol)


def path_nonideality_matrix(absorber: float) -> NonidealityMatrix:
    """Closed-form smearing of the path observable at a given transmissivity."""
    a = float(absorber)
    return NonidealityMatrix(
        [[1.0, a], [0.0, 1.0 - a]],
        row_labels=("+", "-"),
        col_labels=("+", "-"),
    )


def interference_nonideality_matrix(absorber: float) -> NonidealityMatrix:
    """Closed-form smearing of the interference observable."""
    root = np.sqrt(float(absorber))
    return NonidealityMatrix(
        np.array([[1.0 + root, 1.0 - root], [1.0 - root, 1.0 + root]]) / 2.0,
        row_labels=("1", "2"),
        col_labels=("1", "2"),
    )


def path_nonideality_entropy(absorber: float) -> float:
    """Closed-form row entropy of the path smearing matrix."""
    a = float(absorber)
    return float(0.5 * (xlogy(1.0 + a, 1.0 + a) - xlogy(a, a)))


def interference_nonideality_entropy(absorber: float) -> float:
    """Closed-form row entropy of the interference smearing matrix."""
    root = np.sqrt(float(absorber))
    return float(
        0.5
        * (
            2.0 * np.log(2.0)
            - xlogy(1.0 + root, 1.0 + root)
            - xlogy(1.0 - root, 1.0 - root)
        )
    )


class TradeoffPoint(NamedTuple):
    """One row of the complementarity trade-off table."""

    absorber: float
    j_lambda: float
    j_mu: float
    bound: float
    slack: float


def _tradeoff_point(absorber: float, chi: float, tol: float) -> TradeoffPoint:
    config = SrtConfig(absorber, chi)
    bivariate = srt_bivariate(config, tol)
    path_marginal = bivariate.marginal(keep=0)
    interference_marginal = bivariate.marginal(keep=1)
    target_path = path_pvm(tol)
    target_interference = interference_pvm(chi, tol)

    lam = solve_nonideality(path_marginal, target_path, tol)
    mu = solve_nonideality(interference_marginal, target_interference, tol)
    report = check_martens(lam, mu, target_path, target_interference, tol)

    drift = max(
        abs(report.j_lambda - path_nonideality_entropy(absorber)),
        abs(report.j_mu - interference_nonideality_entropy(absorber)),
    )
    if drift > PIPELINE_AGREEMENT_TOL:
        raise InternalConsistencyError(
            f"solver pipeline drifted {drift:.3e} from the closed-form entropies "
            f"at absorber={absorber!r}"
        )
    return TradeoffPoint(
        absorber=absorber,
        j_lambda=report.j_lambda,
        j_mu=report.j_mu,
        bound=report.bound,
        slack=report.slack,
    )


def tradeoff_sweep(
    grid: Iterable[float],
    chi: float = 0.0,
    *,
    tol: float = DEFAULT_TOL,
    jobs: int | None = None,
) -> list[TradeoffPoint]:
    """Entropy trade-off across a grid of absorber settings.

    Each grid point is evaluated through the generic pipeline (bivariate
    arrangement, decomposition solver, row entropy) and cross-checked against
    the closed-form entropies; disagreement beyond ``PIPELINE_AGREEMENT_TOL``
    raises.  Output order follows the input grid regardless of scheduling.

    Parameters
    ----------
    grid : iterable of float
        Absorber transmissivities, each in [0, 1].
    chi : float
        Interferometer phase; the entropies are phase-independent.
    jobs : int, optional
        Worker-pool width for the sweep; ``None`` or 1 runs serially.
    """
    values = [float(a) for a in grid]
    for a in values:
        if not 0.0 <= a <= 1.0:
            raise ValidationError(f"grid value {a!r} outside [0, 1]")
    if jobs is not None and jobs > 1:
        with ThreadPoolExecutor(max_workers=int(jobs)) as pool:
            return list(pool.map(lambda a: _tradeoff_point(a, chi, tol), values))
    return [_tradeoff_point(a, chi, tol) for a in values]
