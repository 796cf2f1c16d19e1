"""POVM and PVM measures, the generalized Born rule, instrument models and tomography.

A measure is an ordered family of positive operators summing to the identity.
Validation is eager: an invalid measure cannot exist as a value, which lets
every downstream computation presume the decomposition-of-identity property.
Multi-outcome-variable arrangements (bivariate, quadrivariate) are stored flat
together with an ``index_shape``; marginalization is an index sum.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import (
    DimensionMismatchError,
    IncompleteMeasureError,
    InfeasibleProbabilitiesError,
    InternalConsistencyError,
    ValidationError,
)
from .operators import DEFAULT_TOL, State, as_operator, is_unitary, partial_trace
from .tables import ProbabilityTable

#: Tolerance on the residual ``born(measure, rho) - probabilities`` accepted by
#: state reconstruction.
RECONSTRUCTION_TOL = 1e-8


def povm_violations(elements, tol: float = DEFAULT_TOL) -> list[str]:
    """List every way ``elements`` fails to form a POVM (empty when valid)."""
    violations: list[str] = []
    arrays = []
    for k, element in enumerate(elements):
        try:
            arrays.append(as_operator(element, name=f"element {k}"))
        except DimensionMismatchError as exc:
            return [str(exc)]
    if not arrays:
        return ["measure must contain at least one element"]
    dim = arrays[0].shape[0]
    if any(arr.shape[0] != dim for arr in arrays):
        return ["elements do not share a common dimension"]

    for k, arr in enumerate(arrays):
        herm_defect = float(np.max(np.abs(arr - arr.conj().T)))
        if herm_defect > tol:
            violations.append(f"element {k} is not Hermitian (defect {herm_defect:.3e})")
            continue
        spectrum = np.linalg.eigvalsh((arr + arr.conj().T) / 2.0)
        if spectrum[0] < -tol:
            violations.append(
                f"element {k} is not positive (eigenvalue {spectrum[0]:.3e})"
            )
    total = np.sum(arrays, axis=0)
    completeness = float(np.max(np.abs(total - np.eye(dim))))
    if completeness > tol:
        violations.append(f"elements do not sum to identity (defect {completeness:.3e})")
    return violations


def pvm_violations(elements, tol: float = DEFAULT_TOL) -> list[str]:
    """POVM violations plus projector and pairwise-orthogonality defects."""
    violations = povm_violations(elements, tol)
    if any("square" in line or "common dimension" in line for line in violations):
        return violations
    arrays = [as_operator(e) for e in elements]
    for k, arr in enumerate(arrays):
        defect = float(np.max(np.abs(arr @ arr - arr)))
        if defect > tol:
            violations.append(f"element {k} is not a projector (defect {defect:.3e})")
    for j, k in itertools.combinations(range(len(arrays)), 2):
        overlap = abs(complex(np.trace(arrays[j] @ arrays[k])))
        if overlap > tol:
            violations.append(
                f"elements {j} and {k} are not orthogonal (Tr = {overlap:.3e})"
            )
    return violations


class PovmMeasure:
    """Indexed family of positive operators summing to the identity.

    Parameters
    ----------
    elements : sequence of array_like
        The operators, all square with one common dimension.
    labels : sequence of hashables, optional
        One label per element; defaults to ``0..K-1`` or, for multi-index
        measures, to tuples of per-axis positions.
    index_shape : tuple of int, optional
        Multi-index shape (e.g. ``(2, 2)`` for a bivariate arrangement); the
        flat element order is C order over this shape.
    tol : float
        Validation tolerance.
    """

    _VALIDATOR = staticmethod(povm_violations)

    def __init__(self, elements, labels=None, index_shape=None, *, tol: float = DEFAULT_TOL):
        arrays = tuple(as_operator(e, name=f"element {k}") for k, e in enumerate(elements))
        if not arrays:
            raise ValidationError("measure must contain at least one element")
        dim = arrays[0].shape[0]
        if any(arr.shape[0] != dim for arr in arrays):
            raise DimensionMismatchError("elements do not share a common dimension")

        if index_shape is not None:
            index_shape = tuple(int(n) for n in index_shape)
            if any(n <= 0 for n in index_shape) or int(np.prod(index_shape)) != len(arrays):
                raise ValidationError(
                    f"index_shape {index_shape} does not match {len(arrays)} elements"
                )

        if labels is None:
            if index_shape is None:
                labels = tuple(range(len(arrays)))
            else:
                labels = tuple(itertools.product(*(range(n) for n in index_shape)))
        else:
            labels = tuple(labels)
            if len(labels) != len(arrays):
                raise ValidationError("one label is required per element")

        violations = self._VALIDATOR(arrays, tol)
        if violations:
            raise ValidationError("; ".join(violations))

        self.elements = arrays
        self.labels = labels
        self.index_shape = index_shape
        self.tol = float(tol)
        self._label_index = {label: k for k, label in enumerate(labels)}

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)

    def __repr__(self):
        shape = self.index_shape if self.index_shape is not None else (self.n_outcomes,)
        return f"{type(self).__name__}(dim={self.dim}, outcomes={shape})"

    def element(self, label) -> np.ndarray:
        """Element addressed by its outcome label."""
        try:
            return self.elements[self._label_index[label]]
        except KeyError:
            raise KeyError(f"unknown outcome label {label!r}") from None

    def stack(self) -> np.ndarray:
        """All elements as one read-only array of shape (K, d, d)."""
        out = np.stack(self.elements)
        out.setflags(write=False)
        return out

    def axis_label_tuples(self) -> tuple[tuple, ...]:
        """Per-axis outcome labels, reconstructed from the flat label tuples."""
        if self.index_shape is None:
            return (self.labels,)
        ndim = len(self.index_shape)
        structured = all(
            isinstance(label, tuple) and len(label) == ndim for label in self.labels
        )
        labels_grid = np.empty(len(self.labels), dtype=object)
        labels_grid[:] = self.labels
        labels_grid = labels_grid.reshape(self.index_shape)
        axes = []
        for axis, size in enumerate(self.index_shape):
            if structured:
                picks = []
                for i in range(size):
                    index = [0] * ndim
                    index[axis] = i
                    picks.append(labels_grid[tuple(index)][axis])
                axes.append(tuple(picks))
            else:
                axes.append(tuple(range(size)))
        return tuple(axes)

    def marginal(self, keep) -> "PovmMeasure":
        """Sum the multi-index elements over every axis not kept.

        ``keep`` is an axis index or ascending tuple of axis indices into
        ``index_shape``.  The marginal of a POVM is again a POVM.
        """
        if self.index_shape is None:
            raise ValidationError("marginal requires a multi-index measure")
        if isinstance(keep, (int, np.integer)):
            keep = (int(keep),)
        keep = tuple(int(ax) for ax in keep)
        ndim = len(self.index_shape)
        if any(ax < 0 or ax >= ndim for ax in keep) or len(set(keep)) != len(keep):
            raise DimensionMismatchError(f"invalid axes {keep} for shape {self.index_shape}")
        if list(keep) != sorted(keep):
            raise DimensionMismatchError("keep axes must be in ascending order")

        grid = np.stack(self.elements).reshape(*self.index_shape, self.dim, self.dim)
        drop = tuple(ax for ax in range(ndim) if ax not in keep)
        summed = grid.sum(axis=drop) if drop else grid
        new_shape = tuple(self.index_shape[ax] for ax in keep)
        elements = summed.reshape(-1, self.dim, self.dim)

        axis_labels = self.axis_label_tuples()
        new_labels = []
        for multi in itertools.product(*(range(n) for n in new_shape)):
            parts = tuple(axis_labels[ax][i] for ax, i in zip(keep, multi))
            new_labels.append(parts[0] if len(parts) == 1 else parts)
        out_index_shape = new_shape if len(new_shape) > 1 else None
        return PovmMeasure(
            elements, labels=tuple(new_labels), index_shape=out_index_shape, tol=self.tol
        )


class PvmMeasure(PovmMeasure):
    """POVM whose elements are mutually orthogonal projectors."""

    _VALIDATOR = staticmethod(pvm_violations)

    def is_maximal(self, tol: float | None = None) -> bool:
        """True when every projector is rank one."""
        tol = self.tol if tol is None else tol
        return all(abs(complex(np.trace(e)) - 1.0) <= tol for e in self.elements)


def tetrahedral_qubit_povm(tol: float = DEFAULT_TOL) -> PovmMeasure:
    """Informationally complete four-outcome qubit POVM on tetrahedral Bloch axes."""
    s = 1.0 / np.sqrt(3.0)
    directions = [(s, s, s), (s, -s, -s), (-s, s, -s), (-s, -s, s)]
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    elements = [
        (np.eye(2) + x * sx + y * sy + z * sz) / 4.0 for (x, y, z) in directions
    ]
    return PovmMeasure(elements, labels=("t0", "t1", "t2", "t3"), tol=tol)


class InstrumentModel:
    """Object-apparatus measurement model inducing a POVM on the object.

    Holds the initial apparatus state, the coupling unitary on the combined
    object (x) apparatus space, and the pointer PVM read out on the apparatus
    after the interaction.  The coupling is accepted directly as a unitary
    matrix; callers deriving it from a Hamiltonian do so before construction.
    """

    def __init__(
        self,
        apparatus_state: State,
        coupling,
        pointer: PvmMeasure,
        object_dim: int,
        *,
        tol: float = DEFAULT_TOL,
    ):
        self.apparatus_state = apparatus_state
        self.coupling = as_operator(coupling, name="coupling")
        self.pointer = pointer
        self.object_dim = int(object_dim)
        self.apparatus_dim = apparatus_state.dim
        self.tol = float(tol)

        if self.object_dim <= 0:
            raise ValidationError("object dimension must be positive")
        if pointer.dim != self.apparatus_dim:
            raise DimensionMismatchError(
                f"pointer acts on dimension {pointer.dim}, apparatus has {self.apparatus_dim}"
            )
        expected = self.object_dim * self.apparatus_dim
        if self.coupling.shape[0] != expected:
            raise DimensionMismatchError(
                f"coupling has dimension {self.coupling.shape[0]}, expected {expected}"
            )
        if not is_unitary(self.coupling, tol):
            raise ValidationError("coupling is not unitary within tolerance")


def born_probabilities(measure: PovmMeasure, rho: State, tol: float = DEFAULT_TOL) -> ProbabilityTable:
    """Outcome distribution ``p_k = Tr(rho M_k)`` of a measure on a state.

    The result is indexed like the measure (flat, or reshaped to its
    ``index_shape``) and carries the measure's outcome labels per axis.

    Raises
    ------
    DimensionMismatchError
        If the state dimension differs from the measure dimension.
    InternalConsistencyError
        If any probability falls below ``-tol``, which signals corrupted
        inputs since validated measures and states cannot produce one.
    """
    if rho.dim != measure.dim:
        raise DimensionMismatchError(
            f"state dimension {rho.dim} does not match measure dimension {measure.dim}"
        )
    probs = np.real(np.einsum("ij,kji->k", rho.matrix, measure.stack()))
    if float(probs.min()) < -tol:
        raise InternalConsistencyError(
            f"probability {probs.min():.3e} below -tol from validated inputs"
        )
    if measure.index_shape is not None:
        probs = probs.reshape(measure.index_shape)
    return ProbabilityTable(probs, axis_labels=measure.axis_label_tuples(), tol=tol)


def povm_from_instrument(model: InstrumentModel) -> PovmMeasure:
    """Synthesize the object POVM realized by an instrument model.

    For each pointer element ``E`` the object-space element is the apparatus
    partial trace of ``(I (x) rho_a) U^dag (I (x) E) U``.  Probabilities of the
    returned measure on any object state agree with the full-space computation
    on the final object-apparatus state.
    """
    if not is_unitary(model.coupling, model.tol):
        raise ValidationError("coupling is not unitary within tolerance")
    dims = (model.object_dim, model.apparatus_dim)
    identity = np.eye(model.object_dim)
    weighted = np.kron(identity, model.apparatus_state.matrix)
    u = model.coupling
    elements = []
    for pointer_element in model.pointer.elements:
        rotated = u.conj().T @ np.kron(identity, pointer_element) @ u
        element = partial_trace(weighted @ rotated, dims, keep=0)
        # Partial trace of a product of near-Hermitian factors carries
        # float-level asymmetry; symmetrize before validation.
        elements.append((element + element.conj().T) / 2.0)
    return PovmMeasure(
        elements,
        labels=model.pointer.labels,
        index_shape=model.pointer.index_shape,
        tol=model.tol,
    )


def is_complete(measure: PovmMeasure, tol: float = DEFAULT_TOL) -> bool:
    """True when the elements span the full operator space of their dimension.

    Elements are flattened to vectors and the rank is computed with singular
    values thresholded at ``tol``; completeness requires rank ``d**2``.
    """
    d = measure.dim
    frame = measure.stack().reshape(measure.n_outcomes, d * d)
    rank = int(np.linalg.matrix_rank(frame, tol=tol))
    return rank == d * d


def reconstruct_state(
    measure: PovmMeasure, probabilities: ProbabilityTable, tol: float = DEFAULT_TOL
) -> State:
    """Recover the density operator from a complete measure's outcome distribution.

    Linear inversion on the flattened operator frame (least-squares
    pseudo-inverse) followed by Hermitization.  No positivity projection is
    applied: probabilities that fail to produce a density operator within
    tolerance raise instead of being silently repaired.

    Raises
    ------
    IncompleteMeasureError
        If the measure does not span operator space.
    InfeasibleProbabilitiesError
        If the inverted matrix violates positivity or unit trace beyond
        tolerance, or cannot reproduce the given probabilities.
    """
    if not is_complete(measure, tol):
        raise IncompleteMeasureError(
            "measure elements do not span operator space; inversion is underdetermined"
        )
    p = np.asarray(probabilities.values, dtype=float).reshape(-1)
    if p.size != measure.n_outcomes:
        raise DimensionMismatchError(
            f"{p.size} probabilities given for {measure.n_outcomes} outcomes"
        )
    d = measure.dim
    # Tr(rho M) is linear in row-major vec(rho) with coefficient row vec(M^T).
    frame = np.swapaxes(measure.stack(), 1, 2).reshape(measure.n_outcomes, d * d)
    solution, *_ = np.linalg.lstsq(frame, p.astype(complex), rcond=None)
    rho = solution.reshape(d, d)
    rho = (rho + rho.conj().T) / 2.0

    residual = float(np.max(np.abs(frame @ rho.reshape(-1) - p)))
    if residual > RECONSTRUCTION_TOL:
        raise InfeasibleProbabilitiesError(
            f"probabilities are outside the measure's range (residual {residual:.3e})"
        )
    spectrum = np.linalg.eigvalsh(rho)
    if spectrum[0] < -tol:
        raise InfeasibleProbabilitiesError(
            f"inverted matrix fails positivity (eigenvalue {spectrum[0]:.3e})"
        )
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > max(tol, RECONSTRUCTION_TOL):
        raise InfeasibleProbabilitiesError(f"inverted matrix has trace {tr!r}")
    return State(rho, tol=max(tol, RECONSTRUCTION_TOL))
