import logging
from collections.abc import Mapping

import numpy as np

from WeakTime.conf import get_setting
from qcore.exceptions import DimMismatch, InvalidOperator, InvalidState, NotHermitian
from qcore.linalg import hermitian_eig
from qcore.models import Operator, State
from .exceptions import (
    DegenerateInput,
    IncompleteFinalFamily,
    IncompleteObservable,
    InvalidFinals,
    InvalidObservable,
    InvalidProjector,
    MissingComponent,
)
from .models import FinalFamily, ObservableSpec, SystemModel

logger = logging.getLogger(__name__)


def _operator(raw, name):
    """Read a Hermitian operator, naming ``name`` in any error."""
    try:
        if isinstance(raw, Operator):
            return raw if raw.hermitian_hint else Operator(raw.matrix, hermitian_hint=True)
        return Operator(raw, hermitian_hint=True)
    except (InvalidOperator, NotHermitian) as exc:
        exc.field = name
        raise


def _state(raw, name='initial'):
    if isinstance(raw, State):
        return raw
    try:
        array = np.asarray(raw, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidState(f"cannot read state entries ({exc})", field=name) from exc
    try:
        if array.ndim == 1:
            return State.pure(array)
        return State.mixed(array)
    except InvalidState as exc:
        exc.field = name
        raise


def _check_projector(P, name, tolerance):
    defect = np.linalg.norm(P.matrix @ P.matrix - P.matrix)
    if defect > tolerance:
        raise InvalidProjector(f"||P^2 - P||_F = {defect:.3e} exceeds {tolerance:.1e}", field=name)


def _projectors(raw_list, prefix, dim, tolerance):
    projectors = []
    for index, raw in enumerate(raw_list):
        name = f"{prefix}[{index}]"
        try:
            P = _operator(raw, name)
        except NotHermitian as exc:
            raise InvalidProjector(str(exc.args[0]), field=name) from exc
        if P.dim != dim:
            raise DimMismatch(f"projector has dimension {P.dim}, system has {dim}", field=name)
        _check_projector(P, name, tolerance)
        projectors.append(P)
    return tuple(projectors)


def _completeness_defect(projectors, dim):
    return float(np.linalg.norm(sum(P.matrix for P in projectors) - np.eye(dim)))


def validate_observable(raw, dim, tolerance=None):
    tolerance = get_setting('PROJECTOR_TOL', tolerance)
    if isinstance(raw, ObservableSpec):
        raw = {'values': raw.values, 'projectors': raw.projectors}
    values = tuple(float(value) for value in raw.get('values', ()))
    raw_projectors = list(raw.get('projectors', ()))
    if not values:
        raise InvalidObservable("at least one observable value is required", field='observable.values')
    if len(values) != len(raw_projectors):
        raise InvalidObservable(f"{len(values)} values but {len(raw_projectors)} projectors",
                                field='observable.projectors')
    if len(set(values)) != len(values):
        raise InvalidObservable(f"values must be distinct, got {list(values)}", field='observable.values')
    projectors = _projectors(raw_projectors, 'observable.projectors', dim, tolerance)

    # Completeness before orthogonality: a repeated projector reports as incomplete.
    defect = _completeness_defect(projectors, dim)
    if defect > tolerance:
        raise IncompleteObservable(f"||sum_k Pi_k - 1||_F = {defect:.3e}", field='observable.projectors')
    for j in range(len(projectors)):
        for k in range(j + 1, len(projectors)):
            overlap = np.linalg.norm(projectors[j].matrix @ projectors[k].matrix)
            if overlap > tolerance:
                raise InvalidProjector(f"not orthogonal to projector {j} (||Pi_j Pi_k||_F = {overlap:.3e})",
                                       field=f"observable.projectors[{k}]")
    return ObservableSpec(values=values, projectors=projectors)


def validate_finals(raw, dim, tolerance=None):
    tolerance = get_setting('PROJECTOR_TOL', tolerance)
    if isinstance(raw, FinalFamily):
        raw = {'labels': raw.labels, 'projectors': raw.projectors, 'complete': raw.complete}
    labels = tuple(str(label) for label in raw.get('labels', ()))
    raw_projectors = list(raw.get('projectors', ()))
    complete = bool(raw.get('complete', False))
    if not labels:
        raise InvalidFinals("at least one final subspace is required", field='finals.labels')
    if len(labels) != len(raw_projectors):
        raise InvalidFinals(f"{len(labels)} labels but {len(raw_projectors)} projectors", field='finals.projectors')
    if len(set(labels)) != len(labels):
        raise InvalidFinals(f"labels must be unique, got {list(labels)}", field='finals.labels')
    projectors = _projectors(raw_projectors, 'finals.projectors', dim, tolerance)
    if complete:
        defect = _completeness_defect(projectors, dim)
        if defect > tolerance:
            raise IncompleteFinalFamily(f"||sum_f P_f - 1||_F = {defect:.3e}", field='finals.projectors')
    return FinalFamily(labels=labels, projectors=projectors, complete=complete)


def validate_system(raw) -> SystemModel:
    """
    Build a ``SystemModel`` from raw scenario data and check every invariant.

    ``raw`` is a mapping with ``hamiltonian``, ``initial``, ``observable``
    (``values``, ``projectors``) and ``finals`` (``labels``, ``projectors``,
    optional ``complete``); matrices may be nested lists or ``Operator``s.
    An existing ``SystemModel`` is re-checked and returned unchanged.
    """
    if isinstance(raw, SystemModel):
        validate_system({
            'hamiltonian': raw.hamiltonian,
            'initial': raw.initial,
            'observable': raw.observable,
            'finals': raw.finals,
        })
        return raw
    if not isinstance(raw, Mapping):
        raise MissingComponent("scenario system must be a mapping", field='system')
    for key in ('hamiltonian', 'initial', 'observable', 'finals'):
        if key not in raw:
            raise MissingComponent(field=key)

    hamiltonian = _operator(raw['hamiltonian'], 'hamiltonian')
    dim = hamiltonian.dim
    initial = _state(raw['initial'])
    if initial.dim != dim:
        raise DimMismatch(f"state has dimension {initial.dim}, Hamiltonian has {dim}", field='initial')
    observable = validate_observable(raw['observable'], dim)
    finals = validate_finals(raw['finals'], dim)
    spectrum = hermitian_eig(hamiltonian)
    logger.debug(f"Validated {dim}-level system with {len(observable)} observable values and {len(finals)} finals")
    return SystemModel(
        hamiltonian=hamiltonian,
        initial=initial,
        observable=observable,
        finals=finals,
        spectrum=spectrum,
    )


def projector_from_subspace(vectors, tolerance=1e-10) -> Operator:
    """Orthogonal projector onto span(vectors); rank equals the number of vectors."""
    try:
        stacked = np.column_stack([np.asarray(vector, dtype=complex) for vector in vectors])
    except ValueError as exc:
        raise DegenerateInput(f"cannot stack vectors ({exc})") from exc
    if stacked.size == 0:
        raise DegenerateInput("no vectors given")
    if stacked.shape[1] > stacked.shape[0]:
        raise DegenerateInput(f"{stacked.shape[1]} vectors cannot be independent in dimension {stacked.shape[0]}")
    left, singular, _ = np.linalg.svd(stacked, full_matrices=False)
    if singular[0] == 0 or singular[-1] < tolerance * singular[0]:
        raise DegenerateInput(f"smallest singular value {singular[-1]:.3e} vs largest {singular[0]:.3e}")
    return Operator(left @ left.conj().T, hermitian_hint=True)
