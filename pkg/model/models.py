from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from qcore.models import Operator, Spectrum, State
from .exceptions import UnknownFinal, UnknownIndex


@dataclass(frozen=True, eq=False)
class ObservableSpec:
    """Distinct eigenvalues chi_k of the observable and their eigenprojectors Pi_k (any rank)."""
    values: Tuple[float, ...]
    projectors: Tuple[Operator, ...]

    def __len__(self):
        return len(self.values)

    def operator(self):
        """Sum_k chi_k Pi_k."""
        matrix = sum(value * projector.matrix for value, projector in zip(self.values, self.projectors))
        return Operator(matrix, hermitian_hint=True)


@dataclass(frozen=True, eq=False)
class FinalFamily:
    """
    Postselection subspaces, one projector per label.

    ``complete`` declares that the projectors resolve the identity; the
    averaging sum rules need it.
    """
    labels: Tuple[str, ...]
    projectors: Tuple[Operator, ...]
    complete: bool = False

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class SystemModel:
    hamiltonian: Operator
    initial: State
    observable: ObservableSpec
    finals: FinalFamily
    spectrum: Spectrum = field(repr=False)

    @property
    def dim(self):
        return self.hamiltonian.dim

    @property
    def chi_indices(self):
        return range(len(self.observable))

    @property
    def final_labels(self):
        return self.finals.labels

    def projector(self, chi_index):
        if not isinstance(chi_index, (int, np.integer)) or not 0 <= chi_index < len(self.observable):
            raise UnknownIndex(f"observable has {len(self.observable)} values, got index {chi_index!r}",
                               field='chi_index')
        return self.observable.projectors[chi_index]

    def final_projector(self, label):
        label = str(label)
        try:
            return self.finals.projectors[self.finals.labels.index(label)]
        except ValueError:
            raise UnknownFinal(f"known labels are {list(self.finals.labels)}, got {label!r}",
                               field='final_label') from None

    def observable_operator(self):
        return self.observable.operator()
