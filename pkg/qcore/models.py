from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from WeakTime.conf import get_setting
from .exceptions import DimMismatch, InvalidOperator, InvalidState, NotHermitian


def _frozen(array):
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


def hermiticity_defect(matrix):
    """Largest |A_ij - conj(A_ji)| and the tolerance it is judged against."""
    matrix = np.asarray(matrix)
    defect = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
    tolerance = get_setting('HERMITIAN_TOL') * (1.0 + float(np.linalg.norm(matrix)))
    return defect, tolerance


@dataclass(frozen=True, eq=False)
class Operator:
    """
    Dense complex square matrix acting on the system Hilbert space.

    ``hermitian_hint`` caches a Hermiticity verdict: ``True`` is checked on
    construction, ``None`` means unknown.
    """
    matrix: np.ndarray
    hermitian_hint: Optional[bool] = None

    def __post_init__(self):
        try:
            matrix = _frozen(self.matrix)
        except (TypeError, ValueError) as exc:
            raise InvalidOperator(f"cannot read matrix entries ({exc})") from exc
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise InvalidOperator(f"expected a non-empty square matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise InvalidOperator("matrix has NaN or infinite entries")
        object.__setattr__(self, 'matrix', matrix)
        if self.hermitian_hint:
            defect, tolerance = hermiticity_defect(matrix)
            if defect > tolerance:
                raise NotHermitian(f"max |A - A^dagger| = {defect:.3e} exceeds {tolerance:.3e}")

    @property
    def dim(self):
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim), hermitian_hint=True)

    @classmethod
    def zeros(cls, dim):
        return cls(np.zeros((dim, dim)), hermitian_hint=True)

    @classmethod
    def diag(cls, values):
        values = np.asarray(values)
        return cls(np.diag(values), hermitian_hint=bool(np.all(np.isreal(values))) or None)

    @classmethod
    def ket_bra(cls, ket, bra=None):
        """|ket><bra|; a projector-like rank-1 operator when ``bra`` is omitted."""
        ket = np.asarray(ket, dtype=complex)
        if bra is None:
            return cls(np.outer(ket, ket.conj()), hermitian_hint=True)
        return cls(np.outer(ket, np.asarray(bra, dtype=complex).conj()))

    def dagger(self):
        return Operator(self.matrix.conj().T, hermitian_hint=self.hermitian_hint)

    def _combine(self, other, op):
        if isinstance(other, Operator):
            if other.dim != self.dim:
                raise DimMismatch(f"{self.dim} vs {other.dim}")
            hint = True if (self.hermitian_hint and other.hermitian_hint and op is not np.matmul) else None
            return Operator(op(self.matrix, other.matrix), hermitian_hint=hint)
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __matmul__(self, other):
        return self._combine(other, np.matmul)

    def __mul__(self, scalar):
        if isinstance(scalar, Operator):
            return NotImplemented
        hint = True if (self.hermitian_hint and np.isreal(scalar)) else None
        return Operator(self.matrix * scalar, hermitian_hint=hint)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Operator(dim={self.dim}, hermitian_hint={self.hermitian_hint})"


# Pauli algebra; sigma_plus = (sigma_1 + i sigma_2) / 2
SIGMA_1 = Operator(np.array([[0, 1], [1, 0]]), hermitian_hint=True)
SIGMA_2 = Operator(np.array([[0, -1j], [1j, 0]]), hermitian_hint=True)
SIGMA_3 = Operator(np.array([[1, 0], [0, -1]]), hermitian_hint=True)
SIGMA_PLUS = Operator(np.array([[0, 1], [0, 0]]))
SIGMA_MINUS = Operator(np.array([[0, 0], [1, 0]]))


@dataclass(frozen=True, eq=False)
class State:
    """
    System state: a unit vector (pure) or a density matrix (mixed).

    Exactly one of ``vector`` and ``density`` is set.
    """
    vector: Optional[np.ndarray] = None
    density: Optional[Operator] = None

    def __post_init__(self):
        tolerance = get_setting('STATE_TOL')
        if (self.vector is None) == (self.density is None):
            raise InvalidState("give exactly one of a state vector or a density matrix")
        if self.vector is not None:
            vector = _frozen(self.vector)
            if vector.ndim != 1 or vector.size < 1 or not np.all(np.isfinite(vector)):
                raise InvalidState(f"state vector must be a finite 1-D array, got shape {vector.shape}")
            norm = float(np.vdot(vector, vector).real)
            if abs(norm - 1.0) > tolerance:
                raise InvalidState(f"state vector norm^2 is {norm:.12g}, expected 1")
            object.__setattr__(self, 'vector', vector)
            return
        try:
            density = self.density if isinstance(self.density, Operator) else Operator(self.density)
        except InvalidOperator as exc:
            raise InvalidState(f"density matrix: {exc}") from exc
        defect, _ = hermiticity_defect(density.matrix)
        if defect > tolerance:
            raise InvalidState(f"density matrix is not Hermitian (defect {defect:.3e})")
        trace = complex(np.trace(density.matrix))
        if abs(trace - 1.0) > tolerance:
            raise InvalidState(f"density matrix trace is {trace.real:.12g}, expected 1")
        hermitian = (density.matrix + density.matrix.conj().T) / 2
        smallest = float(np.linalg.eigvalsh(hermitian)[0])
        if smallest < -tolerance:
            raise InvalidState(f"density matrix has negative eigenvalue {smallest:.3e}")
        object.__setattr__(self, 'density', Operator(hermitian, hermitian_hint=True))

    @classmethod
    def pure(cls, vector):
        return cls(vector=vector)

    @classmethod
    def mixed(cls, density):
        return cls(density=density)

    @property
    def kind(self):
        return 'pure' if self.vector is not None else 'density'

    @property
    def is_pure(self):
        return self.vector is not None

    @property
    def dim(self):
        return self.vector.size if self.vector is not None else self.density.dim

    def density_matrix(self):
        if self.density is not None:
            return self.density
        return Operator.ket_bra(self.vector)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues and the unitary whose columns are the eigenvectors."""
    eigenvalues: np.ndarray
    basis: Operator = field(repr=False)

    def __post_init__(self):
        eigenvalues = np.array(self.eigenvalues, dtype=float, copy=True)
        eigenvalues.setflags(write=False)
        object.__setattr__(self, 'eigenvalues', eigenvalues)

    @property
    def dim(self):
        return self.eigenvalues.size

    def bohr_frequencies(self):
        """omega_mn = E_m - E_n (hbar = 1)."""
        return np.subtract.outer(self.eigenvalues, self.eigenvalues)
