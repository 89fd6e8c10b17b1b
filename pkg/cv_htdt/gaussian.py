"""Gaussian states, Gaussian maps and their entanglement measures.

Quadratures are ordered (x_1, p_1, ..., x_m, p_m) and the vacuum covariance matrix is the identity,
so every noise figure in this package is measured in vacuum units.
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np
from scipy.linalg import block_diag

from .errors import DimensionMismatchError, PhysicalityError, ValidationError

__all__ = [
    "SYMMETRY_TOL",
    "PSD_TOL",
    "GaussianState",
    "GaussianMap",
    "ResourceTriplet",
    "ChannelSpec",
    "symplectic_form",
    "vacuum_state",
    "coherent_state",
    "thermal_state",
    "is_physical",
    "is_completely_positive",
    "is_completely_positive_single_mode",
    "apply_map",
    "apply_map_to_modes",
    "embed_map",
    "compose",
    "phase_insensitive_map",
    "tensor",
    "partial_trace",
    "symplectic_eigenvalues",
    "two_mode_symplectic_eigenvalues",
    "log_negativity",
    "resource_to_state",
    "state_to_resource",
    "log2_to_natural_log_negativity",
    "squeezing_db_to_log_negativity",
]

SYMMETRY_TOL = 1e-10
PSD_TOL = 1e-9
# log_negativity refuses states whose smallest symplectic eigenvalue float64 cannot resolve
EPS = float(np.finfo(float).eps)
CONDITION_LIMIT = 1e-6

_SIGMA_Z = np.diag([1.0, -1.0])
_I2 = np.eye(2)


def _frozen(values, ndim: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValidationError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _is_symmetric(m: np.ndarray, tol: float = SYMMETRY_TOL) -> bool:
    return m.shape[0] == m.shape[1] and bool(np.all(np.abs(m - m.T) <= tol))


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.abs(m).max()))


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return (m + m.T) / 2


def symplectic_form(modes: int) -> np.ndarray:
    """Return Omega, the direct sum of `modes` copies of [[0, 1], [-1, 0]]."""
    if modes < 1:
        raise ValidationError(f"mode count must be positive, got {modes}")
    return block_diag(*([np.array([[0.0, 1.0], [-1.0, 0.0]])] * modes))


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First moments and covariance matrix of an m-mode Gaussian state.

    first_moments -- real vector of length 2m.
    covariance -- real symmetric 2m x 2m matrix; need not be physical, see `is_physical`.
    """

    first_moments: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        """Coerce to read-only float arrays and check shapes and symmetry."""
        v = _frozen(self.first_moments, 1, "first_moments")
        cov = _frozen(self.covariance, 2, "covariance")
        if len(v) == 0 or len(v) % 2 != 0:
            raise ValidationError(f"first_moments must have even positive length, got {len(v)}")
        if cov.shape != (len(v), len(v)):
            raise DimensionMismatchError("covariance", (len(v), len(v)), cov.shape)
        if not _is_symmetric(cov):
            raise ValidationError("covariance is not symmetric", f"|cov - cov^T| <= {SYMMETRY_TOL}")
        object.__setattr__(self, "first_moments", v)
        object.__setattr__(self, "covariance", cov)

    @property
    def modes(self) -> int:
        """Number of bosonic modes."""
        return len(self.first_moments) // 2


@dataclass(frozen=True, eq=False)
class GaussianMap:
    """Gaussian map v -> X v, cov -> X cov X^T + Y.

    X -- real 2m_out x 2m_in matrix.
    Y -- real symmetric 2m_out x 2m_out matrix.
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        """Coerce to read-only float arrays and check shapes and symmetry."""
        X = _frozen(self.X, 2, "X")
        Y = _frozen(self.Y, 2, "Y")
        if X.shape[0] % 2 != 0 or X.shape[1] % 2 != 0 or 0 in X.shape:
            raise ValidationError(f"X must have even positive dimensions, got {X.shape}")
        if Y.shape != (X.shape[0], X.shape[0]):
            raise DimensionMismatchError("Y", (X.shape[0], X.shape[0]), Y.shape)
        if not _is_symmetric(Y):
            raise ValidationError("Y is not symmetric", f"|Y - Y^T| <= {SYMMETRY_TOL}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def modes_in(self) -> int:
        """Number of input modes."""
        return self.X.shape[1] // 2

    @property
    def modes_out(self) -> int:
        """Number of output modes."""
        return self.X.shape[0] // 2

    @classmethod
    def identity(cls, modes: int) -> "GaussianMap":
        """Return the identity map on `modes` modes."""
        return cls(np.eye(2 * modes), np.zeros((2 * modes, 2 * modes)))

    def is_symplectic(self, tol: float = 1e-10) -> bool:
        """Return True if X Omega X^T = Omega (a Gaussian unitary when Y = 0)."""
        if self.modes_in != self.modes_out:
            return False
        omega = symplectic_form(self.modes_in)
        return bool(np.allclose(self.X @ omega @ self.X.T, omega, rtol=0.0, atol=tol))


@dataclass(frozen=True)
class ResourceTriplet:
    """Parameters (a, b, c) of the two-mode resource [[a I, -c Z], [-c Z, b I]].

    Construction never raises, so unphysical triplets can be built on purpose; use `validate`.
    """

    a: float
    b: float
    c: float

    @classmethod
    def two_mode_squeezed_vacuum(cls, r: float) -> "ResourceTriplet":
        """Return the pure symmetric resource (cosh 2r, cosh 2r, sinh 2r), whose log-negativity is 2r."""
        return cls(math.cosh(2 * r), math.cosh(2 * r), math.sinh(2 * r))

    def correlation_bound(self) -> float:
        """Return sqrt(ab - 1 - |a - b|), the largest physical c for these a and b."""
        return math.sqrt(max(self.a * self.b - 1 - abs(self.a - self.b), 0.0))

    def violations(self) -> List[str]:
        """Return the violated bounds, empty for a physical triplet."""
        found = []
        if self.a < 1 - PSD_TOL:
            found.append(f"a >= 1 (a={self.a})")
        if self.b < 1 - PSD_TOL:
            found.append(f"b >= 1 (b={self.b})")
        if self.c < 0:
            found.append(f"c >= 0 (c={self.c})")
        elif self.c > self.correlation_bound() + PSD_TOL * max(1.0, self.a, self.b):
            found.append(f"c <= sqrt(ab - 1 - |a - b|) = {self.correlation_bound()} (c={self.c})")
        return found

    def is_physical(self) -> bool:
        """Return True if the triplet describes a physical state."""
        return not self.violations()

    def validate(self) -> "ResourceTriplet":
        """Raise PhysicalityError naming every violated bound; return self otherwise."""
        found = self.violations()
        if found:
            raise PhysicalityError(f"unphysical resource triplet {self}", "; ".join(found))
        return self


@dataclass(frozen=True)
class ChannelSpec:
    """Phase-insensitive channel X = sqrt(x) I, Y = y I.

    x -- transmissivity (x < 1) or gain (x > 1).
    y -- added noise in vacuum units.
    """

    x: float
    y: float

    @classmethod
    def quantum_limited_attenuator(cls, x: float) -> "ChannelSpec":
        """Return the pure-loss channel (x, 1 - x)."""
        return cls(x, 1 - x)

    def is_completely_positive(self) -> bool:
        """Return True if x > 0 and y >= |1 - x|."""
        return self.x > 0 and self.y >= abs(1 - self.x) - PSD_TOL

    def validate(self) -> "ChannelSpec":
        """Raise ValidationError or PhysicalityError unless the channel is completely positive."""
        if not self.x > 0:
            raise ValidationError(f"channel transmissivity must be positive, got x={self.x}", "x > 0")
        if not self.is_completely_positive():
            raise PhysicalityError(f"channel {self} is not completely positive", "y >= |1 - x|")
        return self

    def is_entanglement_breaking(self) -> bool:
        """Return True if y >= 1 + x."""
        return self.y >= 1 + self.x

    def reduces_entanglement(self, r: float) -> bool:
        """Return True if the channel lowers the log-negativity of every state holding more than 2r."""
        return self.y >= math.exp(-2 * r) * (1 + self.x)


def vacuum_state(modes: int = 1) -> GaussianState:
    """Return the m-mode vacuum."""
    return GaussianState(np.zeros(2 * modes), np.eye(2 * modes))


def coherent_state(alpha_x: float, alpha_p: float = 0.0) -> GaussianState:
    """Return the single-mode coherent state with first moments (alpha_x, alpha_p)."""
    return GaussianState(np.array([alpha_x, alpha_p]), np.eye(2))


def thermal_state(nu: float, modes: int = 1) -> GaussianState:
    """Return a product of thermal states with covariance nu I."""
    return GaussianState(np.zeros(2 * modes), nu * np.eye(2 * modes))


def is_physical(state: GaussianState, tol: float = PSD_TOL) -> bool:
    """Return True if cov + i Omega >= 0, i.e. the Robertson-Schroedinger relation holds.

    `tol` is relative to the largest covariance entry (at least 1).
    """
    m = state.covariance + 1j * symplectic_form(state.modes)
    return bool(np.linalg.eigvalsh(m).min() >= -tol * _scale(state.covariance))


def is_completely_positive(gmap: GaussianMap, tol: float = PSD_TOL) -> bool:
    """Return True if Y + i Omega_out - i X Omega_in X^T >= 0."""
    omega_in = symplectic_form(gmap.modes_in)
    omega_out = symplectic_form(gmap.modes_out)
    m = gmap.Y + 1j * (omega_out - gmap.X @ omega_in @ gmap.X.T)
    return bool(np.linalg.eigvalsh(m).min() >= -tol)


def is_completely_positive_single_mode(gmap: GaussianMap, tol: float = PSD_TOL) -> bool:
    """Return True if sqrt(det Y) >= |1 - det X| and Y >= 0 for a single-mode map."""
    if gmap.X.shape != (2, 2):
        raise DimensionMismatchError("single-mode map X", (2, 2), gmap.X.shape)
    det_y = float(np.linalg.det(gmap.Y))
    return math.sqrt(max(det_y, 0.0)) >= abs(1 - np.linalg.det(gmap.X)) - tol and bool(
        np.linalg.eigvalsh(gmap.Y).min() >= -tol
    )


def apply_map(gmap: GaussianMap, state: GaussianState) -> GaussianState:
    """Return the state after `gmap`: v -> X v, cov -> X cov X^T + Y."""
    if gmap.X.shape[1] != len(state.first_moments):
        raise DimensionMismatchError("map input", gmap.X.shape[1], len(state.first_moments))
    v = gmap.X @ state.first_moments
    cov = gmap.X @ state.covariance @ gmap.X.T + gmap.Y
    return GaussianState(v, _symmetrize(cov))


def _mode_indices(modes: Iterable[int]) -> List[int]:
    return [q for k in modes for q in (2 * k, 2 * k + 1)]


def _check_modes(modes: Sequence[int], total_modes: int) -> None:
    if len(modes) == 0:
        raise ValidationError("mode selection is empty")
    if len(set(modes)) != len(modes):
        raise ValidationError(f"mode selection {list(modes)} repeats a mode")
    for k in modes:
        if not 0 <= k < total_modes:
            raise ValidationError(f"mode index {k} out of range", f"0 <= index < {total_modes}")


def embed_map(gmap: GaussianMap, modes: Sequence[int], total_modes: int) -> GaussianMap:
    """Lift a map on `modes` (in that order) to a register of `total_modes`, identity elsewhere."""
    modes = list(modes)
    _check_modes(modes, total_modes)
    if gmap.modes_in != len(modes) or gmap.modes_out != len(modes):
        raise DimensionMismatchError("embedded map", (2 * len(modes), 2 * len(modes)), gmap.X.shape)
    idx = _mode_indices(modes)
    X = np.eye(2 * total_modes)
    Y = np.zeros((2 * total_modes, 2 * total_modes))
    X[np.ix_(idx, idx)] = gmap.X
    Y[np.ix_(idx, idx)] = gmap.Y
    return GaussianMap(X, Y)


def apply_map_to_modes(gmap: GaussianMap, state: GaussianState, modes: Sequence[int]) -> GaussianState:
    """Apply `gmap` to the listed modes of `state`."""
    return apply_map(embed_map(gmap, modes, state.modes), state)


def compose(outer: GaussianMap, inner: GaussianMap) -> GaussianMap:
    """Return the map `outer` after `inner`."""
    if outer.X.shape[1] != inner.X.shape[0]:
        raise DimensionMismatchError("composed map", outer.X.shape[1], inner.X.shape[0])
    Y = outer.X @ inner.Y @ outer.X.T + outer.Y
    return GaussianMap(outer.X @ inner.X, _symmetrize(Y))


def phase_insensitive_map(channel: ChannelSpec) -> GaussianMap:
    """Return X = sqrt(x) I, Y = y I for `channel`."""
    channel.validate()
    return GaussianMap(math.sqrt(channel.x) * _I2, channel.y * _I2)


def tensor(s1: GaussianState, s2: GaussianState) -> GaussianState:
    """Return s1 (x) s2; the modes of s1 come first."""
    return GaussianState(
        np.concatenate([s1.first_moments, s2.first_moments]),
        block_diag(s1.covariance, s2.covariance),
    )


def partial_trace(state: GaussianState, keep: Iterable[int]) -> GaussianState:
    """Return the reduced state of the modes in `keep`, in ascending index order."""
    keep = sorted(keep)
    _check_modes(keep, state.modes)
    idx = _mode_indices(keep)
    return GaussianState(state.first_moments[idx], state.covariance[np.ix_(idx, idx)])


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Return the m symplectic eigenvalues of a 2m x 2m covariance matrix, ascending.

    They are the moduli of the eigenvalues of i Omega cov, which come in +/- pairs.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2 != 0 or cov.shape[0] == 0:
        raise ValidationError(f"covariance must be a non-empty 2m x 2m matrix, got shape {cov.shape}")
    if not _is_symmetric(cov):
        raise ValidationError("covariance is not symmetric", f"|cov - cov^T| <= {SYMMETRY_TOL}")
    omega = symplectic_form(cov.shape[0] // 2)
    try:
        # cov = L L^T; L^T i Omega L is Hermitian with eigenvalues +/- nu
        L = np.linalg.cholesky(cov)
        moduli = np.sort(np.abs(np.linalg.eigvalsh(L.T @ (1j * omega) @ L)))
    except np.linalg.LinAlgError:
        moduli = np.sort(np.abs(np.linalg.eigvals(1j * omega @ cov)))
    return moduli[::2]


def two_mode_symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Return (nu_-, nu_+) of a 4 x 4 covariance matrix from the Delta-determinant formula."""
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (4, 4):
        raise DimensionMismatchError("two-mode covariance", (4, 4), cov.shape)
    A, B, C = cov[:2, :2], cov[2:, 2:], cov[:2, 2:]
    delta = np.linalg.det(A) + np.linalg.det(B) + 2 * np.linalg.det(C)
    root = math.sqrt(max(delta**2 - 4 * np.linalg.det(cov), 0.0))
    return np.sqrt(np.array([max((delta - root) / 2, 0.0), (delta + root) / 2]))


def log_negativity(state: GaussianState) -> float:
    """Return max{0, -ln nu_-}, nu_- the smallest symplectic eigenvalue of the partial transpose."""
    if state.modes != 2:
        raise ValidationError(f"log-negativity needs a two-mode state, got {state.modes} modes")
    flip = block_diag(_I2, _SIGMA_Z)
    transposed = flip @ state.covariance @ flip
    spectrum = np.linalg.eigvalsh(transposed)
    if spectrum[0] <= 0 or EPS * spectrum[-1] / spectrum[0] > CONDITION_LIMIT:
        raise ValidationError(
            "covariance too ill-conditioned for a log-negativity"
            f" (eigenvalues {spectrum[0]:.3g} to {spectrum[-1]:.3g})",
            f"eps * cond(cov) <= {CONDITION_LIMIT}",
        )
    nu_minus = symplectic_eigenvalues(transposed)[0]
    return max(0.0, -math.log(nu_minus))


def resource_to_state(t: ResourceTriplet) -> GaussianState:
    """Return the two-mode state of a resource triplet, first moments zero."""
    t.validate()
    cov = np.block([[t.a * _I2, -t.c * _SIGMA_Z], [-t.c * _SIGMA_Z, t.b * _I2]])
    state = GaussianState(np.zeros(4), cov)
    if not is_physical(state):
        raise PhysicalityError(f"resource {t} violates the uncertainty relation", "cov + i Omega >= 0")
    return state


def state_to_resource(state: GaussianState, tol: float = 1e-9) -> ResourceTriplet:
    """Read (a, b, c) back from a two-mode state of resource form."""
    if state.modes != 2:
        raise ValidationError(f"resource state needs two modes, got {state.modes}")
    cov = state.covariance
    t = ResourceTriplet(float(cov[0, 0]), float(cov[2, 2]), float(-cov[0, 2]))
    expected = np.block([[t.a * _I2, -t.c * _SIGMA_Z], [-t.c * _SIGMA_Z, t.b * _I2]])
    scale = max(1.0, float(np.abs(cov).max()))
    if not np.allclose(cov, expected, rtol=0.0, atol=tol * scale):
        raise ValidationError("covariance is not of the form [[a I, -c Z], [-c Z, b I]]")
    return t


def log2_to_natural_log_negativity(value: float) -> float:
    """Convert a log-negativity quoted with base-2 logarithms to natural-log units."""
    return value * math.log(2)


def squeezing_db_to_log_negativity(db: float) -> float:
    """Return 2r for a two-mode squeezed vacuum squeezed `db` decibels below vacuum (9 dB -> 2.07)."""
    return db * math.log(10) / 10
