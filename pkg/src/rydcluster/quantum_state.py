"""Dense simulator for few photonic modes tensored with ensemble qubits.

The exact-state oracle for the heralding protocols: 50:50 beam splitters on
truncated Fock modes, blockade-limited photon absorption, lossy
photodetection with dark counts, local unitaries and fidelities.

Basis conventions
-----------------
A state is a complex vector over (mode occupations) x (ensemble levels),
modes first, mode 0 most significant. Fock cutoff is 3 per mode
(occupations 0, 1, 2); exceeding it is an error, never silent truncation.
Ensembles carry the four levels g, s, e, r in that index order, with g/s
the storage (computational) pair. The beam splitter uses the symmetric
convention a -> (a + i b)/sqrt(2), b -> (i a + b)/sqrt(2), under which two
indistinguishable photons bunch: |11> -> (i/sqrt(2)) (|02> + |20>).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, FockCutoffError, StateError

NORM_TOL = 1e-10
UNITARY_TOL = 1e-12

QUBIT_LEVELS = ("0", "1")
ENSEMBLE_LEVELS = ("g", "s", "e", "r")

DOUBLE_EXCITATION_FLAG = "double_excitation"


@dataclass(frozen=True)
class HybridState:
    """Normalized pure state of photonic modes and ensemble subsystems."""

    mode_dims: tuple[int, ...]
    n_ensembles: int
    amplitudes: np.ndarray
    levels: tuple[str, ...] = ENSEMBLE_LEVELS
    flags: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "mode_dims", tuple(int(d) for d in self.mode_dims))
        expected = self.dimension
        if len(amps) != expected:
            raise StateError(f"amplitude vector has length {len(amps)}, expected {expected}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def dimension(self) -> int:
        return math.prod(self.mode_dims) * self.n_levels**self.n_ensembles

    @property
    def shape(self) -> tuple[int, ...]:
        return self.mode_dims + (self.n_levels,) * self.n_ensembles

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape)

    def level_index(self, name: str) -> int:
        try:
            return self.levels.index(name)
        except ValueError:
            raise StateError(f"level {name!r} not in {self.levels}") from None

    def with_amplitudes(self, amps: np.ndarray, extra_flags: frozenset[str] = frozenset()) -> "HybridState":
        return replace(self, amplitudes=amps, flags=self.flags | extra_flags)

    def basis_labels(self) -> list[str]:
        labels = []
        for idx in np.ndindex(*self.shape):
            photons = "".join(str(n) for n in idx[: len(self.mode_dims)])
            atoms = "".join(self.levels[i] for i in idx[len(self.mode_dims):])
            if photons and atoms:
                labels.append(f"{photons}|{atoms}")
            else:
                labels.append(photons or atoms)
        return labels

    def to_json(self, tol: float = 1e-15) -> str:
        """JSON dump of nonzero amplitudes keyed by basis label."""
        amps = self.amplitudes
        entries = {
            label: [amps[i].real, amps[i].imag]
            for i, label in enumerate(self.basis_labels())
            if abs(amps[i]) > tol
        }
        payload = {
            "mode_dims": list(self.mode_dims),
            "n_ensembles": self.n_ensembles,
            "levels": list(self.levels),
            "flags": sorted(self.flags),
            "amplitudes": entries,
        }
        return json.dumps(payload, sort_keys=True)


@dataclass(frozen=True)
class DetectionRecord:
    """Outcome of one photodetector: mode, click flag, sampled photon number,
    whether the dark count fired, and how many photons were actually seen."""

    mode_index: int
    clicked: bool
    true_photons: int
    dark: bool
    detected: int = 0

    def __post_init__(self) -> None:
        if self.dark and not self.clicked:
            raise StateError("a dark count always produces a click")
        if self.true_photons < 0:
            raise StateError("photon number cannot be negative")


def product_state(
    photons: tuple[int, ...],
    atoms: str,
    mode_dims: tuple[int, ...] | None = None,
    levels: tuple[str, ...] = ENSEMBLE_LEVELS,
) -> HybridState:
    """Basis product state, e.g. product_state((1, 1), "ee")."""
    if mode_dims is None:
        mode_dims = (3,) * len(photons)
    n_ens = len(atoms)
    shape = tuple(mode_dims) + (len(levels),) * n_ens
    idx = tuple(photons) + tuple(levels.index(ch) for ch in atoms)
    amps = np.zeros(shape, dtype=complex)
    amps[idx] = 1.0
    return HybridState(tuple(mode_dims), n_ens, amps.ravel(), levels=levels)


def from_terms(
    terms: dict[tuple[tuple[int, ...], str], complex],
    mode_dims: tuple[int, ...] | None = None,
    levels: tuple[str, ...] = ENSEMBLE_LEVELS,
    normalize: bool = False,
) -> HybridState:
    """Superposition from {(photons, atoms): amplitude} entries."""
    first_photons, first_atoms = next(iter(terms))
    if mode_dims is None:
        mode_dims = (3,) * len(first_photons)
    n_ens = len(first_atoms)
    shape = tuple(mode_dims) + (len(levels),) * n_ens
    amps = np.zeros(shape, dtype=complex)
    for (photons, atoms), amp in terms.items():
        idx = tuple(photons) + tuple(levels.index(ch) for ch in atoms)
        amps[idx] += amp
    vec = amps.ravel()
    if normalize:
        vec = vec / np.linalg.norm(vec)
    return HybridState(tuple(mode_dims), n_ens, vec, levels=levels)


# ---------------------------------------------------------------------------
# mode and ensemble axis helpers
# ---------------------------------------------------------------------------


def _apply_on_axes(state: HybridState, op: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    """Apply a matrix acting on the listed tensor axes (joined in order)."""
    tensor = state.tensor()
    ndim = tensor.ndim
    rest = [ax for ax in range(ndim) if ax not in axes]
    perm = list(axes) + rest
    moved = np.transpose(tensor, perm)
    joined_dim = math.prod(moved.shape[: len(axes)])
    flat = moved.reshape(joined_dim, -1)
    out = op @ flat
    out = out.reshape(moved.shape)
    inverse = np.argsort(perm)
    return np.transpose(out, inverse).ravel()


@lru_cache(maxsize=None)
def _beam_splitter_matrix(dim_a: int, dim_b: int) -> np.ndarray:
    """exp(i pi/4 (a^dag b + a b^dag)) on the joint (mode_a, mode_b) space."""
    def ladder(dim: int) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, dim)), k=1)  # annihilation

    a = ladder(dim_a)
    b = ladder(dim_b)
    coupling = np.kron(a.conj().T, b) + np.kron(a, b.conj().T)
    return expm(1j * (math.pi / 4.0) * coupling)


def beam_splitter(state: HybridState, mode_a: int, mode_b: int) -> HybridState:
    """50:50 beam splitter on two distinct modes.

    Photon number across the pair is conserved; input support with
    n_a + n_b beyond the smaller cutoff would overflow and raises.
    """
    if mode_a == mode_b:
        raise DomainError("beam splitter needs two distinct modes")
    dims = state.mode_dims
    for m in (mode_a, mode_b):
        if not 0 <= m < len(dims):
            raise DomainError(f"mode index {m} out of range")
    da, db = dims[mode_a], dims[mode_b]
    max_total = min(da, db) - 1
    probs = np.abs(state.tensor()) ** 2
    sum_axes = tuple(ax for ax in range(probs.ndim) if ax not in (mode_a, mode_b))
    joint = probs.sum(axis=sum_axes) if sum_axes else probs
    na, nb = np.meshgrid(np.arange(da), np.arange(db), indexing="ij")
    if np.any(joint[(na + nb) > max_total] > 1e-24):
        raise FockCutoffError(
            f"input populates more than {max_total} photons across modes "
            f"{mode_a},{mode_b}; raise the cutoff"
        )
    u = _beam_splitter_matrix(da, db)
    return state.with_amplitudes(_apply_on_axes(state, u, (mode_a, mode_b)))


def phase_shift(state: HybridState, mode: int, phase: float) -> HybridState:
    """Optical phase shifter: |n> -> exp(i n phase) |n> on one mode."""
    dim = state.mode_dims[mode]
    op = np.diag(np.exp(1j * phase * np.arange(dim)))
    return state.with_amplitudes(_apply_on_axes(state, op, (mode,)))


def _ensemble_axis(state: HybridState, ensemble_index: int) -> int:
    if not 0 <= ensemble_index < state.n_ensembles:
        raise DomainError(f"ensemble index {ensemble_index} out of range")
    return len(state.mode_dims) + ensemble_index


def blockaded_absorption(
    state: HybridState,
    mode: int,
    ensemble_index: int,
    p_abs: float = 1.0,
    p_double: float = 0.0,
    rng: np.random.Generator | None = None,
) -> HybridState:
    """Absorb one photon from a mode into the ensemble's Rydberg level.

    Perfect action: |1>|e> -> |0>|r> and |2>|e> -> |1>|r>; the blockade
    forbids a second absorption, so |n>|r> keeps its atomic part. The
    ensemble must sit in the {e, r} manifold.

    With p_abs < 1 the whole absorption fails with probability 1 - p_abs
    (state unchanged); with probability p_double the trial is tagged with a
    double-excitation flag on the returned state. Both draws need `rng`.
    """
    if not (0.0 <= p_abs <= 1.0 and 0.0 <= p_double <= 1.0):
        raise DomainError("p_abs and p_double must be probabilities")
    axis = _ensemble_axis(state, ensemble_index)
    tensor = state.tensor()

    idx_e = state.level_index("e")
    idx_r = state.level_index("r")
    outside = [i for i in range(state.n_levels) if i not in (idx_e, idx_r)]
    stray = sum(
        float(np.sum(np.abs(np.take(tensor, i, axis=axis)) ** 2)) for i in outside
    )
    if stray > NORM_TOL:
        raise StateError(
            f"ensemble {ensemble_index} must be in the e/r manifold before absorption"
        )

    flags: frozenset[str] = frozenset()
    if p_abs < 1.0 or p_double > 0.0:
        if rng is None:
            raise DomainError("imperfect absorption requires an rng")
        if rng.random() >= p_abs:
            return state  # no absorption event
        if rng.random() < p_double:
            flags = frozenset({f"{DOUBLE_EXCITATION_FLAG}:{ensemble_index}"})

    dim_mode = state.mode_dims[mode]
    new = np.zeros_like(tensor)
    mode_slices = [slice(None)] * tensor.ndim

    def sub(n: int, level: int) -> tuple:
        s = list(mode_slices)
        s[mode] = n
        s[axis] = level
        return tuple(s)

    # photons with an excited ensemble: move one quantum into |r>
    for n in range(1, dim_mode):
        block = tensor[sub(n, idx_e)]
        if np.any(block):
            target = sub(n - 1, idx_r)
            if np.any(np.abs(tensor[target]) > 1e-14):
                raise StateError(
                    "absorption target basis state already populated; "
                    "state outside the protocol manifold"
                )
            new[target] += block
    # vacuum with |e>, and everything already in |r>, pass through
    new[sub(0, idx_e)] = tensor[sub(0, idx_e)]
    for n in range(dim_mode):
        new[sub(n, idx_r)] += tensor[sub(n, idx_r)]

    return state.with_amplitudes(new.ravel(), extra_flags=flags)


def photodetect(
    state: HybridState,
    mode: int,
    efficiency: float,
    dark_prob: float,
    rng: np.random.Generator,
) -> tuple[DetectionRecord, HybridState]:
    """Measure one mode with a non-number-resolving lossy detector.

    Samples the photon number from the Born distribution, thins it with the
    per-photon efficiency, adds an optional dark count, and collapses the
    state onto the sampled photon number (renormalized).
    """
    if not 0.0 <= efficiency <= 1.0:
        raise DomainError("efficiency must be in [0, 1]")
    if not 0.0 <= dark_prob < 1.0:
        raise DomainError("dark_prob must be in [0, 1)")
    tensor = state.tensor()
    axes = tuple(ax for ax in range(tensor.ndim) if ax != mode)
    marginal = np.sum(np.abs(tensor) ** 2, axis=axes)
    marginal = marginal / marginal.sum()
    n = int(rng.choice(len(marginal), p=marginal))

    detected = int(rng.binomial(n, efficiency)) if n else 0
    dark = bool(rng.random() < dark_prob) if dark_prob > 0.0 else False
    clicked = detected > 0 or dark

    collapsed = np.zeros_like(tensor)
    sl = [slice(None)] * tensor.ndim
    sl[mode] = n
    collapsed[tuple(sl)] = tensor[tuple(sl)]
    vec = collapsed.ravel()
    vec = vec / np.linalg.norm(vec)
    record = DetectionRecord(
        mode_index=mode, clicked=clicked, true_photons=n, dark=dark, detected=detected
    )
    return record, state.with_amplitudes(vec)


def fidelity(state_or_density, target) -> float:
    """Overlap fidelity: |<t|psi>|^2 for pure states, <t|rho|t> for densities."""
    t = target.amplitudes if isinstance(target, HybridState) else np.asarray(target, dtype=complex).ravel()
    if isinstance(state_or_density, HybridState):
        s = state_or_density.amplitudes
    else:
        s = np.asarray(state_or_density, dtype=complex)
    if s.ndim == 2:
        if s.shape[0] != s.shape[1] or s.shape[0] != len(t):
            raise DomainError(f"dimension mismatch: rho {s.shape}, target {len(t)}")
        value = np.real(np.conj(t) @ s @ t)
    else:
        s = s.ravel()
        if len(s) != len(t):
            raise DomainError(f"dimension mismatch: state {len(s)}, target {len(t)}")
        value = abs(np.vdot(t, s)) ** 2
    return float(np.clip(value, 0.0, 1.0))


def apply_local(
    state: HybridState,
    ensemble_index: int,
    unitary: np.ndarray,
    levels: tuple[str, str] | None = None,
) -> HybridState:
    """Apply a local unitary on one ensemble.

    Accepts the full n_levels x n_levels matrix or a 2x2 acting on a level
    pair (default the storage pair g, s). Rejects non-unitary input.
    """
    u = np.asarray(unitary, dtype=complex)
    nl = state.n_levels
    if u.shape == (2, 2) and nl != 2:
        pair = levels if levels is not None else ("g", "s")
        full = np.eye(nl, dtype=complex)
        ia, ib = state.level_index(pair[0]), state.level_index(pair[1])
        for row, r_lv in enumerate((ia, ib)):
            for col, c_lv in enumerate((ia, ib)):
                full[r_lv, c_lv] = u[row, col]
        u = full
    if u.shape != (nl, nl):
        raise DomainError(f"unitary must be 2x2 or {nl}x{nl}, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(nl))) > UNITARY_TOL:
        raise DomainError("operator is not unitary")
    axis = _ensemble_axis(state, ensemble_index)
    return state.with_amplitudes(_apply_on_axes(state, u, (axis,)))


def transfer_unitary() -> np.ndarray:
    """Classical transfer pulses mapping the interaction basis to storage:
    e -> g, r -> s (and back), leaving the protocol's entangled pair encoded
    in the long-lived levels."""
    u = np.zeros((4, 4), dtype=complex)
    g, s, e, r = (ENSEMBLE_LEVELS.index(ch) for ch in "gser")
    u[g, e] = 1.0
    u[e, g] = 1.0
    u[s, r] = 1.0
    u[r, s] = 1.0
    return u


def swapped_transfer_unitary() -> np.ndarray:
    """Transfer with the opposite assignment: e -> s, r -> g. Selecting this
    variant per ensemble absorbs a bit flip into the basis transfer."""
    u = np.zeros((4, 4), dtype=complex)
    g, s, e, r = (ENSEMBLE_LEVELS.index(ch) for ch in "gser")
    u[s, e] = 1.0
    u[e, s] = 1.0
    u[g, r] = 1.0
    u[r, g] = 1.0
    return u


def psi_pair(sign: int, basis: tuple[str, str] = ("e", "r")) -> HybridState:
    """Maximally entangled pair (|ba> + sign * i |ab>)/sqrt(2) on two ensembles.

    With the default (e, r) basis this is (|re> + sign i |er>)/sqrt(2); with
    ("g", "s") the storage-basis version (|sg> + sign i |gs>)/sqrt(2).
    """
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    lo, hi = basis
    return from_terms(
        {
            ((), f"{hi}{lo}"): 1.0 / math.sqrt(2.0),
            ((), f"{lo}{hi}"): sign * 1j / math.sqrt(2.0),
        },
        mode_dims=(),
    )


def ghz_state(n_qubits: int, levels: tuple[str, str] = ("g", "s")) -> HybridState:
    """(|00...0> + |11...1>)/sqrt(2) over n ensembles in the storage basis."""
    zero, one = levels
    return from_terms(
        {
            ((), zero * n_qubits): 1.0 / math.sqrt(2.0),
            ((), one * n_qubits): 1.0 / math.sqrt(2.0),
        },
        mode_dims=(),
    )


def extract_qubit_state(state: HybridState) -> np.ndarray:
    """Project an all-storage hybrid state onto the qubit tensor basis.

    Fails if any population sits outside the g/s pair. Returns a normalized
    2^n vector ordered with ensemble 0 most significant.
    """
    if state.mode_dims:
        raise StateError("state still carries photonic modes")
    tensor = state.tensor()
    g, s = state.level_index("g"), state.level_index("s")
    keep = np.ix_(*([[g, s]] * state.n_ensembles))
    sub = tensor[keep].ravel()
    norm = np.linalg.norm(sub)
    if abs(norm - 1.0) > 1e-9:
        raise StateError("population outside the storage basis")
    return sub / norm
