"""Collective dynamics of one blockaded ensemble.

The qubit is a symmetric collective excitation shared by N atoms in a
quasi one-dimensional Gaussian cloud. This module samples cloud geometry,
computes pairwise van der Waals shifts, evaluates the blockade figures of
merit (saturation l, single/double excitation probabilities, frequency
shift, pi time), integrates the full pre-elimination amplitude equations
as an exact oracle, and emits single-qubit gate pulse sequences.

Conventions
-----------
Rabi frequencies are angular (rad/s). The collective transfer follows
|c_r(t)|^2 = sin^2(sqrt(N l) Omega t) / l, so a full transfer ("pi pulse")
on the collective transition takes t = pi / (2 sqrt(N l) Omega). Classical
single-atom pulses use the standard convention: a pulse of area A driven at
Omega_aux lasts A / Omega_aux.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import TWO_PI
from .errors import CapabilityError, ConfigError, DegenerateGeometryError, DomainError

# below this pair distance the geometry counts as degenerate and is resampled
MIN_PAIR_DISTANCE = 10e-9  # [m]

N_MAX_ODE = 10  # pair sector scales as N^2; dense integration capped here

DEFAULT_PI_TIME = 14.6e-6  # [s] collective pi time used to calibrate Omega_N


@dataclass(frozen=True)
class EnsembleConfig:
    """Geometry and coupling of a single ensemble.

    Exactly one blockade description is required: either `c6` (pairwise van
    der Waals coefficient, rad/s m^6) for explicit geometries, or
    `mean_blockade_shift` B (rad/s) for the aggregated description.
    `rabi_single` is the per-atom Rabi frequency Omega; the collective one is
    sqrt(N) Omega.
    """

    atom_count: int
    sigma: float  # Gaussian cloud parameter [m]
    rabi_single: float  # per-atom Omega [rad/s]
    c6: float | None = None
    mean_blockade_shift: float | None = None  # B [rad/s]; math.inf = perfect blockade
    level_label: str = ""

    def __post_init__(self) -> None:
        if self.atom_count < 2:
            raise ConfigError(f"atom_count must be >= 2, got {self.atom_count}")
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if not self.rabi_single > 0:
            raise ConfigError(f"rabi_single must be positive, got {self.rabi_single}")
        if self.c6 is None and self.mean_blockade_shift is None:
            raise ConfigError("provide c6 or mean_blockade_shift")

    @property
    def rabi_collective(self) -> float:
        """sqrt(N) Omega."""
        return math.sqrt(self.atom_count) * self.rabi_single

    @classmethod
    def from_pi_time(
        cls,
        atom_count: int,
        sigma: float,
        pi_time: float = DEFAULT_PI_TIME,
        **kwargs,
    ) -> "EnsembleConfig":
        """Calibrate Omega from a measured collective pi time: Omega_N = pi / (2 t_pi)."""
        if not pi_time > 0:
            raise ConfigError("pi_time must be positive")
        omega_collective = math.pi / (2.0 * pi_time)
        return cls(
            atom_count=atom_count,
            sigma=sigma,
            rabi_single=omega_collective / math.sqrt(atom_count),
            **kwargs,
        )


@dataclass(frozen=True)
class AtomPositions:
    """1-D coordinates along the cloud axis, one per atom."""

    coordinates: np.ndarray

    def __post_init__(self) -> None:
        coords = np.asarray(self.coordinates, dtype=float)
        object.__setattr__(self, "coordinates", coords)
        if coords.ndim != 1:
            raise ConfigError("coordinates must be one-dimensional")
        if not np.all(np.isfinite(coords)):
            raise ConfigError("coordinates must be finite")

    def __len__(self) -> int:
        return len(self.coordinates)


@dataclass(frozen=True)
class BlockadeSummary:
    """Blockade figures of merit for one geometry or one mean shift B."""

    mean_shift: float       # sum over pairs of 1/Delta_jk [s]
    mean_shift_sq: float    # sum over pairs of 1/Delta_jk^2 [s^2]
    saturation: float       # l >= 1
    p_single: float         # P1 = 1/l
    p_double: float         # P2
    freq_shift: float       # delta omega [rad/s]
    pi_time: float          # [s]


def sample_positions(config: EnsembleConfig, seed: int) -> AtomPositions:
    """Draw N i.i.d. positions from Normal(0, sigma^2) along the cloud axis.

    Deterministic for a fixed seed. If any pair lands closer than
    MIN_PAIR_DISTANCE the whole cloud is redrawn with seed+1, again
    deterministically.
    """
    current = seed
    while True:
        rng = np.random.default_rng(current)
        coords = rng.normal(0.0, config.sigma, size=config.atom_count)
        if _min_pair_distance(coords) >= MIN_PAIR_DISTANCE:
            return AtomPositions(coordinates=coords)
        current += 1


def _min_pair_distance(coords: np.ndarray) -> float:
    ordered = np.sort(coords)
    return float(np.min(np.diff(ordered)))


def _pair_distances(positions: AtomPositions) -> np.ndarray:
    """|z_j - z_k| for j < k, lexicographic pair order."""
    z = positions.coordinates
    j, k = np.triu_indices(len(z), k=1)
    return np.abs(z[j] - z[k])


def pair_shifts(positions: AtomPositions, c6: float) -> np.ndarray:
    """Van der Waals pair shifts Delta_jk = C6 / |z_j - z_k|^6, pairs ordered j < k."""
    distances = _pair_distances(positions)
    if np.any(distances < 1e-12):
        raise DegenerateGeometryError(
            "coincident atoms in geometry; resample with a different seed"
        )
    return c6 / distances**6


def blockade_summary(
    config: EnsembleConfig, positions: AtomPositions | None = None
) -> BlockadeSummary:
    """Evaluate the blockade figures of merit.

    With explicit positions (requires config.c6) the inverse-shift sums run
    over the actual geometry. Without positions the aggregated description is
    used: B maps onto the sums via
        sum 1/Delta   -> N(N-1) / (2 B)
        sum 1/Delta^2 -> N(N-1) / (2 B^2)
    which makes P2 identical to Omega_N^2 (N-1) / (2 N B^2). B = inf encodes
    a perfect blockade (all sums zero).
    """
    n = config.atom_count
    omega = config.rabi_single
    if positions is not None:
        if config.c6 is None:
            raise ConfigError("explicit positions require c6 in the config")
        if len(positions) != n:
            raise ConfigError(
                f"geometry has {len(positions)} atoms, config expects {n}"
            )
        shifts = pair_shifts(positions, config.c6)
        if np.any(shifts == 0.0):
            raise DomainError("zero pair shift in geometry")
        mean_shift = float(np.sum(1.0 / shifts))
        mean_shift_sq = float(np.sum(1.0 / shifts**2))
    else:
        b = config.mean_blockade_shift
        if b is None:
            raise ConfigError("no positions given and no mean_blockade_shift in config")
        if b == 0:
            raise DomainError("mean blockade shift B must be nonzero")
        pairs = n * (n - 1) / 2.0
        mean_shift = pairs / b
        mean_shift_sq = pairs / b**2

    saturation = 1.0 + mean_shift**2 * omega**2 / (4.0 * n**3)
    p_single = 1.0 / saturation
    p_double = mean_shift_sq * omega**2 / n
    freq_shift = omega**2 * mean_shift / n
    pi_time = math.pi / (2.0 * math.sqrt(n * saturation) * omega)
    return BlockadeSummary(
        mean_shift=mean_shift,
        mean_shift_sq=mean_shift_sq,
        saturation=saturation,
        p_single=p_single,
        p_double=p_double,
        freq_shift=freq_shift,
        pi_time=pi_time,
    )


def rabi_population(t: float, config: EnsembleConfig, saturation: float = 1.0) -> float:
    """Closed-form collective excitation probability sin^2(sqrt(N l) Omega t) / l."""
    if saturation < 1.0:
        raise DomainError(f"saturation l must be >= 1, got {saturation}")
    if t < 0:
        raise DomainError("time must be nonnegative")
    n = config.atom_count
    return math.sin(math.sqrt(n * saturation) * config.rabi_single * t) ** 2 / saturation


def single_qubit_fidelity(p_double: float) -> float:
    """Rotation fidelity exp(-2 P2); doubly excited and stray singly excited
    population contribute alike."""
    if not 0.0 <= p_double <= 1.0:
        raise DomainError(f"P2 must be a probability, got {p_double}")
    return math.exp(-2.0 * p_double)


# ---------------------------------------------------------------------------
# Amplitude dynamics (pre-elimination model)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CollectiveAmplitudes:
    """Amplitudes at one instant: ground, N symmetric singles, pair sector."""

    time: float
    c_ground: complex
    c_single: np.ndarray  # length N, all equal to c_r / sqrt(N)
    c_double: np.ndarray  # length N(N-1)/2, pair order j < k

    @property
    def norm(self) -> float:
        return float(
            abs(self.c_ground) ** 2
            + np.sum(np.abs(self.c_single) ** 2)
            + np.sum(np.abs(self.c_double) ** 2)
        )


class Trajectory:
    """Sampled amplitude trajectory with CSV export."""

    def __init__(
        self,
        times: np.ndarray,
        c_ground: np.ndarray,
        c_excited: np.ndarray,
        c_pairs: np.ndarray,
        atom_count: int,
    ) -> None:
        self.times = times
        self.c_ground = c_ground          # (M,)
        self.c_excited = c_excited        # (M,) collective c_r
        self.c_pairs = c_pairs            # (M, P)
        self.atom_count = atom_count

    @property
    def p_ground(self) -> np.ndarray:
        return np.abs(self.c_ground) ** 2

    @property
    def p_single(self) -> np.ndarray:
        return np.abs(self.c_excited) ** 2

    @property
    def p_double(self) -> np.ndarray:
        return np.sum(np.abs(self.c_pairs) ** 2, axis=1)

    @property
    def norms(self) -> np.ndarray:
        return self.p_ground + self.p_single + self.p_double

    def samples(self) -> list[CollectiveAmplitudes]:
        n = self.atom_count
        out = []
        for i, t in enumerate(self.times):
            out.append(
                CollectiveAmplitudes(
                    time=float(t),
                    c_ground=complex(self.c_ground[i]),
                    c_single=np.full(n, self.c_excited[i] / math.sqrt(n)),
                    c_double=self.c_pairs[i].copy(),
                )
            )
        return out

    def to_csv(self, path) -> None:
        header = "t,p_ground,p_single,p_double,norm"
        data = np.column_stack(
            [self.times, self.p_ground, self.p_single, self.p_double, self.norms]
        )
        np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.12g")


def integrate_amplitudes(
    config: EnsembleConfig,
    positions: AtomPositions | None,
    duration: float,
    dt: float,
    n_max: int = N_MAX_ODE,
) -> Trajectory:
    """Integrate the coupled ground/single/pair amplitude equations.

        dc_g/dt  = sqrt(N) Omega c_r
        dc_r/dt  = -sqrt(N) Omega c_g + (Omega/sqrt(N)) sum_jk c_jk
        dc_jk/dt = -(Omega/sqrt(N)) c_r - i Delta_jk c_jk

    starting from c_g = 1. The generator is time independent, so the
    propagator is evaluated exactly in its eigenbasis; this sidesteps the
    stiffness of the pair sector (Delta_jk can exceed Omega by many orders
    of magnitude) and conserves the norm to machine precision. `dt` sets the
    trajectory sampling grid. positions = None integrates the perfect
    blockade limit (no pair sector).
    """
    n = config.atom_count
    if n > n_max:
        raise CapabilityError(
            f"dense amplitude integration capped at N = {n_max}; got N = {n} "
            "(use blockade_summary for large ensembles)"
        )
    if not dt > 0:
        raise DomainError("dt must be positive")
    if duration < 0:
        raise DomainError("duration must be nonnegative")

    omega = config.rabi_single
    root_n = math.sqrt(n)
    if positions is not None:
        if config.c6 is None:
            raise ConfigError("explicit positions require c6 in the config")
        deltas = pair_shifts(positions, config.c6)
    else:
        deltas = np.zeros(0)
    n_pairs = len(deltas)

    # i * (generator) is Hermitian: real skew couplings + imaginary pair decay
    dim = 2 + n_pairs
    h = np.zeros((dim, dim), dtype=complex)
    h[0, 1] = 1j * root_n * omega
    h[1, 0] = -1j * root_n * omega
    if n_pairs:
        h[1, 2:] = 1j * omega / root_n
        h[2:, 1] = -1j * omega / root_n
        h[np.arange(2, dim), np.arange(2, dim)] = deltas

    evals, evecs = np.linalg.eigh(h)
    y0 = np.zeros(dim, dtype=complex)
    y0[0] = 1.0
    coeffs = evecs.conj().T @ y0

    n_steps = int(round(duration / dt))
    times = np.arange(n_steps + 1) * dt
    phases = np.exp(-1j * np.outer(times, evals))   # (M, dim)
    states = (phases * coeffs[None, :]) @ evecs.T   # y(t) rows

    return Trajectory(
        times=times,
        c_ground=states[:, 0],
        c_excited=states[:, 1],
        c_pairs=states[:, 2:],
        atom_count=n,
    )


# ---------------------------------------------------------------------------
# Gate pulse sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pulse:
    """One laser pulse: transition, area [rad], duration [s], drive phase [rad]."""

    transition: str
    area: float
    duration: float
    phase: float = 0.0
    collective: bool = False


@dataclass(frozen=True)
class GateRequest:
    """Single-qubit gate selector: 'X', 'H' or 'Phase' with an angle."""

    name: str
    angle: float = 0.0

    @classmethod
    def x(cls) -> "GateRequest":
        return cls("X")

    @classmethod
    def h(cls) -> "GateRequest":
        return cls("H")

    @classmethod
    def phase(cls, angle: float) -> "GateRequest":
        return cls("Phase", angle)


# drive phases for the central-rotation sequences; the -pi/2 / +pi/2 offsets
# on the g->e and r->s transfers make the composite Hadamard an involution
_SEQUENCE_PHASES = {
    "X": (0.0, 0.0, 0.0, 0.0, 0.0),
    "H": (0.0, -math.pi / 2.0, 0.0, 0.0, math.pi / 2.0),
}


def gate_pulse_sequence(
    gate: GateRequest,
    config: EnsembleConfig,
    saturation: float = 1.0,
    aux_rabi: float = TWO_PI * 1e6,
    light_shift_rate: float = TWO_PI * 1e6,
) -> list[Pulse]:
    """Pulse sequence realizing a single-qubit gate on the storage basis.

    X and H are five pulses: transfer s->r and g->e, a collective rotation
    between e and r (area pi for X, pi/2 for H), then the reverse transfers.
    The collective pulse lasts area / (2 sqrt(N l) Omega); auxiliary pulses
    run at `aux_rabi` and are much shorter. Phase(angle) is a single detuned
    pulse on the s <-> a transition accumulating the requested phase;
    Phase(0) is the empty sequence.
    """
    if gate.name == "Phase":
        if gate.angle == 0.0:
            return []
        return [
            Pulse(
                transition="s->a",
                area=gate.angle,
                duration=abs(gate.angle) / light_shift_rate,
                phase=0.0,
            )
        ]
    if gate.name not in _SEQUENCE_PHASES:
        raise ConfigError(f"unknown gate {gate.name!r}; expected X, H or Phase")

    central_area = math.pi if gate.name == "X" else math.pi / 2.0
    omega_eff = math.sqrt(config.atom_count * saturation) * config.rabi_single
    central_duration = central_area / (2.0 * omega_eff)
    aux_duration = math.pi / aux_rabi
    ph = _SEQUENCE_PHASES[gate.name]
    return [
        Pulse("s->r", math.pi, aux_duration, ph[0]),
        Pulse("g->e", math.pi, aux_duration, ph[1]),
        Pulse("e<->r", central_area, central_duration, ph[2], collective=True),
        Pulse("e->g", math.pi, aux_duration, ph[3]),
        Pulse("r->s", math.pi, aux_duration, ph[4]),
    ]


_LEVELS = {"g": 0, "s": 1, "e": 2, "r": 3}

_TRANSITION_PAIRS = {
    "s->r": ("s", "r"),
    "r->s": ("r", "s"),
    "g->e": ("g", "e"),
    "e->g": ("e", "g"),
    "e<->r": ("e", "r"),
}


def sequence_unitary(pulses: list[Pulse]) -> np.ndarray:
    """Composite 4x4 unitary of a pulse sequence on the {g, s, e, r} levels.

    Each resonant pulse is a rotation exp(-i (A/2)(cos(phi) X + sin(phi) Y))
    on its transition pair; a detuned s->a pulse contributes the accumulated
    phase on |s>. The storage-qubit action is the (g, s) submatrix.
    """
    u = np.eye(4, dtype=complex)
    for pulse in pulses:
        step = np.eye(4, dtype=complex)
        if pulse.transition == "s->a":
            step[_LEVELS["s"], _LEVELS["s"]] = np.exp(-1j * pulse.area)
        else:
            a, b = _TRANSITION_PAIRS[pulse.transition]
            ia, ib = _LEVELS[a], _LEVELS[b]
            half = pulse.area / 2.0
            cos, sin = math.cos(half), math.sin(half)
            off = -1j * sin * np.exp(-1j * pulse.phase)
            step[ia, ia] = cos
            step[ib, ib] = cos
            step[ia, ib] = off
            step[ib, ia] = -1j * sin * np.exp(1j * pulse.phase)
        u = step @ u
    return u


def storage_block(u: np.ndarray) -> np.ndarray:
    """Restrict a 4x4 level unitary to the (g, s) storage submatrix."""
    idx = [_LEVELS["g"], _LEVELS["s"]]
    return u[np.ix_(idx, idx)]
