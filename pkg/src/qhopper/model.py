"""The n-site hopper: lattice geometry, hop amplitudes, and initial states.

The single-step amplitude from site x to site x' is the root of unity
exp(2*pi*i*(x-x')^2 / n) for odd n and exp(2*pi*i*(x-x')^2 / 2n) for
even n.  The usual 1/sqrt(n) normalization is dropped throughout: every
history at a fixed number of steps shares the same power of it, so it
can never affect whether an amplitude sum vanishes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .cyclotomic import CycInt, root
from .errors import InvalidSiteError, UnknownStateError

__all__ = [
    "LatticeSpec",
    "InitialState",
    "STATE_LABELS",
    "hop_amplitude",
    "transfer_matrix",
    "check_unitarity",
    "initial_state",
    "is_transfer_eigenvector",
]

STATE_LABELS = ("ground", "plus", "minus", "standing")


@dataclass(frozen=True)
class LatticeSpec:
    """A cyclic lattice of n sites walked for a fixed number of time steps."""

    n: int
    steps: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 sites, got {self.n}")
        if self.steps < 1:
            raise ValueError(f"need at least 1 step, got {self.steps}")

    @property
    def phase_order(self) -> int:
        """Order of the root of unity carrying hop phases: n if odd, 2n if even."""
        return self.n if self.n % 2 else 2 * self.n

    def check_site(self, x: int) -> None:
        if not 0 <= x < self.n:
            raise InvalidSiteError(f"site {x} outside 0..{self.n - 1}")


@dataclass(frozen=True)
class InitialState:
    """Per-site starting amplitudes; overall scale is irrelevant to preclusion."""

    label: str
    amps: tuple[CycInt, ...]

    def __post_init__(self):
        if all(a.is_zero() for a in self.amps):
            raise ValueError("initial state cannot be identically zero")


def hop_amplitude(spec: LatticeSpec, x: int, x2: int) -> CycInt:
    """Unnormalized single-step amplitude from x to x2."""
    spec.check_site(x)
    spec.check_site(x2)
    m = spec.phase_order
    return root(m, (x - x2) ** 2 % m)


def transfer_matrix(spec: LatticeSpec) -> tuple[tuple[CycInt, ...], ...]:
    """Matrix U with U[x2][x] the amplitude to hop from x to x2 (unnormalized)."""
    return tuple(
        tuple(hop_amplitude(spec, x, x2) for x in range(spec.n)) for x2 in range(spec.n)
    )


def check_unitarity(spec: LatticeSpec) -> bool:
    """True iff U * U^dagger equals n * I exactly."""
    u = transfer_matrix(spec)
    n = spec.n
    for r in range(n):
        for c in range(n):
            acc = CycInt.zero(spec.phase_order)
            for x in range(n):
                acc = acc + u[r][x] * u[c][x].conj()
            expect = n if r == c else 0
            if not (acc - expect).is_zero():
                return False
    return True


def initial_state(
    spec: LatticeSpec, label: str, amps: tuple[CycInt, ...] | None = None
) -> InitialState:
    """Build one of the named initial states, or wrap custom amplitudes.

    ground   -> (1, 1, ..., 1)
    plus     -> (1, w, w^2, ...)    with w = exp(2*pi*i/n)
    minus    -> the complex conjugate of plus
    standing -> entrywise sum of plus and minus
    custom   -> amplitudes supplied by the caller, one per site
    """
    n, m = spec.n, spec.phase_order
    step = m // n  # w = z^step in the phase ring
    if label == "custom":
        if amps is None:
            raise UnknownStateError("custom state needs explicit amplitudes")
        if len(amps) != n:
            raise ValueError(f"expected {n} amplitudes, got {len(amps)}")
        return InitialState("custom", tuple(amps))
    if amps is not None:
        raise ValueError("amplitudes are only accepted with label 'custom'")
    if label == "ground":
        vec = tuple(CycInt.one(m) for _ in range(n))
    elif label == "plus":
        vec = tuple(root(m, j * step) for j in range(n))
    elif label == "minus":
        vec = tuple(root(m, -j * step) for j in range(n))
    elif label == "standing":
        vec = tuple(root(m, j * step) + root(m, -j * step) for j in range(n))
    else:
        raise UnknownStateError(f"unknown state label {label!r}")
    return InitialState(label, vec)


def is_transfer_eigenvector(spec: LatticeSpec, state: InitialState) -> bool:
    """True iff U * amps is a nonzero scalar multiple of amps.

    Decided by exact cross-ratio equalities amps[i]*(U amps)[j] ==
    amps[j]*(U amps)[i], which keeps everything inside the integer ring
    (no division by amplitudes).
    """
    n = spec.n
    m = math.lcm(spec.phase_order, *(a.order for a in state.amps))
    amps = tuple(a.embed(m) for a in state.amps)
    u = transfer_matrix(spec)
    image = []
    for r in range(n):
        acc = CycInt.zero(m)
        for c in range(n):
            acc = acc + u[r][c].embed(m) * amps[c]
        image.append(acc)
    if all(v.is_zero() for v in image):
        return False
    for i in range(n):
        for j in range(i + 1, n):
            if not (amps[i] * image[j] - amps[j] * image[i]).is_zero():
                return False
    return True
