"""Subspaces of the truncated Fock space and restricted channel analysis.

A ``Subspace`` is an ordered orthonormal set of d vectors spanning K, with
projector P = sum_j |b_j><b_j|. Restricting a channel to K gives the
completely positive map x -> P Phi(x) P. Two distinct questions about that
restriction are answered here and kept apart on purpose:

* trace preservation: the restriction preserves trace for every input on K
  exactly when P Phi*(P) P = P (the adjoint map is unital on the block);
* unitality: the restriction fixes the maximally mixed state P/d exactly
  when P Phi(P) P = P.

A restriction can be trace-preserving without being unital (amplitude
damping on the two lowest levels is the canonical case), so reports carry
both defects.

Membership of K's state set in an invariant hull is probed on the operator
span of the |b_i><b_j| basis; by linearity that is equivalent to probing
every state supported on K.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel, adjoint_apply, apply_channel, superoperator_of
from .errors import DimensionMismatchError, SupportError
from .fock import coherent_state, fock_state, hs_norm, operator_norm, outer
from .tolerances import FIXED_POINT_TOL, HULL_TOL, SPECTRAL_TOL, UNITALITY_TOL


@dataclass(frozen=True)
class Subspace:
    """Orthonormal basis (rows of ``basis``) for a d-dimensional subspace."""

    dim: int
    basis: np.ndarray  # shape (d, dim)
    label: str = "custom"

    def __post_init__(self):
        basis = np.atleast_2d(np.asarray(self.basis, dtype=complex))
        if basis.shape[1] != self.dim:
            raise DimensionMismatchError(
                f"basis vectors have length {basis.shape[1]}, expected {self.dim}"
            )
        if basis.shape[0] > self.dim:
            raise ValueError("more basis vectors than ambient dimensions")
        gram = basis @ basis.conj().T
        defect = float(np.max(np.abs(gram - np.eye(basis.shape[0]))))
        if defect > SPECTRAL_TOL:
            raise ValueError(f"basis is not orthonormal (Gram defect {defect:.3e})")
        basis = basis.copy()
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)

    @property
    def d(self) -> int:
        return int(self.basis.shape[0])

    @classmethod
    def from_levels(cls, levels, dim: int) -> "Subspace":
        """Span of the number states |k> for k in ``levels``."""
        levels = list(levels)
        if len(set(levels)) != len(levels):
            raise ValueError(f"levels must be distinct, got {levels}")
        basis = np.stack([fock_state(k, dim) for k in levels])
        return cls(dim=dim, basis=basis, label="levels " + ",".join(map(str, levels)))

    @classmethod
    def from_vectors(cls, vectors, dim: int, label: str = "custom") -> "Subspace":
        return cls(dim=dim, basis=np.stack([np.asarray(v, dtype=complex) for v in vectors]),
                   label=label)


def cat_state_subspace(alpha: complex, dim: int) -> Subspace:
    """Qubit subspace spanned by the even and odd cat states of amplitude alpha.

    The unnormalized combinations |alpha> +- |-alpha> occupy disjoint (even
    vs odd) number levels, so they stay exactly orthogonal under truncation;
    only their norms need fixing.
    """
    plus_amps, _ = coherent_state(alpha, dim)
    minus_amps, _ = coherent_state(-alpha, dim)
    even = plus_amps + minus_amps
    odd = plus_amps - minus_amps
    even = even / np.linalg.norm(even)
    odd = odd / np.linalg.norm(odd)
    return Subspace(dim=dim, basis=np.stack([even, odd]), label=f"cat alpha={alpha}")


def projector(subspace: Subspace) -> np.ndarray:
    """P = sum_j |b_j><b_j|: hermitian, idempotent, trace d."""
    b = subspace.basis
    return b.T @ b.conj()


def subspace_overlap(a: Subspace, b: Subspace) -> float:
    """tr(P_a P_b) / d in [0, 1]; equals 1 exactly when the spans coincide."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"ambient dims differ: {a.dim} vs {b.dim}")
    if a.d != b.d:
        raise ValueError(f"subspace dims differ: {a.d} vs {b.d}")
    cross = a.basis.conj() @ b.basis.T
    return float(np.sum(np.linalg.svd(cross, compute_uv=False) ** 2) / a.d)


# ---------------------------------------------------------------------------
# Restriction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RestrictedChannel:
    """Handle for x -> P Phi(x) P on inputs supported on K."""

    channel: KrausChannel
    subspace: Subspace

    def apply(self, x: np.ndarray, support_tol: float = SPECTRAL_TOL) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.channel.dim, self.channel.dim):
            raise DimensionMismatchError(
                f"operator shape {x.shape} does not match dim {self.channel.dim}"
            )
        p = projector(self.subspace)
        comp = np.eye(self.channel.dim) - p
        off = operator_norm(comp @ x @ comp)
        if off > support_tol:
            raise SupportError(
                f"input has weight {off:.3e} outside the subspace (tol {support_tol:.0e})"
            )
        return p @ apply_channel(self.channel, x) @ p


def restrict(ch: KrausChannel, subspace: Subspace) -> RestrictedChannel:
    if ch.dim != subspace.dim:
        raise DimensionMismatchError(
            f"channel dim {ch.dim} does not match subspace ambient dim {subspace.dim}"
        )
    return RestrictedChannel(channel=ch, subspace=subspace)


# ---------------------------------------------------------------------------
# Unitality / trace preservation of the restriction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitalityReport:
    """Both defects of the restricted map, in operator norm.

    ``trace_defect`` is ||P Phi*(P) P - P||: zero iff the restriction is
    trace-preserving on K. ``unital_defect`` is ||P Phi(P) P - P||: zero iff
    the restriction fixes the maximally mixed state on K. At K = full space
    the former reduces to the channel's trace-preservation defect and the
    latter to ordinary unitality.
    """

    trace_defect: float
    is_trace_preserving: bool
    unital_defect: float
    is_unital: bool


def unitality_check(
    ch: KrausChannel, subspace: Subspace, tol: float = UNITALITY_TOL
) -> UnitalityReport:
    if ch.dim != subspace.dim:
        raise DimensionMismatchError(
            f"channel dim {ch.dim} does not match subspace ambient dim {subspace.dim}"
        )
    p = projector(subspace)
    trace_defect = operator_norm(p @ adjoint_apply(ch, p) @ p - p)
    unital_defect = operator_norm(p @ apply_channel(ch, p) @ p - p)
    return UnitalityReport(
        trace_defect=trace_defect,
        is_trace_preserving=trace_defect <= tol,
        unital_defect=unital_defect,
        is_unital=unital_defect <= tol,
    )


# ---------------------------------------------------------------------------
# Invariant hulls
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HullReport:
    """Verdict on whether the channel maps K's states back into K.

    ``max_leakage`` is the largest operator norm of Phi(x) - P Phi(x) P over
    the d^2 probe operators |b_i><b_j| (Hilbert-Schmidt version alongside
    for diagnostics). The verdict is certified only relative to the
    truncated channel; ``channel_tp_defect`` records how trustworthy that
    truncation is.
    """

    is_invariant_hull: bool
    max_leakage: float
    max_leakage_hs: float
    probed_inputs: int
    is_unital_subchannel: bool
    unitality_defect: float
    trace_defect: float
    channel_tp_defect: float


def invariant_hull_check(
    ch: KrausChannel,
    subspace: Subspace,
    leak_tol: float = HULL_TOL,
    tp_precondition: float = 1e-8,
) -> HullReport:
    """Probe all d^2 basis operators of K's operator span for leakage.

    Requires the channel's own trace-preservation defect to sit below
    ``tp_precondition``; a leakier truncation would make any verdict
    meaningless.
    """
    if ch.dim != subspace.dim:
        raise DimensionMismatchError(
            f"channel dim {ch.dim} does not match subspace ambient dim {subspace.dim}"
        )
    if ch.tp_defect > tp_precondition:
        raise ValueError(
            f"channel trace-preservation defect {ch.tp_defect:.3e} exceeds "
            f"{tp_precondition:.0e}; increase the Kraus truncation"
        )
    p = projector(subspace)
    basis = subspace.basis
    max_op = 0.0
    max_hs = 0.0
    for i in range(subspace.d):
        for j in range(subspace.d):
            image = apply_channel(ch, outer(basis[i], basis[j]))
            leaked = image - p @ image @ p
            max_op = max(max_op, operator_norm(leaked))
            max_hs = max(max_hs, hs_norm(leaked))
    unit = unitality_check(ch, subspace)
    return HullReport(
        is_invariant_hull=max_op <= leak_tol,
        max_leakage=max_op,
        max_leakage_hs=max_hs,
        probed_inputs=subspace.d**2,
        is_unital_subchannel=unit.is_trace_preserving and unit.is_unital,
        unitality_defect=unit.unital_defect,
        trace_defect=unit.trace_defect,
        channel_tp_defect=ch.tp_defect,
    )


# ---------------------------------------------------------------------------
# Fixed points
# ---------------------------------------------------------------------------


def fixed_point_space(ch: KrausChannel, tol: float = FIXED_POINT_TOL) -> list[np.ndarray]:
    """Orthonormal (Hilbert-Schmidt) basis of {x : Phi(x) = x}.

    Extracted as the right null space of (superoperator - identity) by
    singular-value thresholding; the superoperator is non-normal, so
    eigenvalue matching would be fragile where SVD is not.
    """
    sup = superoperator_of(ch)
    a = sup.matrix - np.eye(sup.matrix.shape[0])
    _, svals, vh = np.linalg.svd(a)
    members = []
    for sigma, row in zip(svals, vh):
        if sigma < tol:
            members.append(row.conj().reshape((ch.dim, ch.dim), order="F"))
    return members
