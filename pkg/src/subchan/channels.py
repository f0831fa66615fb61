"""Completely positive maps in Kraus form on a truncated Fock space.

A channel is a finite list of operators {E_i} acting as
Phi(x) = sum_i E_i x E_i^dag. Its conjugate (adjoint under the trace
pairing) is Phi*(x) = sum_i E_i^dag x E_i, and Phi is trace-preserving on a
block exactly when sum_i E_i^dag E_i restricts to the identity there.

Vectorization convention, fixed once here and relied on by all fixed-point
code: vec(x) stacks COLUMNS (x.flatten(order="F")), so vec(A x B) equals
(B^T kron A) vec(x) and the superoperator of Phi is sum_i conj(E_i) kron E_i.

Channels whose Kraus operators are all diagonal (e.g. dephasing families)
may carry thousands of terms; for those the diagonal data is kept and the
dense operator stack is materialized only on demand, while application uses
the algebraically identical contraction over diagonals.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatchError, ResourceLimitError
from .fock import hermiticity_defect, operator_norm, random_density_matrix, random_hermitian
from .tolerances import SPECTRAL_TOL, STRUCTURAL_TOL

# N^4 superoperator entries get unwieldy past this point.
MAX_SUPEROPERATOR_DIM = 64

KNOWN_FAMILIES = ("phase-damping", "amplitude-damping", "depolarizing", "custom")


class KrausChannel:
    """Immutable bundle of Kraus operators plus family metadata.

    Parameters
    ----------
    kraus_ops : array_like, optional
        Stack of shape (terms, dim, dim). Mutually exclusive with
        ``diagonals``.
    diagonals : ndarray, optional
        Shape (terms, dim) array of diagonal entries for channels whose
        Kraus operators are all diagonal. The dense stack is built lazily.
    family : str
        One of "phase-damping", "amplitude-damping", "depolarizing",
        "custom".
    eta : float, optional
        Damping (or mixing) parameter of the family; None for custom
        channels.

    Attributes
    ----------
    dim : int
    kraus_truncation : int
        Number of Kraus terms kept.
    tp_defect : float
        Operator norm of (sum_i E_i^dag E_i - I) on the full truncated
        space, computed at construction. The honest error measure for
        families whose exact Kraus sum is infinite.
    """

    def __init__(
        self,
        kraus_ops=None,
        *,
        diagonals: np.ndarray | None = None,
        family: str = "custom",
        eta: float | None = None,
    ):
        if (kraus_ops is None) == (diagonals is None):
            raise ValueError("provide exactly one of kraus_ops or diagonals")
        if family not in KNOWN_FAMILIES:
            raise ValueError(f"unknown channel family {family!r}")
        self.family = family
        self.eta = eta

        if diagonals is not None:
            diags = np.array(diagonals, dtype=complex, order="C")
            if diags.ndim != 2 or diags.shape[0] < 1:
                raise ValueError("diagonals must have shape (terms, dim)")
            self._diagonals: np.ndarray | None = diags
            self._stack: np.ndarray | None = None
            self.dim = int(diags.shape[1])
            self.kraus_truncation = int(diags.shape[0])
        else:
            stack = np.array(kraus_ops, dtype=complex, order="C")
            if stack.ndim == 2:
                stack = stack[np.newaxis]
            if stack.ndim != 3 or stack.shape[1] != stack.shape[2] or stack.shape[0] < 1:
                raise ValueError(
                    f"kraus_ops must stack square matrices, got shape {stack.shape}"
                )
            self._stack = stack
            self._diagonals = None
            self.dim = int(stack.shape[1])
            self.kraus_truncation = int(stack.shape[0])

        for arr in (self._stack, self._diagonals):
            if arr is not None:
                arr.flags.writeable = False
        self.tp_defect = self._tp_defect_full()

    # -- storage ------------------------------------------------------------

    @cached_property
    def kraus_ops(self) -> np.ndarray:
        """Dense (terms, dim, dim) stack; read-only."""
        if self._stack is not None:
            return self._stack
        stack = np.zeros((self.kraus_truncation, self.dim, self.dim), dtype=complex)
        idx = np.arange(self.dim)
        stack[:, idx, idx] = self._diagonals
        stack.flags.writeable = False
        return stack

    @cached_property
    def diagonals(self) -> np.ndarray | None:
        """(terms, dim) diagonal data if every Kraus operator is diagonal, else None."""
        if self._diagonals is not None:
            return self._diagonals
        idx = np.arange(self.dim)
        diag = self._stack[:, idx, idx]
        off = self._stack.copy()
        off[:, idx, idx] = 0.0
        if np.any(off):
            return None
        diag = np.ascontiguousarray(diag)
        diag.flags.writeable = False
        return diag

    @cached_property
    def _pair_damping(self) -> np.ndarray | None:
        """M[a, b] = sum_i d_i[a] conj(d_i[b]) so Phi(x) = M * x elementwise.

        Only defined for all-diagonal channels; this is the Kraus sum with
        the structural zeros skipped, not a separate closed form.
        """
        d = self.diagonals
        if d is None:
            return None
        return d.T @ d.conj()

    def _tp_defect_full(self) -> float:
        if self._diagonals is not None:
            col = np.sum(np.abs(self._diagonals) ** 2, axis=0)
            return float(np.max(np.abs(col - 1.0)))
        flat = self._stack.reshape(-1, self.dim)
        gram = flat.conj().T @ flat
        return operator_norm(gram - np.eye(self.dim))

    def __repr__(self) -> str:
        eta = "" if self.eta is None else f", eta={self.eta}"
        return (
            f"KrausChannel({self.family}{eta}, dim={self.dim}, "
            f"terms={self.kraus_truncation}, tp_defect={self.tp_defect:.3e})"
        )


def _check_dims(ch: KrausChannel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (ch.dim, ch.dim):
        raise DimensionMismatchError(
            f"operator shape {x.shape} does not match channel dim {ch.dim}"
        )
    return x


def apply_channel(ch: KrausChannel, x: np.ndarray) -> np.ndarray:
    """Phi(x) = sum_i E_i x E_i^dag."""
    x = _check_dims(ch, x)
    m = ch._pair_damping
    if m is not None:
        return m * x
    e = ch.kraus_ops
    return ((e @ x) @ e.conj().transpose(0, 2, 1)).sum(axis=0)


def adjoint_apply(ch: KrausChannel, x: np.ndarray) -> np.ndarray:
    """Conjugate map Phi*(x) = sum_i E_i^dag x E_i.

    Satisfies tr(x1 Phi*(x2)) = tr(Phi(x1) x2); unital exactly when Phi is
    trace-preserving.
    """
    x = _check_dims(ch, x)
    m = ch._pair_damping
    if m is not None:
        return m.conj() * x
    e = ch.kraus_ops
    return ((e.conj().transpose(0, 2, 1) @ x) @ e).sum(axis=0)


def tp_defect_on_block(ch: KrausChannel, block: int) -> float:
    """Operator norm of (sum_i E_i^dag E_i - I) restricted to the leading block."""
    if not 1 <= block <= ch.dim:
        raise ValueError(f"block must be in [1, {ch.dim}], got {block}")
    d = ch.diagonals
    if d is not None:
        col = np.sum(np.abs(d[:, :block]) ** 2, axis=0)
        return float(np.max(np.abs(col - 1.0)))
    flat = ch.kraus_ops[:, :, :block].reshape(-1, block)
    gram = flat.conj().T @ flat
    return operator_norm(gram - np.eye(block))


@dataclass(frozen=True)
class ChannelVerification:
    """Outcome of the randomized channel self-checks.

    Defects above tolerance are reported here, never raised: the Kraus form
    already guarantees complete positivity, so this guards implementation
    bugs rather than proving anything.
    """

    block: int
    tp_defect: float
    hermiticity_defect: float
    min_eigenvalue: float
    samples: int
    seed: int
    tp_ok: bool
    hermiticity_ok: bool
    positivity_ok: bool


def verify_channel(
    ch: KrausChannel,
    block: int | None = None,
    *,
    samples: int = 20,
    seed: int = 1234,
    tp_tol: float = SPECTRAL_TOL,
    herm_tol: float = STRUCTURAL_TOL,
    eig_tol: float = SPECTRAL_TOL,
) -> ChannelVerification:
    """Check trace preservation on a block plus hermiticity/positivity on samples.

    Random inputs are density matrices (and hermitian operators) supported on
    the leading ``block`` levels, drawn from a generator seeded with ``seed``;
    the seed is recorded in the report.
    """
    block = ch.dim if block is None else block
    if not 1 <= block <= ch.dim:
        raise ValueError(f"block must be in [1, {ch.dim}], got {block}")
    rng = np.random.default_rng(seed)

    tp = tp_defect_on_block(ch, block)

    herm = 0.0
    min_eig = np.inf
    for _ in range(samples):
        h = np.zeros((ch.dim, ch.dim), dtype=complex)
        h[:block, :block] = random_hermitian(block, rng)
        herm = max(herm, hermiticity_defect(apply_channel(ch, h)))

        rho = np.zeros((ch.dim, ch.dim), dtype=complex)
        rho[:block, :block] = random_density_matrix(block, rng)
        out = apply_channel(ch, rho)
        min_eig = min(min_eig, float(np.linalg.eigvalsh((out + out.conj().T) / 2).min()))

    return ChannelVerification(
        block=block,
        tp_defect=tp,
        hermiticity_defect=herm,
        min_eigenvalue=float(min_eig),
        samples=samples,
        seed=seed,
        tp_ok=tp <= tp_tol,
        hermiticity_ok=herm <= herm_tol,
        positivity_ok=min_eig >= -eig_tol,
    )


# ---------------------------------------------------------------------------
# Superoperator (matrix) form
# ---------------------------------------------------------------------------


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(x).flatten(order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    return v.reshape((dim, dim), order="F")


@dataclass(frozen=True)
class Superoperator:
    """dim^2 x dim^2 matrix acting on column-stacked operators."""

    dim: int
    matrix: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(x), self.dim)


def superoperator_of(ch: KrausChannel) -> Superoperator:
    """Matrix form sum_i conj(E_i) kron E_i under the column-stacking convention."""
    n = ch.dim
    if n > MAX_SUPEROPERATOR_DIM:
        raise ResourceLimitError(
            f"superoperator needs {n}^4 = {n**4} complex entries; "
            f"limit is dim <= {MAX_SUPEROPERATOR_DIM}. Reduce the truncation."
        )
    m = ch._pair_damping
    if m is not None:
        # Diagonal Kraus stack: S is diagonal with S[(a,c),(a,c)] = conj(M[a, c]).
        return Superoperator(dim=n, matrix=np.diag(m.conj().ravel()))
    flat = ch.kraus_ops.reshape(ch.kraus_truncation, n * n)
    # G[(a,b),(c,d)] = sum_i conj(E_i[a,b]) E_i[c,d]; regroup to kron layout.
    gram = flat.conj().T @ flat
    s = gram.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)
    return Superoperator(dim=n, matrix=s)
