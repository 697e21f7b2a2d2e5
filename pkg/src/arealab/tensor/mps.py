"""Matrix-product states: canonical forms, entropies, expectation values.

Site tensors have shape (left bond, physical, right bond); open-boundary
chains have outer bond dimension 1. The orthogonality ``center`` is
tracked explicitly: tensors left of it are left-isometric, tensors right
of it right-isometric.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from ..errors import ConditioningWarning, ParameterError

__all__ = [
    "MatrixProductState",
    "product_mps",
    "random_mps",
    "mps_from_dense",
    "overlap",
    "expectation",
    "TransferOperator",
    "transfer_operator",
    "correlation_length",
    "cut_entropy",
    "save_mps",
    "load_mps",
]

_NORM_DRIFT = 1e-8


class MatrixProductState:
    """Finite MPS with explicit orthogonality-center bookkeeping."""

    def __init__(self, tensors, periodic: bool = False, center: int | None = None):
        self.tensors = [np.asarray(t, dtype=complex) for t in tensors]
        self.periodic = periodic
        self.center = center
        for k, t in enumerate(self.tensors):
            if t.ndim != 3:
                raise ParameterError("site tensors must be rank 3 (left, phys, right)")
            if k and self.tensors[k - 1].shape[2] != t.shape[0]:
                raise ParameterError(f"bond dimension mismatch at bond {k}")
        if not periodic:
            if self.tensors[0].shape[0] != 1 or self.tensors[-1].shape[2] != 1:
                raise ParameterError("open-boundary MPS needs outer bond dimension 1")

    # -- structure ---------------------------------------------------------

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def physical_dims(self) -> tuple[int, ...]:
        return tuple(t.shape[1] for t in self.tensors)

    def bond_dimensions(self) -> list[int]:
        return [t.shape[2] for t in self.tensors[:-1]]

    def copy(self) -> "MatrixProductState":
        return MatrixProductState([t.copy() for t in self.tensors], self.periodic, self.center)

    # -- dense interface ---------------------------------------------------

    def to_dense(self) -> np.ndarray:
        if self.periodic:
            acc = self.tensors[0]
            for t in self.tensors[1:]:
                acc = np.tensordot(acc, t, axes=(acc.ndim - 1, 0))
            # acc has (D0, i1..iN, D0); trace the outer bonds
            return np.trace(acc, axis1=0, axis2=acc.ndim - 1).reshape(-1)
        acc = self.tensors[0][0]  # (d, D)
        for t in self.tensors[1:]:
            acc = np.tensordot(acc, t, axes=(acc.ndim - 1, 0))
        return acc[..., 0].reshape(-1)

    def norm(self) -> float:
        return math.sqrt(abs(overlap(self, self).real))

    def normalize(self) -> "MatrixProductState":
        nrm = self.norm()
        if nrm == 0:
            raise ParameterError("cannot normalize the zero state")
        k = self.center if self.center is not None else 0
        self.tensors[k] = self.tensors[k] / nrm
        return self

    # -- canonical forms ---------------------------------------------------

    def canonicalize(self, center: int = 0) -> "MatrixProductState":
        """QR-sweep into mixed-canonical form with the given center."""
        if self.periodic:
            raise ParameterError("canonical forms implemented for open chains only")
        n = self.n_sites
        if not 0 <= center < n:
            raise ParameterError("center out of range")
        for k in range(center):
            self._push_right(k)
        for k in range(n - 1, center, -1):
            self._push_left(k)
        self.center = center
        return self

    def _push_right(self, k: int):
        t = self.tensors[k]
        dl, d, dr = t.shape
        q, r = np.linalg.qr(t.reshape(dl * d, dr))
        self.tensors[k] = q.reshape(dl, d, -1)
        self.tensors[k + 1] = np.tensordot(r, self.tensors[k + 1], axes=(1, 0))

    def _push_left(self, k: int):
        t = self.tensors[k]
        dl, d, dr = t.shape
        q, r = np.linalg.qr(t.reshape(dl, d * dr).conj().T)
        self.tensors[k] = q.conj().T.reshape(-1, d, dr)
        self.tensors[k - 1] = np.tensordot(self.tensors[k - 1], r.conj().T, axes=(2, 0))

    def move_center(self, to: int):
        if self.center is None:
            self.canonicalize(to)
            return
        while self.center < to:
            self._push_right(self.center)
            self.center += 1
        while self.center > to:
            self._push_left(self.center)
            self.center -= 1

    def schmidt_values(self, bond: int) -> np.ndarray:
        """Schmidt coefficients across ``bond`` (between sites bond-1, bond)."""
        if not 1 <= bond <= self.n_sites - 1:
            raise ParameterError("bond must satisfy 1 <= bond <= N-1")
        work = self.copy()
        work.canonicalize(center=bond)
        t = work.tensors[bond]
        dl = t.shape[0]
        return np.linalg.svd(t.reshape(dl, -1), compute_uv=False)


def product_mps(local_states) -> MatrixProductState:
    """D = 1 MPS from a list of local state vectors."""
    tensors = []
    for v in local_states:
        v = np.asarray(v, dtype=complex)
        tensors.append(v.reshape(1, v.size, 1))
    return MatrixProductState(tensors, center=0)


def random_mps(n: int, d: int, bond_dim: int, seed: int = 0) -> MatrixProductState:
    """Random normalized open-boundary MPS with bond dimension <= bond_dim."""
    rng = np.random.default_rng(seed)
    tensors = []
    dl = 1
    for k in range(n):
        dr = min(bond_dim, d ** (k + 1), d ** (n - k - 1)) if k < n - 1 else 1
        shape = (dl, d, dr)
        tensors.append(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        dl = dr
    mps = MatrixProductState(tensors)
    mps.canonicalize(0)
    mps.normalize()
    return mps


def mps_from_dense(psi: np.ndarray, d: int, n: int,
                   max_bond: int | None = None) -> tuple[MatrixProductState, float]:
    """Sequential SVD factorization of a dense state, capped at ``max_bond``.

    Returns the (normalized) MPS and the total discarded weight.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d**n:
        raise ParameterError("state dimension does not match d**n")
    tensors = []
    discarded = 0.0
    m = psi.reshape(1, -1)
    dl = 1
    for k in range(n - 1):
        m = m.reshape(dl * d, -1)
        u, s, vt = np.linalg.svd(m, full_matrices=False)
        keep = s > 1e-14 * (s[0] if s.size else 1.0)
        if max_bond is not None:
            keep &= np.arange(s.size) < max_bond
        w = float(np.sum(s[~keep] ** 2))
        discarded += w
        u, s, vt = u[:, keep], s[keep], vt[keep]
        tensors.append(u.reshape(dl, d, -1))
        m = (s[:, None] * vt)
        dl = s.size
    tensors.append(m.reshape(dl, d, 1))
    mps = MatrixProductState(tensors, center=n - 1)
    mps.normalize()
    return mps, discarded


def overlap(bra: MatrixProductState, ket: MatrixProductState) -> complex:
    """<bra|ket> for equal-length chains."""
    if bra.n_sites != ket.n_sites:
        raise ParameterError("length mismatch")
    env = np.ones((1, 1), dtype=complex)  # (bra bond, ket bond)
    for tb, tk in zip(bra.tensors, ket.tensors):
        env = np.tensordot(env, tk, axes=(1, 0))          # (brab, d, ketr)
        env = np.tensordot(tb.conj(), env, axes=([0, 1], [0, 1]))  # (brar, ketr)
    return complex(env[0, 0])


def expectation(mps: MatrixProductState, site_operators: dict) -> complex:
    """<psi| prod_k S_k |psi> with single-site operators S_k at given sites.

    Contracting site by site is the transfer-operator product
    tr[E_1 .. E_S .. E_1] evaluated without forming the D^2 x D^2 matrices.
    """
    ops = {int(k): np.asarray(v, dtype=complex) for k, v in site_operators.items()}
    if any(not 0 <= k < mps.n_sites for k in ops):
        raise ParameterError("operator site out of range")
    d_phys = mps.physical_dims
    for k, op in ops.items():
        if op.shape != (d_phys[k], d_phys[k]):
            raise ParameterError(f"operator at site {k} has wrong shape")
    if mps.periodic:
        dim = mps.tensors[0].shape[0]
        acc = None
        norm_acc = None
        for k, t in enumerate(mps.tensors):
            acc_k = transfer_operator(t, ops.get(k)).matrix
            norm_k = transfer_operator(t).matrix
            acc = acc_k if acc is None else acc @ acc_k
            norm_acc = norm_k if norm_acc is None else norm_acc @ norm_k
        return complex(_periodic_trace(acc, dim) / _periodic_trace(norm_acc, dim))
    env = np.ones((1, 1), dtype=complex)
    norm_env = np.ones((1, 1), dtype=complex)
    for k, t in enumerate(mps.tensors):
        ket = t if k not in ops else np.tensordot(ops[k], t, axes=(1, 1)).transpose(1, 0, 2)
        env = np.tensordot(env, ket, axes=(1, 0))
        env = np.tensordot(t.conj(), env, axes=([0, 1], [0, 1]))
        norm_env = np.tensordot(norm_env, t, axes=(1, 0))
        norm_env = np.tensordot(t.conj(), norm_env, axes=([0, 1], [0, 1]))
    return complex(env[0, 0] / norm_env[0, 0])


def _periodic_trace(acc: np.ndarray, dim: int) -> complex:
    # acc is the D^2 x D^2 product of transfer matrices, row (bra, ket):
    # trace over matching bra/ket pairs.
    t = acc.reshape(dim, dim, dim, dim)  # (bra_out, ket_out, bra_in, ket_in)
    return complex(np.einsum("abab->", t))


class TransferOperator:
    """D^2 x D^2 transfer matrix E_S of a site tensor with insertion S."""

    def __init__(self, matrix: np.ndarray, bond_dim: int):
        self.matrix = matrix
        self.bond_dim = bond_dim

    def spectrum(self) -> np.ndarray:
        vals = np.linalg.eigvals(self.matrix)
        return vals[np.argsort(-np.abs(vals))]


def transfer_operator(tensor: np.ndarray, operator: np.ndarray | None = None) -> TransferOperator:
    """E_S = sum_{jk} <j|S|k> A[k] (x) conj(A[j]); S = None means identity."""
    t = np.asarray(tensor, dtype=complex)
    dl, d, dr = t.shape
    ket = t if operator is None else np.tensordot(np.asarray(operator, dtype=complex),
                                                  t, axes=(1, 1)).transpose(1, 0, 2)
    e = np.einsum("aib,cid->acbd", t.conj(), ket)
    return TransferOperator(e.reshape(dl * dl, dr * dr), dl)


def correlation_length(mps: MatrixProductState, uniform_tensor: np.ndarray | None = None) -> dict:
    """Correlation length from the subleading transfer eigenvalue.

    For a uniform MPS (all site tensors equal, or an explicit tensor),
    connected correlators decay like |lambda_2|^(l-1) after normalizing the
    spectral radius to 1, so xi = -1 / ln|lambda_2|. A degenerate leading
    eigenvalue flags long-range order (xi = inf).
    """
    if uniform_tensor is None:
        t0 = mps.tensors[0]
        for t in mps.tensors[1:]:
            if t.shape != t0.shape or not np.allclose(t, t0, atol=1e-12):
                raise ParameterError("correlation length needs a uniform MPS")
        uniform_tensor = t0
    spec = transfer_operator(uniform_tensor).spectrum()
    lam1 = abs(spec[0])
    if lam1 == 0:
        raise ParameterError("zero transfer operator")
    ratios = np.abs(spec) / lam1
    if len(ratios) > 1 and ratios[1] > 1.0 - 1e-10:
        return {"xi": math.inf, "long_range_order": True, "lambda2": complex(spec[1] / lam1)}
    lam2 = float(ratios[1]) if len(ratios) > 1 else 0.0
    xi = 0.0 if lam2 == 0.0 else -1.0 / math.log(lam2)
    return {"xi": xi, "long_range_order": False,
            "lambda2": complex(spec[1] / lam1) if len(ratios) > 1 else 0.0j}


def cut_entropy(mps: MatrixProductState, bond: int, alpha: float = 1.0) -> float:
    """Renyi-alpha entropy (bits) of the Schmidt spectrum across a bond.

    Renormalizes with a warning when the squared Schmidt weights have
    drifted from 1 by more than 1e-8. For open chains the result is
    bounded by log2(D) at the cut, which is asserted.
    """
    s = mps.schmidt_values(bond)
    p = s**2
    drift = abs(float(p.sum()) - 1.0)
    if drift > _NORM_DRIFT:
        warnings.warn(f"normalization drift {drift:.3g}; renormalizing",
                      ConditioningWarning, stacklevel=2)
    p = p / p.sum()
    p = p[p > 1e-18]
    if alpha == 1.0:
        value = float(-(p * np.log2(p)).sum())
    elif math.isinf(alpha):
        value = float(-np.log2(p.max()))
    elif alpha > 0:
        value = float(np.log2((p**alpha).sum()) / (1.0 - alpha))
    else:
        raise ParameterError("Renyi order must be positive")
    bound = math.log2(max(s.size, 1)) + 1e-9
    assert value <= bound + 1e-9, "cut entropy exceeded log2(D)"
    return value


def save_mps(mps: MatrixProductState, path) -> None:
    """Checkpoint format v1: npz with n_sites, periodic, center, tensor_{k}."""
    payload = {
        "format_version": np.int64(1),
        "n_sites": np.int64(mps.n_sites),
        "periodic": np.int64(1 if mps.periodic else 0),
        "center": np.int64(-1 if mps.center is None else mps.center),
    }
    for k, t in enumerate(mps.tensors):
        payload[f"tensor_{k:04d}"] = t
    np.savez(path, **payload)


def load_mps(path) -> MatrixProductState:
    with np.load(path) as data:
        version = int(data["format_version"])
        if version != 1:
            raise ParameterError(f"unsupported checkpoint version {version}")
        n = int(data["n_sites"])
        center = int(data["center"])
        tensors = [data[f"tensor_{k:04d}"] for k in range(n)]
        return MatrixProductState(tensors, periodic=bool(int(data["periodic"])),
                                  center=None if center < 0 else center)
