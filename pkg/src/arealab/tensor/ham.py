"""Nearest-neighbor chain Hamiltonians and their MPO form.

A LocalHamiltonian1D is a list of two-site bond matrices (d^2 x d^2, acting
on sites j, j+1) plus optional single-site fields. The MPO is built with
the usual finite-state construction, with each bond term factorized by an
operator SVD so arbitrary two-site interactions are supported.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError

__all__ = ["LocalHamiltonian1D", "MatrixProductOperator", "transverse_ising_hamiltonian",
           "xy_hamiltonian"]


class LocalHamiltonian1D:
    """H = sum_j h_(j,j+1) + sum_j field_j on an open chain."""

    def __init__(self, bond_terms, fields=None, d: int = 2):
        self.d = d
        self.bond_terms = [np.asarray(h, dtype=complex) for h in bond_terms]
        n = len(self.bond_terms) + 1
        self.n_sites = n
        if fields is None:
            fields = [None] * n
        self.fields = [None if f is None else np.asarray(f, dtype=complex) for f in fields]
        if len(self.fields) != n:
            raise ParameterError("need one field slot per site")
        for h in self.bond_terms:
            if h.shape != (d * d, d * d):
                raise ParameterError("bond terms must be d^2 x d^2")
            if np.abs(h - h.conj().T).max() > 1e-12 * max(np.abs(h).max(), 1.0):
                raise ParameterError("bond terms must be Hermitian")
        for f in self.fields:
            if f is not None and f.shape != (d, d):
                raise ParameterError("fields must be d x d")

    @property
    def interaction_strength(self) -> float:
        """J = max operator norm over bond terms."""
        return max((float(np.linalg.norm(h, 2)) for h in self.bond_terms), default=0.0)

    def combined_bond_terms(self) -> list[np.ndarray]:
        """Bond terms with the single-site fields folded in (for Trotter gates).

        Interior sites contribute half their field to each adjacent bond;
        edge sites put their full field on their only bond.
        """
        d, n = self.d, self.n_sites
        eye = np.eye(d)
        combined = [h.copy() for h in self.bond_terms]
        for j, f in enumerate(self.fields):
            if f is None:
                continue
            left_share = 0.0 if j == 0 else (1.0 if j == n - 1 else 0.5)
            right_share = 1.0 - left_share if j < n - 1 else 0.0
            if j > 0 and left_share:
                combined[j - 1] += left_share * np.kron(eye, f)
            if j < n - 1 and right_share:
                combined[j] += right_share * np.kron(f, eye)
        return combined

    def to_mpo(self) -> "MatrixProductOperator":
        d, n = self.d, self.n_sites
        eye = np.eye(d, dtype=complex)
        # operator-SVD factorization of each bond term: h = sum_a L_a (x) R_a
        factors = []
        for h in self.bond_terms:
            t = h.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
            u, s, vt = np.linalg.svd(t)
            keep = s > 1e-13 * (s[0] if s.size else 1.0)
            ops_l = [(u[:, a] * s[a]).reshape(d, d) for a in np.nonzero(keep)[0]]
            ops_r = [vt[a].reshape(d, d) for a in np.nonzero(keep)[0]]
            factors.append((ops_l, ops_r))
        tensors = []
        for j in range(n):
            r_in = len(factors[j - 1][0]) if j > 0 else 0
            r_out = len(factors[j][0]) if j < n - 1 else 0
            wl = 1 if j == 0 else r_in + 2
            wr = 1 if j == n - 1 else r_out + 2
            w = np.zeros((wl, wr, d, d), dtype=complex)
            field = self.fields[j] if self.fields[j] is not None else np.zeros((d, d))
            if j == 0:
                w[0, 0] = eye
                for a, op in enumerate(factors[0][0]):
                    w[0, 1 + a] = op
                w[0, wr - 1] = field
            elif j == n - 1:
                w[0, 0] = field
                for a, op in enumerate(factors[j - 1][1]):
                    w[1 + a, 0] = op
                w[wl - 1, 0] = eye
            else:
                w[0, 0] = eye
                for a, op in enumerate(factors[j][0]):
                    w[0, 1 + a] = op
                w[0, wr - 1] = field
                for a, op in enumerate(factors[j - 1][1]):
                    w[1 + a, wr - 1] = op
                w[wl - 1, wr - 1] = eye
            tensors.append(w)
        return MatrixProductOperator(tensors)


class MatrixProductOperator:
    """MPO with site tensors (w_left, w_right, phys_out, phys_in)."""

    def __init__(self, tensors):
        self.tensors = [np.asarray(t, dtype=complex) for t in tensors]

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    def to_dense(self) -> np.ndarray:
        acc = self.tensors[0][0]  # (wr, out, in)
        for t in self.tensors[1:]:
            acc = np.tensordot(acc, t, axes=(0, 0))  # eats wr, appends (wr', out, in)
            acc = np.moveaxis(acc, -3, 0)
        acc = acc[0]  # final right bond has dimension 1
        n = self.n_sites
        d = self.tensors[0].shape[2]
        out_axes = [2 * k for k in range(n)]
        in_axes = [2 * k + 1 for k in range(n)]
        return np.transpose(acc, out_axes + in_axes).reshape(d**n, d**n)


def _pauli():
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    return sx, sy, sz


def xy_hamiltonian(n: int, gamma: float, lam: float) -> LocalHamiltonian1D:
    """Open XY chain matching the dense reference convention:
    -[(1+gamma)/4 XX + (1-gamma)/4 YY] per bond, -lam/2 Z per site."""
    sx, sy, sz = _pauli()
    bond = -((1 + gamma) / 4.0 * np.kron(sx, sx) + (1 - gamma) / 4.0 * np.kron(sy, sy))
    return LocalHamiltonian1D([bond] * (n - 1), [-lam / 2.0 * sz] * n)


def transverse_ising_hamiltonian(n: int, lam: float) -> LocalHamiltonian1D:
    return xy_hamiltonian(n, gamma=1.0, lam=lam)
