"""phi-functions: scalar evaluation and their action through a cached eigenbasis.

phi_0(z) = exp(z),  phi_{j+1}(z) = (phi_j(z) - 1/j!) / z,  phi_j(0) = 1/j!.
"""
from __future__ import annotations

import math

import numpy as np

_TAYLOR_TOL = 1e-18
_TAYLOR_MAXTERMS = 400
_POSITIVE_DRIFT = 1e-10


class SpectrumError(RuntimeError):
    """Operator has eigenvalues on the wrong side of the axis."""


def phi_table(jmax, z):
    """Values phi_j(z) for j = 0..jmax at every (non-positive) z.

    Returns an array of shape ``(jmax + 1,) + z.shape``.

    The upward recursion divides by z and amplifies relative errors by
    (j+1)/|z| per step, so it is only used while j < |z|.  The remaining
    orders come from the Taylor series of phi_jmax and the downward recursion
    phi_j = z phi_{j+1} + 1/j!, which damps errors by |z|/(j+1) in that range.
    """
    if jmax < 0:
        raise ValueError(f"phi order must be nonnegative, got {jmax}")
    z = np.asarray(z, dtype=float)
    if np.any(z > 0):
        raise ValueError("phi evaluation is restricted to z <= 0")
    shape = z.shape
    z = z.ravel()
    out = np.empty((jmax + 1, z.size))
    out[0] = np.exp(z)
    if jmax == 0:
        return out.reshape((1,) + shape)

    az = np.abs(z)
    split = np.floor(az)  # orders j <= split use the upward recursion

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        up = np.empty_like(out)
        up[0] = out[0]
        for j in range(jmax):
            up[j + 1] = (up[j] - 1.0 / math.factorial(j)) / z

    need_down = split < jmax
    down = np.zeros_like(out)
    if np.any(need_down):
        zd = np.where(need_down, z, 0.0)
        down[jmax] = _taylor(jmax, zd)
        for j in range(jmax - 1, -1, -1):
            down[j] = zd * down[j + 1] + 1.0 / math.factorial(j)

    orders = np.arange(jmax + 1)[:, None]
    use_up = orders <= split[None, :]
    out = np.where(use_up, up, down)
    out[0] = np.exp(z)
    return out.reshape((jmax + 1,) + shape)


def _taylor(j, z):
    """phi_j(z) = sum_m z^m / (m+j)!, summed until terms drop below tolerance."""
    term = np.full_like(z, 1.0 / math.factorial(j))
    total = term.copy()
    for m in range(1, _TAYLOR_MAXTERMS):
        term = term * z / (m + j)
        total += term
        if np.all(np.abs(term) <= _TAYLOR_TOL * np.abs(total)):
            return total
    raise RuntimeError("Taylor series for phi did not converge")


def phi_scalar(j, z):
    """phi_j(z) for a single j >= 0 and z <= 0."""
    if j < 0:
        raise ValueError(f"phi order must be nonnegative, got {j}")
    val = phi_table(j, np.asarray(z, dtype=float))[j]
    return float(val) if np.ndim(val) == 0 else val


class PhiEvaluator:
    """phi_j(k A) v for a matrix ``A`` that a positive diagonal ``d`` symmetrizes.

    With ``S = diag(d) A diag(d)^-1 = V diag(lam) V^T`` every phi_j(kA)
    becomes ``diag(d)^-1 V diag(phi_j(k lam)) V^T diag(d)``.  Integrators can
    work directly in the coordinates ``V^T diag(d) v`` (see :meth:`to_modal`,
    :meth:`from_modal`) and pay two dense products per step.
    """

    def __init__(self, matrix, sym_diag=None):
        A = np.asarray(matrix, dtype=float)
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError("operator must be square")
        d = np.ones(n) if sym_diag is None else np.asarray(sym_diag, dtype=float)
        if d.shape != (n,) or np.any(d <= 0):
            raise ValueError("symmetrizer must be a positive vector of matching length")
        S = (d[:, None] * A) / d[None, :]
        S = 0.5 * (S + S.T)
        lam, V = np.linalg.eigh(S)
        scale = np.max(np.abs(lam)) if n else 0.0
        if np.any(lam > _POSITIVE_DRIFT * scale):
            raise SpectrumError(f"operator has a positive eigenvalue {lam.max():.3e}")
        lam = np.minimum(lam, 0.0)
        self.dim = n
        self.eigenvalues = lam
        self.eigenvectors = V
        self.sym_diag = d
        self._cache = {}

    def to_modal(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.dim:
            raise ValueError(f"vector has length {v.shape[0]}, expected {self.dim}")
        return self.eigenvectors.T @ (self.sym_diag[:, None] * v if v.ndim == 2 else self.sym_diag * v)

    def from_modal(self, w):
        out = self.eigenvectors @ w
        return out / (self.sym_diag[:, None] if out.ndim == 2 else self.sym_diag)

    def phi_values(self, jmax, k):
        """Table phi_j(k lam_m), j = 0..jmax; cached per (jmax, k)."""
        key = (jmax, float(k))
        tab = self._cache.get(key)
        if tab is None:
            tab = phi_table(jmax, k * self.eigenvalues)
            tab.setflags(write=False)
            if len(self._cache) > 64:
                self._cache.clear()
            self._cache[key] = tab
        return tab

    def apply(self, j, k, v):
        if k <= 0:
            raise ValueError(f"step size must be positive, got {k}")
        w = self.to_modal(v)
        ph = self.phi_values(j, k)[j]
        return self.from_modal(ph[:, None] * w if w.ndim == 2 else ph * w)

    def reconstruct(self):
        """The operator rebuilt from its factorization (diagnostics)."""
        d, V = self.sym_diag, self.eigenvectors
        return (V * self.eigenvalues) @ V.T * d[None, :] / d[:, None]


def phi_apply(ev, j, k, v):
    """phi_j(k A) v through a :class:`PhiEvaluator`."""
    return ev.apply(j, k, v)
