"""
Spectral separability conditions and the PPT determinants of the
one- and two-angle families.

All spectral functions take sorted (nonascending) eigenvalues in the last
axis, so they work unchanged on a single spectrum or on an ``(n, dim)``
batch of samples.  Sorting is the caller's job.
"""

from dataclasses import dataclass

import numpy as np

SQRT2 = np.sqrt(2.0)


def _cols(lam, dim=None):
    lam = np.asarray(lam, dtype=float)
    if dim is not None and lam.shape[-1] != dim:
        raise ValueError(f"expected {dim} eigenvalues, got {lam.shape[-1]}")
    return [lam[..., k] for k in range(lam.shape[-1])]


# --- PPT determinants of the angle families ---------------------------------

def ppt_det_ex1(x1, lam):
    """PPT determinant (up to a nonnegative factor) for the x1-free family."""
    l1, l2, l3 = _cols(lam)[:3]
    return l1 * l3 - 0.25 * np.sin(2.0 * x1) ** 2 * (l1 + 2.0 * l2 + l3 - 1.0) ** 2


def ppt_det_ex2(x5, lam):
    """PPT determinant (up to a nonnegative factor) for the x5-free family."""
    l1, l2, l3 = _cols(lam)[:3]
    return -0.25 * np.sin(2.0 * x5) ** 2 * (l1 - l3) ** 2 - l2 * (l1 + l2 + l3 - 1.0)


def ppt_det_two_angle(x1, x5, lam):
    """Determinant of the (x1, x5)-coupled 2x2 block of the partial transpose.

    This is only one of two blocks: the other one,
    :func:`ppt_det_two_angle_block2`, is also needed for full positivity.
    """
    l1, l2, l3 = _cols(lam)[:3]
    c2, s2 = np.cos(x5) ** 2, np.sin(x5) ** 2
    return (l3 * c2 + s2 * l1) * (l1 * c2 + s2 * l3) - 0.25 * np.sin(2.0 * x1) ** 2 * (
        l1 + 2.0 * l2 + l3 - 1.0
    ) ** 2


def ppt_det_two_angle_block2(x1, x5, lam):
    """Determinant of the remaining 2x2 block of the two-angle partial transpose."""
    l1, l2, l3, l4 = _cols(lam, 4)
    c2, s2 = np.cos(x1) ** 2, np.sin(x1) ** 2
    return (l2 * c2 + l4 * s2) * (l2 * s2 + l4 * c2) - 0.25 * np.sin(2.0 * x5) ** 2 * (l1 - l3) ** 2


# --- two-qubit absolute-separability bounds ---------------------------------

def vad(lam):
    """lambda1 - lambda3 - 2 sqrt(lambda2 lambda4); negative => absolutely separable."""
    l1, l2, l3, l4 = _cols(lam, 4)
    return l1 - l3 - 2.0 * np.sqrt(l2 * l4)


def vad_tilde(lam):
    """Negativity-based bound sqrt((l1-l3)^2 + (l2-l4)^2) - l2 - l4."""
    l1, l2, l3, l4 = _cols(lam, 4)
    return np.hypot(l1 - l3, l2 - l4) - l2 - l4


def u_of(lam):
    """U = 2 sqrt(l2 l4) / (l1 - l3).

    Returns NaN where l1 == l3; there the VAD value is -2 sqrt(l2 l4) <= 0
    and the spectrum is absolutely separable.
    """
    l1, l2, l3, l4 = _cols(lam, 4)
    d = l1 - l3
    with np.errstate(divide="ignore", invalid="ignore"):
        u = 2.0 * np.sqrt(l2 * l4) / d
    return np.where(d > 0, u, np.nan)[()]


def v_of(lam):
    return u_of(lam) ** 2


def w_of(lam):
    return 1.0 - 2.0 * v_of(lam)


def purity(lam):
    lam = np.asarray(lam, dtype=float)
    return np.sum(lam * lam, axis=-1)


def purity_threshold(dim):
    return 1.0 / (dim - 1)


def purity_ok(lam):
    """Purity ball test: sum(l^2) <= 1/3 (two qubits) or 1/5 (qubit-qutrit)."""
    lam = np.asarray(lam, dtype=float)
    dim = lam.shape[-1]
    if dim not in (4, 6):
        raise ValueError(f"purity bound defined for dim 4 or 6, got {dim}")
    return purity(lam) <= purity_threshold(dim)


def cr1_lhs(lam):
    l1, l2, l3 = _cols(lam, 4)[:3]
    return 3.0 * l1 + SQRT2 * l2 + (3.0 - SQRT2) * l3


def cr1(lam):
    """Linear two-qubit condition 3 l1 + sqrt2 l2 + (3 - sqrt2) l3 <= 2."""
    return cr1_lhs(lam) <= 2.0


def cr2(lam):
    """General condition specialised to two qubits: 3 l3 + 3 l4 >= 1."""
    _, _, l3, l4 = _cols(lam, 4)
    return 3.0 * l3 + 3.0 * l4 >= 1.0


def qq_cr2(lam):
    """Qubit-qutrit form 3 l6 + 5 l5 >= 1."""
    c = _cols(lam, 6)
    return 3.0 * c[5] + 5.0 * c[4] >= 1.0


def hildebrand(lam):
    """Qubit-qutrit bound l1 - l5 - 2 sqrt(l4 l6); negative => absolutely separable."""
    c = _cols(lam, 6)
    return c[0] - c[4] - 2.0 * np.sqrt(c[3] * c[5])


# --- criteria as level functions ---------------------------------------------

# kind -> (dimension, level function, strict inequality); region is level < 0
# (or <= 0 when not strict).  The level function is the criterion exactly
# as written, so that area ratios are derivatives with respect to it.
_KINDS = {
    "purity": (None, lambda lam: purity(lam) - purity_threshold(np.shape(lam)[-1]), False),
    "vad": (4, vad, True),
    "vad_tilde": (4, vad_tilde, True),
    "cr1": (4, lambda lam: cr1_lhs(lam) - 2.0, False),
    "cr2": (4, lambda lam: 1.0 - 3.0 * np.asarray(lam)[..., 2] - 3.0 * np.asarray(lam)[..., 3], False),
    "hildebrand": (6, hildebrand, True),
    "qq_cr2": (6, lambda lam: 1.0 - 3.0 * np.asarray(lam)[..., 5] - 5.0 * np.asarray(lam)[..., 4], False),
}

KINDS = tuple(_KINDS)


@dataclass(frozen=True)
class CriterionSpec:
    kind: str
    dim: int = 4

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown criterion {self.kind!r}; choose from {KINDS}")
        need = _KINDS[self.kind][0]
        if need is None:
            if self.dim not in (4, 6):
                raise ValueError("purity criterion needs dim 4 or 6")
        elif self.dim != need:
            raise ValueError(f"criterion {self.kind!r} requires dim {need}, got {self.dim}")

    def level(self, lam):
        return _KINDS[self.kind][1](lam)

    def holds(self, lam):
        f = self.level(lam)
        return f < 0 if _KINDS[self.kind][2] else f <= 0

    def gradient(self, lam, h=1e-6):
        """Gradient of the level function in R^dim (all eigenvalues independent)."""
        lam = np.asarray(lam, dtype=float)
        if self.kind == "vad":
            l1, l2, l3, l4 = _cols(lam, 4)
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.stack(
                    [np.ones_like(l1), -np.sqrt(l4 / l2), -np.ones_like(l1), -np.sqrt(l2 / l4)], axis=-1
                )
        if self.kind == "cr1":
            return np.broadcast_to(np.array([3.0, SQRT2, 3.0 - SQRT2, 0.0]), lam.shape)
        if self.kind == "cr2":
            return np.broadcast_to(np.array([0.0, 0.0, -3.0, -3.0]), lam.shape)
        if self.kind == "qq_cr2":
            return np.broadcast_to(np.array([0.0, 0.0, 0.0, 0.0, -5.0, -3.0]), lam.shape)
        grad = np.empty_like(lam)
        for k in range(lam.shape[-1]):
            step = np.zeros(lam.shape[-1])
            step[k] = h
            grad[..., k] = (self.level(lam + step) - self.level(lam - step)) / (2.0 * h)
        return grad


# --- tetrahedral dihedral angle -------------------------------------------------

def dihedral_a(n):
    """Integer a(n) with cos(n arccos(1/3)) = a(n) / 3**n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    a_prev, a = 1, 1
    if n == 0:
        return a_prev
    for _ in range(n - 1):
        a_prev, a = a, 2 * a - 9 * a_prev
    return a


def max_absep_eigenvalues():
    """Largest values of l1..l4 on the boundary surface VAD = 0."""
    return (0.5, (2.0 + SQRT2) / 8.0, 1.0 / 3.0, 1.0 / 6.0)
