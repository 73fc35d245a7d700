"""
Euler-angle parameterization of SO(4) and the real two-qubit density
matrices built from it.

The group element is

    g(x1..x6) = exp(x1 T3) exp(x2 T2) exp(x3 T4) exp(x4 T3) exp(x5 T2) exp(x6 T3)

and a density matrix with spectrum ``lam`` is ``g diag(lam) g^T``.  Each
exponential is a plane (Givens) rotation, so nothing here needs a matrix
exponential.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

# generator index -> (row, col) of its +1 entry
PLANES = {1: (0, 1), 2: (0, 2), 3: (1, 2), 4: (0, 3), 5: (1, 3), 6: (2, 3)}

# generator used by each Euler angle, in product order
FACTORS = (3, 2, 4, 3, 2, 3)

ANGLE_RANGES = (
    (0.0, TWO_PI),
    (0.0, np.pi),
    (0.0, np.pi),
    (0.0, TWO_PI),
    (0.0, np.pi),
    (0.0, TWO_PI),
)

# integral of sin(x2) sin(x3)^2 sin(x5) over ANGLE_RANGES
HAAR_VOLUME = 16.0 * np.pi**4


@dataclass(frozen=True)
class EulerAngles6:
    """Six SO(4) Euler coordinates, in radians."""

    x1: float
    x2: float
    x3: float
    x4: float
    x5: float
    x6: float

    @classmethod
    def from_values(cls, values, mode="strict"):
        """Build from a length-6 sequence.

        ``mode="strict"`` rejects values outside the canonical box;
        ``mode="wrap"`` reduces every angle modulo 2*pi (the group element
        is unchanged, but x2, x3, x5 may then exceed pi).
        """
        x = np.asarray(values, dtype=float)
        if x.shape != (6,):
            raise ValueError(f"expected 6 angles, got shape {x.shape}")
        if mode == "wrap":
            x = np.mod(x, TWO_PI)
        elif mode == "strict":
            check_ranges(x)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        return cls(*map(float, x))

    def as_array(self):
        return np.array([self.x1, self.x2, self.x3, self.x4, self.x5, self.x6])


def check_ranges(x, atol=1e-12):
    x = np.asarray(x, dtype=float)
    for k, (lo, hi) in enumerate(ANGLE_RANGES):
        v = x[..., k]
        if np.any(v < lo - atol) or np.any(v > hi + atol):
            raise ValueError(f"x{k + 1} outside [{lo}, {hi}]")


def generator(i):
    """The so(4) basis matrix T_i (i = 1..6)."""
    if i not in PLANES:
        raise ValueError(f"generator index must be in 1..6, got {i!r}")
    a, b = PLANES[i]
    t = np.zeros((4, 4))
    t[a, b] = 1.0
    t[b, a] = -1.0
    return t


def rotation(i, t):
    """exp(t T_i) in closed form; `t` may be an array."""
    if i not in PLANES:
        raise ValueError(f"generator index must be in 1..6, got {i!r}")
    a, b = PLANES[i]
    t = np.asarray(t, dtype=float)
    r = np.broadcast_to(np.eye(4), t.shape + (4, 4)).copy()
    c, s = np.cos(t), np.sin(t)
    r[..., a, a] = c
    r[..., b, b] = c
    r[..., a, b] = s
    r[..., b, a] = -s
    return r


def _apply_right(g, i, t):
    # g <- g @ exp(t T_i), touching only the two affected columns
    a, b = PLANES[i]
    c = np.cos(t)[..., None]
    s = np.sin(t)[..., None]
    col_a = g[..., :, a].copy()
    col_b = g[..., :, b].copy()
    g[..., :, a] = c * col_a - s * col_b
    g[..., :, b] = s * col_a + c * col_b


def group_element(x):
    """The SO(4) element for Euler angles ``x[..., 0:6]``."""
    if isinstance(x, EulerAngles6):
        x = x.as_array()
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 6:
        raise ValueError(f"expected 6 angles in the last axis, got shape {x.shape}")
    g = np.broadcast_to(np.eye(4), x.shape[:-1] + (4, 4)).copy()
    for k, i in enumerate(FACTORS):
        _apply_right(g, i, x[..., k])
    return g


def haar_density(x):
    """Invariant-measure density sin(x2) sin(x3)^2 sin(x5)."""
    if isinstance(x, EulerAngles6):
        x = x.as_array()
    x = np.asarray(x, dtype=float)
    return np.sin(x[..., 1]) * np.sin(x[..., 2]) ** 2 * np.sin(x[..., 4])


def rho_real(x, lam):
    """Real density matrix ``g diag(lam) g^T`` (broadcasts over leading axes)."""
    g = group_element(x)
    lam = np.asarray(lam, dtype=float)
    rho = np.einsum("...ik,...k,...jk->...ij", g, lam, g)
    # exact symmetry, not just up to rounding
    return 0.5 * (rho + np.swapaxes(rho, -1, -2))


def rho_example1(x1, lam):
    """The one-free-angle family with x4=x6=pi, x2=x3=x5=pi/2, x1 free."""
    l1, l2, l3 = (float(v) for v in np.asarray(lam)[:3])
    x1 = np.asarray(x1, dtype=float)
    c2, s2 = np.cos(x1) ** 2, np.sin(x1) ** 2
    S = l1 + l2 + l3 - 1.0
    b = -0.5 * np.sin(2.0 * x1) * (l1 + 2.0 * l2 + l3 - 1.0)
    rho = np.zeros(x1.shape + (4, 4))
    rho[..., 0, 0] = l1
    rho[..., 1, 1] = c2 * l2 - s2 * S
    rho[..., 1, 2] = b
    rho[..., 2, 1] = b
    rho[..., 2, 2] = s2 * l2 - c2 * S
    rho[..., 3, 3] = l3
    return rho


def rho_example2(x5, lam):
    """The one-free-angle family with x1=x4=x6=pi, x2=x3=pi/2, x5 free."""
    l1, l2, l3 = (float(v) for v in np.asarray(lam)[:3])
    x5 = np.asarray(x5, dtype=float)
    c, s = np.cos(x5), np.sin(x5)
    off = c * s * l3 - c * s * l1
    rho = np.zeros(x5.shape + (4, 4))
    rho[..., 0, 0] = l3 * c * c + s * s * l1
    rho[..., 0, 3] = off
    rho[..., 3, 0] = off
    rho[..., 1, 1] = l2
    rho[..., 2, 2] = 1.0 - l1 - l2 - l3
    rho[..., 3, 3] = l1 * c * c + s * s * l3
    return rho
