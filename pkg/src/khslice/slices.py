"""Exact and numerical linear algebra for the (m,m)-type nilpotent slice.

A slice element is a 2m x 2m matrix assembled from m blocks of size 2x2
sitting in the first block column (the top one trace-free), with
identity blocks on the superdiagonal:

        [ y_1  I        ]
        [ y_2  .  I     ]
    y = [ ...       ... ]
        [ y_{m-1}     I ]
        [ y_m   0 ... 0 ]

With all blocks zero this is the nilpotent with two Jordan blocks of
size m.  The adjoint quotient is the eigenvalue multiset; the C*-action
scales block y_i by r^(2i) and all eigenvalues by r^2.

The sl_3 slice normal form: the characteristic polynomial of
[[alpha, 0, 1], [beta, -2 alpha, 0], [delta, gamma, alpha]] equals
t^3 - t d + (a^3 - a d + b c) for (a, b, c, d) =
(2 alpha, beta, -gamma, 3 alpha^2 + delta); the verification is carried
out in exact rational arithmetic for rational inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment


class SliceError(ValueError):
    pass


@dataclass(frozen=True)
class SliceMatrix:
    """m 2x2 complex blocks, the first one trace-free."""

    m: int
    blocks: tuple  # tuple of m 2x2 complex ndarrays (stored as nested tuples)

    @staticmethod
    def make(blocks: Sequence) -> "SliceMatrix":
        blocks = tuple(
            tuple(tuple(complex(x) for x in row) for row in np.asarray(b, dtype=complex))
            for b in blocks
        )
        m = len(blocks)
        if m < 1:
            raise SliceError("need at least one block")
        for b in blocks:
            if len(b) != 2 or any(len(r) != 2 for r in b):
                raise SliceError("blocks must be 2x2")
        tr = blocks[0][0][0] + blocks[0][1][1]
        if abs(tr) > 1e-12:
            raise SliceError(f"trace(y_11) = {tr} violates the sl_2 constraint")
        return SliceMatrix(m, blocks)

    def block_arrays(self):
        return [np.array(b, dtype=complex) for b in self.blocks]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "blocks": [
                [[x.real, x.imag] for row in b for x in row] for b in self.blocks
            ],
        }

    @staticmethod
    def from_json(d: dict) -> "SliceMatrix":
        blocks = []
        for flat in d["blocks"]:
            vals = [complex(re, im) for re, im in flat]
            blocks.append([[vals[0], vals[1]], [vals[2], vals[3]]])
        return SliceMatrix.make(blocks)


def random_slice(rng: np.random.Generator, m: int, scale: float = 1.0) -> SliceMatrix:
    blocks = []
    for i in range(m):
        b = scale * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        if i == 0:
            b[1, 1] = -b[0, 0]
        blocks.append(b)
    return SliceMatrix.make(blocks)


def assemble(y: SliceMatrix) -> np.ndarray:
    m = y.m
    out = np.zeros((2 * m, 2 * m), dtype=complex)
    for i, b in enumerate(y.block_arrays()):
        out[2 * i : 2 * i + 2, 0:2] = b
        if i < m - 1:
            out[2 * i : 2 * i + 2, 2 * i + 2 : 2 * i + 4] = np.eye(2)
    return out


@dataclass(frozen=True)
class EigenConfiguration:
    """Unordered eigenvalues with multiplicities (trace-free: they sum to 0)."""

    values: tuple

    @staticmethod
    def of(values) -> "EigenConfiguration":
        vals = tuple(sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag)))
        return EigenConfiguration(vals)

    def __len__(self):
        return len(self.values)

    def scaled(self, factor: complex) -> "EigenConfiguration":
        return EigenConfiguration.of([factor * v for v in self.values])


def adjoint_quotient(y: SliceMatrix) -> EigenConfiguration:
    """Eigenvalue multiset of the assembled matrix (the characteristic
    polynomial, viewed as a point of h/W)."""
    return EigenConfiguration.of(np.linalg.eigvals(assemble(y)))


def eigen_match_distance(a: EigenConfiguration, b: EigenConfiguration) -> float:
    """Optimal-assignment (Hungarian) matching distance between eigenvalue
    multisets; eigenvalue ordering is not canonical, so compare matched."""
    if len(a) != len(b):
        raise SliceError("eigenvalue multisets of different cardinality")
    av = np.array(a.values)
    bv = np.array(b.values)
    cost = np.abs(av[:, None] - bv[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def eigenprojection_injective(y: SliceMatrix, mu: complex, rel_tol: float = 1e-8) -> bool:
    """Whether projection to the first two coordinates is injective on
    ker(mu - y), via a singular-value test on the projected kernel basis."""
    a = assemble(y)
    n = a.shape[0]
    mat = mu * np.eye(n) - a
    _u, s, vh = np.linalg.svd(mat)
    scale = max(s[0], 1.0)
    kernel = vh.conj().T[:, s <= rel_tol * scale]
    if kernel.shape[1] == 0:
        return True  # mu is not an eigenvalue; vacuous
    proj = kernel[:2, :]
    ps = np.linalg.svd(proj, compute_uv=False)
    if ps.size < kernel.shape[1]:
        return False
    return bool(ps[kernel.shape[1] - 1] > rel_tol)


def embed_lower(y: SliceMatrix) -> SliceMatrix:
    """The canonical embedding of the (m-1)-slice into the m-slice: append a
    zero block; the spectrum gains {0, 0}."""
    blocks = [np.array(b, dtype=complex) for b in y.blocks]
    blocks.append(np.zeros((2, 2)))
    return SliceMatrix.make(blocks)


def cstar_action(r: complex, y: SliceMatrix) -> SliceMatrix:
    """Scale block y_i by r^(2i); equivariantly scales eigenvalues by r^2."""
    r = complex(r)
    if r == 0:
        raise SliceError("the C*-action needs r != 0")
    blocks = [np.array(b, dtype=complex) * r ** (2 * (i + 1)) for i, b in enumerate(y.blocks)]
    return SliceMatrix.make(blocks)


def critical_values(d: complex) -> tuple[complex, complex]:
    """The two critical values (zeta_minus, zeta_plus) of
    pi_d(a,b,c) = a^3 - a d + b c, satisfying 27 zeta^2 = 4 d^3; for real
    d > 0 the plus value is positive."""
    z = np.sqrt(complex(4 * d**3 / 27))
    if z.real < 0 or (z.real == 0 and z.imag < 0):
        z = -z
    return (-z, z)


# -- sl_3 normal form, exact ---------------------------------------------------


@dataclass(frozen=True)
class A2Coordinates:
    a: complex
    b: complex
    c: complex
    d: complex

    def chi(self) -> tuple[complex, complex]:
        """The adjoint-quotient image (d, a^3 - a d + b c)."""
        return (self.d, self.a**3 - self.a * self.d + self.b * self.c)


class _QC:
    """Gaussian rationals: exact complex numbers with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, o):
        return _QC(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return _QC(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return _QC(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __neg__(self):
        return _QC(-self.re, -self.im)

    def __eq__(self, o):
        return self.re == o.re and self.im == o.im

    def __repr__(self):
        return f"({self.re}+{self.im}i)"


def _char3_coeffs(y):
    """Coefficients (c2, c1, c0) of det(t - y) = t^3 + c2 t^2 + c1 t + c0 for
    a 3x3 matrix over any commutative ring."""
    (a11, a12, a13), (a21, a22, a23), (a31, a32, a33) = y
    c2 = -(a11 + a22 + a33)
    c1 = (
        a11 * a22 - a12 * a21 + a11 * a33 - a13 * a31 + a22 * a33 - a23 * a32
    )
    c0 = -(
        a11 * (a22 * a33 - a23 * a32)
        - a12 * (a21 * a33 - a23 * a31)
        + a13 * (a21 * a32 - a22 * a31)
    )
    return c2, c1, c0


def sl3_normal_form(alpha, beta, gamma, delta, tol: float = 1e-10):
    """Map sl_3-slice coordinates to A2Coordinates and verify the
    characteristic-polynomial identity.

    Rational (Fraction-valued) inputs are verified exactly; floats to
    ``tol``.  The paper's printed coordinate change carries a sign typo in
    delta; the identity pins d = (3/4) a^2 + delta.
    """
    exact = all(
        isinstance(v, (int, Fraction))
        or (isinstance(v, tuple) and all(isinstance(p, (int, Fraction)) for p in v))
        for v in (alpha, beta, gamma, delta)
    )
    if exact:

        def lift(v):
            if isinstance(v, tuple):
                return _QC(v[0], v[1])
            return _QC(v, 0)

        al, be, ga, de = (lift(v) for v in (alpha, beta, gamma, delta))
        two = _QC(2)
        three = _QC(3)
        a = two * al
        b = be
        c = -ga
        d = three * al * al + de
        y = (
            (al, _QC(0), _QC(1)),
            (be, -two * al, _QC(0)),
            (de, ga, al),
        )
        c2, c1, c0 = _char3_coeffs(y)
        want_c2 = _QC(0)
        want_c1 = -d
        want_c0 = a * a * a - a * d + b * c
        if not (c2 == want_c2 and c1 == want_c1 and c0 == want_c0):
            raise SliceError("exact sl_3 characteristic identity failed")

        def unlift(q):
            return complex(float(q.re), float(q.im))

        return A2Coordinates(unlift(a), unlift(b), unlift(c), unlift(d))

    al, be, ga, de = (complex(v) for v in (alpha, beta, gamma, delta))
    a = 2 * al
    b = be
    c = -ga
    d = 3 * al**2 + de
    y = ((al, 0, 1), (be, -2 * al, 0), (de, ga, al))
    c2, c1, c0 = _char3_coeffs(y)
    residual = max(abs(c2), abs(c1 - (-d)), abs(c0 - (a**3 - a * d + b * c)))
    if residual > tol:
        raise SliceError(f"sl_3 characteristic identity residual {residual}")
    return A2Coordinates(a, b, c, d)


# -- numerical Jacobian of the adjoint quotient --------------------------------


def _char_coeffs_of(y: SliceMatrix) -> np.ndarray:
    """Nontrivial characteristic polynomial coefficients (degree 2m-2 .. 0);
    the t^(2m-1) coefficient vanishes identically on the slice."""
    p = np.poly(assemble(y))
    return p[2:]


def adjoint_jacobian_rank(y: SliceMatrix, step: float = 1e-6, rel_tol: float = 1e-6) -> int:
    """Numerical rank of the complex Jacobian of y -> char coefficients via
    central differences over the 4m - 1 free block entries."""
    blocks = y.block_arrays()
    coords = []
    for i in range(y.m):
        entries = [(0, 0), (0, 1), (1, 0)] if i == 0 else [(0, 0), (0, 1), (1, 0), (1, 1)]
        for r, c in entries:
            coords.append((i, r, c))

    def perturb(idx, dz):
        bs = [b.copy() for b in blocks]
        i, r, c = coords[idx]
        bs[i][r, c] += dz
        if i == 0 and r == c:
            bs[0][1 - r, 1 - c] -= dz  # keep y_11 trace-free
        return SliceMatrix.make(bs)

    cols = []
    for idx in range(len(coords)):
        fp = _char_coeffs_of(perturb(idx, step))
        fm = _char_coeffs_of(perturb(idx, -step))
        cols.append((fp - fm) / (2 * step))
    jac = np.array(cols).T
    s = np.linalg.svd(jac, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))
