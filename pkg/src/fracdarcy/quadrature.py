"""Quadrature for the singular element-pair integrals and the complement
tails behind the nonlocal bilinear forms.

Two kernel families arise. The diffusion form pairs basis differences
against the strongly singular kernel |x-y|^(-(d+2s)); the gradient coupling
pairs a basis value against the weakly singular moment kernel
|x-y|^(-(d-1+s)). In 1d every pair integral reduces to closed-form
antiderivatives or short exact rules. In 2d, touching pairs are split into
subregions in which the distance degenerates along a single scaling
direction; that direction is integrated exactly by a small Gauss-Jacobi
rule, the in-element position by rules exact for the polynomial numerators,
and the remaining angular directions by tensor Gauss of the configured
order. Disjoint pairs use plain tensor Gauss.

The numerator's vanishing order on the shared set enters the radial Jacobi
weight, so integrability is decided exactly instead of being discovered
through blow-up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import roots_jacobi

RELATIONS = ("identical", "shared-edge", "shared-vertex", "disjoint")

# degree-2 exact rule on the reference triangle {u >= 0, u1 + u2 <= 1};
# sufficient for every position integral of an affine-pair numerator
_TRI3 = np.array([[1 / 6, 1 / 6], [2 / 3, 1 / 6], [1 / 6, 2 / 3]])
_TRI3W = np.array([1 / 6, 1 / 6, 1 / 6])


@dataclass(frozen=True)
class PairConfig:
    """Pair relation plus quadrature points per remaining smooth axis."""

    relation: str
    order: int = 5

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown pair relation {self.relation!r}")
        if self.order < 2:
            raise ValueError(f"order must be at least 2, got {self.order}")


def gauss01(n: int):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def jacobi01(n: int, p: float, q: float):
    """Nodes and weights integrating xi^p (1-xi)^q f(xi) over [0, 1]."""
    if p <= -1.0 or q <= -1.0:
        raise ValueError(f"non-integrable weight exponents p={p}, q={q}")
    x, w = roots_jacobi(n, q, p)
    return 0.5 * (x + 1.0), w * 0.5 ** (p + q + 1.0)


def duffy_rule(order: int):
    """Collapsed tensor rule on the reference triangle: barycentric
    coordinates (q, 3) and weights summing to 1/2."""
    a, wa = gauss01(order)
    b, wb = gauss01(order)
    A, B = np.meshgrid(a, b, indexing="ij")
    u1 = (A * (1.0 - B)).ravel()
    u2 = (A * B).ravel()
    w = (wa[:, None] * wb[None, :] * A).ravel()
    lam = np.column_stack([1.0 - u1 - u2, u1, u2])
    return lam, w


def tri_area(T) -> float:
    T = np.asarray(T, dtype=float)
    return 0.5 * abs(
        (T[1, 0] - T[0, 0]) * (T[2, 1] - T[0, 1])
        - (T[2, 0] - T[0, 0]) * (T[1, 1] - T[0, 1])
    )


def _areas(T):
    g1 = T[:, 1] - T[:, 0]
    g2 = T[:, 2] - T[:, 0]
    return 0.5 * np.abs(g1[:, 0] * g2[:, 1] - g1[:, 1] * g2[:, 0])


# ---------------------------------------------------------------------------
# closed-form 1d kernel antiderivatives


def difference_kernel_1d(s: float):
    """Double antiderivative Phi and constant c such that the assembled
    difference form over piecewise linears equals

        c * sum_ab slope_a slope_b [Phi(t1-r0) - Phi(t0-r0) - Phi(t1-r1)
                                    + Phi(t0-r1)]

    summed over element pairs [t0,t1] x [r0,r1]. Valid across touching and
    overlapping pairs because Phi is C^2 through the origin; s = 1/2 is the
    logarithmic branch.
    """
    if abs(s - 0.5) < 1e-12:

        def phi(z):
            z = np.abs(np.asarray(z, dtype=float))
            out = np.zeros_like(z)
            m = z > 0
            out[m] = 0.5 * z[m] ** 2 * np.log(z[m]) - 0.75 * z[m] ** 2
            return out

        return phi, -2.0

    beta = 1.0 - 2.0 * s

    def phi(z):
        return np.abs(z) ** (beta + 2.0) / ((beta + 1.0) * (beta + 2.0))

    return phi, 2.0 / (2.0 * s * (2.0 * s - 1.0))


def moment_kernel_1d(s: float):
    """Antiderivative chain for the weak kernel |z|^(-s): G1' = |z|^(-s),
    G2' = G1, G3' = G2; all continuous through z = 0 for s in (0, 1)."""

    def g1(z):
        z = np.asarray(z, dtype=float)
        return np.sign(z) * np.abs(z) ** (1.0 - s) / (1.0 - s)

    def g2(z):
        return np.abs(z) ** (2.0 - s) / ((1.0 - s) * (2.0 - s))

    def g3(z):
        z = np.asarray(z, dtype=float)
        return (
            np.sign(z)
            * np.abs(z) ** (3.0 - s)
            / ((1.0 - s) * (2.0 - s) * (3.0 - s))
        )

    return g1, g2, g3


def rectangle_table(anti, t0, t1, r0, r1):
    """Double-antiderivative rectangle formula on element-pair grids:
    result[i, j] integrates the kernel over [t0_i, t1_i] x [r0_j, r1_j]."""
    t0 = np.asarray(t0, dtype=float)[:, None]
    t1 = np.asarray(t1, dtype=float)[:, None]
    r0 = np.asarray(r0, dtype=float)[None, :]
    r1 = np.asarray(r1, dtype=float)[None, :]
    return anti(t1 - r0) - anti(t0 - r0) - anti(t1 - r1) + anti(t0 - r1)


# ---------------------------------------------------------------------------
# complement tails


def tail_weight_1d(x, H: float, s: float):
    """omega(x): integral of |x-y|^(-1-2s) over the complement of
    [-H, H]."""
    x = np.asarray(x, dtype=float)
    return ((H - x) ** (-2.0 * s) + (H + x) ** (-2.0 * s)) / (2.0 * s)


class RadialTail:
    """Tabulated omega(r) = integral of |x-y|^(-2-2s) over the exterior of
    the disk of radius H, for |x| = r < H.

    Built once per (H, s) on a grid clustered toward r = H where omega
    blows up like (H-r)^(-2s), then read through a cubic spline. The
    radial variable of the tail is folded into a Gauss-Jacobi rule; the
    angular integral gets a dedicated panel around its near-diagonal peak
    once r/H is large.
    """

    def __init__(self, H: float, s: float, n: int = 512):
        self.H = float(H)
        self.s = float(s)
        gap = 10.0 ** np.linspace(0.0, -7.0, n)
        r = self.H * (1.0 - gap)[::-1].copy()
        self.grid = r
        self.values = self._integrate(r)
        self._spline = CubicSpline(r, self.values)
        self.r_max = r[-1]

    def _integrate(self, radii):
        H, s = self.H, self.s
        t, wt = jacobi01(24, 2.0 * s - 1.0, 0.0)
        out = np.empty_like(radii)
        for k, r in enumerate(radii):
            z = (r / H) * t
            zmax = z[-1]
            if zmax <= 0.9:
                th, wth = gauss01(64)
                th = th * math.pi
                wth = wth * math.pi
            else:
                split = min(math.pi, 6.0 * (1.0 - zmax))
                t1, w1 = gauss01(48)
                t2, w2 = gauss01(48)
                th = np.concatenate([t1 * split, split + t2 * (math.pi - split)])
                wth = np.concatenate([w1 * split, w2 * (math.pi - split)])
            f = (
                1.0 + z[:, None] ** 2 - 2.0 * z[:, None] * np.cos(th)[None, :]
            ) ** (-1.0 - s)
            out[k] = 2.0 * H ** (-2.0 * s) * np.einsum("i,j,ij->", wt, wth, f)
        return out

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r > self.r_max):
            raise ValueError("radius too close to the tail boundary")
        return self._spline(r)


@lru_cache(maxsize=32)
def radial_tail(H: float, s: float) -> RadialTail:
    return RadialTail(H, s)


def _halfplane_coef(s: float) -> float:
    # line integral of (1 + t^2)^(-1-s)
    return math.sqrt(math.pi) * math.gamma(s + 0.5) / math.gamma(1.0 + s)


@lru_cache(maxsize=8)
def _cdf_panel():
    return gauss01(24)


def _bounded_kernel_cdf(t, s: float):
    """G(t) = integral of (1+tau^2)^(-1-s) from 0 to t, vectorized; beyond
    tau = 40 a three-term series of the algebraic tail."""
    t = np.asarray(t, dtype=float)
    sign = np.sign(t)
    ta = np.abs(t)
    x, w = _cdf_panel()
    tc = np.minimum(ta, 40.0)
    tau = tc[..., None] * x
    out = tc * np.einsum("...q,q->...", (1.0 + tau**2) ** (-1.0 - s), w)
    far = ta > 40.0
    if np.any(far):

        def tail_anti(T):
            return (
                -(T ** (-1.0 - 2 * s)) / (1.0 + 2 * s)
                + (1.0 + s) * T ** (-3.0 - 2 * s) / (3.0 + 2 * s)
                - (1.0 + s)
                * (2.0 + s)
                / 2.0
                * T ** (-5.0 - 2 * s)
                / (5.0 + 2 * s)
            )

        out = np.where(far, out + tail_anti(ta) - tail_anti(40.0), out)
    return sign * out


def rect_complement_weight(X, bounds, s: float):
    """omega for the complement of an axis-aligned box [ax,bx] x [ay,by]
    at interior points X: two half-plane slabs in closed form plus two side
    strips by a weighted radial rule. Used when the computational region is
    a structured box rather than a disk."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    ax, ay, bx, by = (float(v) for v in bounds)
    chp = _halfplane_coef(s)
    out = (
        chp
        / (2.0 * s)
        * ((by - X[:, 1]) ** (-2.0 * s) + (X[:, 1] - ay) ** (-2.0 * s))
    )
    t, wt = jacobi01(16, 2.0 * s - 1.0, 0.0)
    for side in ("right", "left"):
        U0 = (bx - X[:, 0]) if side == "right" else (X[:, 0] - ax)
        hi = (by - X[:, 1])[:, None] * t[None, :] / U0[:, None]
        lo = (ay - X[:, 1])[:, None] * t[None, :] / U0[:, None]
        g = _bounded_kernel_cdf(hi, s) - _bounded_kernel_cdf(lo, s)
        out += U0 ** (-2.0 * s) * np.einsum("q,nq->n", wt, g)
    return out


def complement_integral(T, H: float, s: float, fa, fb, order: int = 6) -> float:
    """Integral over the element T of fa(x) fb(x) omega(x), omega being the
    kernel tail over the complement of the ball of radius H."""
    T = np.asarray(T, dtype=float)
    fa = np.asarray(fa, dtype=float)
    fb = np.asarray(fb, dtype=float)
    if T.ndim == 1:
        a, b = sorted((float(T[0]), float(T[1])))
        if a < -H - 1e-12 or b > H + 1e-12:
            raise ValueError("element outside the computational interval")
        x, w = gauss01(max(order, 8))
        pts = a + (b - a) * x
        vals = (fa[0] + fa[1] * pts) * (fb[0] + fb[1] * pts)
        return float((b - a) * np.sum(w * vals * tail_weight_1d(pts, H, s)))
    if np.any(np.linalg.norm(T, axis=1) > H + 1e-12):
        raise ValueError("element outside the computational ball")
    lam, w = duffy_rule(order)
    pts = lam @ T
    r = np.linalg.norm(pts, axis=1)
    va = fa[0] + pts @ fa[1:]
    vb = fb[0] + pts @ fb[1:]
    return float(2.0 * tri_area(T) * np.sum(w * va * vb * radial_tail(H, s)(r)))


# ---------------------------------------------------------------------------
# batched touching-pair transforms (2d)
#
# Shapes: vertex batches (n, 3, 2); affine coefficient batches (n, k, 3) in
# the (1, x, y) basis. Numerator modes:
#   'diff': (Ax(x) - Ay(y)) (Bx(x) - By(y))   [diffusion form]
#   'xx'  : Ax(x) Bx(x)                        [diffusion vs zero exterior]
#   'xy'  : Ax(x) By(y)                        [moment form]
# vanish is the exact order to which the numerator vanishes on the shared
# set; the radial rule then integrates the remaining polynomial exactly.


def _aff_eval(C, P):
    shape = P.shape[:-1] + (C.shape[1],)
    flat = P.reshape(P.shape[0], -1, 2)
    out = np.einsum("nkc,nqc->nqk", C[:, :, 1:], flat) + C[:, None, :, 0]
    return out.reshape(shape)


def _numerator(mode, Ax, Ay, Bx, By, X, Y):
    if mode == "diff":
        FA = _aff_eval(Ax, X) - _aff_eval(Ay, Y)
        FB = _aff_eval(Bx, X) - _aff_eval(By, Y)
    elif mode == "xx":
        FA = _aff_eval(Ax, X)
        FB = _aff_eval(Bx, X)
    elif mode == "xy":
        FA = _aff_eval(Ax, X)
        FB = _aff_eval(By, Y)
    else:
        raise ValueError(f"unknown numerator mode {mode!r}")
    return np.einsum("...i,...j->...ij", FA, FB)


def _block_width(mode, Ax, Ay, Bx, By):
    ka = (Ax if Ax is not None else Ay).shape[1]
    kb = (Bx if Bx is not None else By).shape[1]
    return ka, kb


def coincident_blocks(T, alpha, mode, Ax, Ay, Bx, By, vanish, order):
    """Pair integrals over T x T for a batch of triangles.

    The reference-coordinate difference u - v runs over a hexagon split
    into six sectors; in each, the admissible positions form a shrunk
    triangle and a single scaling direction carries the kernel power, which
    the Jacobi radial rule integrates exactly.
    """
    T = np.asarray(T, dtype=float)
    g1 = T[:, 1] - T[:, 0]
    g2 = T[:, 2] - T[:, 0]
    det = np.abs(g1[:, 0] * g2[:, 1] - g1[:, 1] * g2[:, 0])  # = 2|T|
    eta, weta = gauss01(order)
    one = np.ones_like(eta)
    xi, wxi = jacobi01(order, 1.0 + vanish - alpha, 2.0)
    ka, kb = _block_width(mode, Ax, Ay, Bx, By)
    out = np.zeros((T.shape[0], ka, kb))
    sectors = []
    for sg in (1.0, -1.0):
        sectors += [
            np.stack([eta, 1.0 - eta], axis=1) * sg,
            np.stack([one, -eta], axis=1) * sg,
            np.stack([eta, -one], axis=1) * sg,
        ]
    for W in sectors:
        Dphys = (
            W[None, :, 0, None] * g1[:, None, :]
            + W[None, :, 1, None] * g2[:, None, :]
        )
        kern = np.linalg.norm(Dphys, axis=-1) ** (-alpha)  # (n, E)
        D = xi[:, None, None] * W[None, :, :]  # (R, E, 2)
        m = np.maximum(0.0, -D)
        V = m[:, :, None, :] + (1.0 - xi)[:, None, None, None] * _TRI3[None, None]
        U = V + D[:, :, None, :]
        X = (
            T[:, None, None, None, 0, :]
            + U[None, ..., 0, None] * g1[:, None, None, None, :]
            + U[None, ..., 1, None] * g2[:, None, None, None, :]
        )
        Y = (
            T[:, None, None, None, 0, :]
            + V[None, ..., 0, None] * g1[:, None, None, None, :]
            + V[None, ..., 1, None] * g2[:, None, None, None, :]
        )
        N = _numerator(mode, Ax, Ay, Bx, By, X, Y)
        N = N / (xi[None, :, None, None, None, None] ** vanish)
        out += np.einsum(
            "r,e,ne,q,nreqij->nij", wxi, weta, kern, _TRI3W, N, optimize=True
        )
    return det[:, None, None] ** 2 * out


def edge_blocks(Ta, Tb, alpha, mode, Ax, Ay, Bx, By, vanish, order):
    """Pair integrals for batches sharing the edge Ta[:,0]-Ta[:,1] =
    Tb[:,0]-Tb[:,1] (same orientation on both).

    Four subregions; in each, the position along the shared edge is a free
    line where the numerator is quadratic (2-point Gauss exact), and the
    radial scaling of the remaining three coordinates carries the kernel.
    """
    Ta = np.asarray(Ta, dtype=float)
    Tb = np.asarray(Tb, dtype=float)
    V0 = Ta[:, 0]
    e = Ta[:, 1] - Ta[:, 0]
    aa = Ta[:, 2] - Ta[:, 0]
    ab = Tb[:, 2] - Tb[:, 0]
    J = 4.0 * _areas(Ta) * _areas(Tb)
    g, gw = gauss01(order)
    tau, wtau = gauss01(2)
    xi, wxi = jacobi01(order, 2.0 + vanish - alpha, 1.0)
    W1, W2 = (w.ravel() for w in np.meshgrid(g, g, indexing="ij"))
    WW = (gw[:, None] * gw[None, :]).ravel()
    one = np.ones_like(W1)
    zero = np.zeros_like(W1)
    ka, kb = _block_width(mode, Ax, Ay, Bx, By)
    out = np.zeros((Ta.shape[0], ka, kb))

    def accum(dh, ph, qh, tsh, jac_ang):
        nonlocal out
        Dh = (
            dh[None, :, None] * e[:, None, :]
            + ph[None, :, None] * aa[:, None, :]
            - qh[None, :, None] * ab[:, None, :]
        )
        kern = np.linalg.norm(Dh, axis=-1) ** (-alpha)  # (n, A)
        for r, wr in zip(xi, wxi):
            for tq, wt in zip(tau, wtau):
                t = r * tsh + (1.0 - r) * tq
                u1 = t + r * dh
                u2 = r * ph
                v2 = r * qh
                X = (
                    V0[:, None, :]
                    + u1[None, :, None] * e[:, None, :]
                    + u2[None, :, None] * aa[:, None, :]
                )
                Y = (
                    V0[:, None, :]
                    + t[None, :, None] * e[:, None, :]
                    + v2[None, :, None] * ab[:, None, :]
                )
                N = _numerator(mode, Ax, Ay, Bx, By, X, Y) / r**vanish
                out += wr * wt * np.einsum(
                    "a,na,naij->nij", WW * jac_ang, kern, N, optimize=True
                )

    accum(W1, 1.0 - W1, W2, zero, one)
    accum(W1 * W2, W1 * (1.0 - W2), one, zero, W1)
    accum(-(1.0 - W1), W2, W1, 1.0 - W1, one)
    accum(-W1 * W2, one, W1 * (1.0 - W2), W1 * W2, W1)
    return J[:, None, None] * out


def vertex_blocks(Ta, Tb, alpha, mode, Ax, Ay, Bx, By, vanish, order):
    """Pair integrals for batches sharing the single vertex
    Ta[:,0] = Tb[:,0]."""
    Ta = np.asarray(Ta, dtype=float)
    Tb = np.asarray(Tb, dtype=float)
    V = Ta[:, 0]
    a1 = Ta[:, 1] - V
    a2 = Ta[:, 2] - V
    b1 = Tb[:, 1] - V
    b2 = Tb[:, 2] - V
    J = 4.0 * _areas(Ta) * _areas(Tb)
    g, gw = gauss01(order)
    xi, wxi = jacobi01(order, 3.0 + vanish - alpha, 0.0)
    TH, PH, WS = (w.ravel() for w in np.meshgrid(g, g, g, indexing="ij"))
    WW = (gw[:, None, None] * gw[None, :, None] * gw[None, None, :]).ravel()
    ka, kb = _block_width(mode, Ax, Ay, Bx, By)
    out = np.zeros((Ta.shape[0], ka, kb))
    for swap in (0, 1):
        ua = (
            TH[None, :, None] * a1[:, None, :]
            + (1.0 - TH)[None, :, None] * a2[:, None, :]
        )
        vb = (
            PH[None, :, None] * b1[:, None, :]
            + (1.0 - PH)[None, :, None] * b2[:, None, :]
        )
        Dh = ua - WS[None, :, None] * vb if swap == 0 else WS[None, :, None] * ua - vb
        kern = np.linalg.norm(Dh, axis=-1) ** (-alpha)
        for r, wr in zip(xi, wxi):
            su = r * np.ones_like(WS) if swap == 0 else r * WS
            sv = r * WS if swap == 0 else r * np.ones_like(WS)
            X = V[:, None, :] + su[None, :, None] * ua
            Y = V[:, None, :] + sv[None, :, None] * vb
            N = _numerator(mode, Ax, Ay, Bx, By, X, Y) / r**vanish
            out += wr * np.einsum("a,na,naij->nij", WW * WS, kern, N, optimize=True)
    return J[:, None, None] * out


def disjoint_blocks(Ta, Tb, alpha, mode, Ax, Ay, Bx, By, order):
    """Plain tensor quadrature for separated batches."""
    Ta = np.asarray(Ta, dtype=float)
    Tb = np.asarray(Tb, dtype=float)
    lam, w = duffy_rule(order)
    Pa = np.einsum("qk,nkd->nqd", lam, Ta)
    Pb = np.einsum("qk,nkd->nqd", lam, Tb)
    Wa = w[None, :] * (2.0 * _areas(Ta))[:, None]
    Wb = w[None, :] * (2.0 * _areas(Tb))[:, None]
    diff = Pa[:, :, None, :] - Pb[:, None, :, :]
    r = np.linalg.norm(diff, axis=-1)
    X = np.broadcast_to(Pa[:, :, None, :], diff.shape)
    Y = np.broadcast_to(Pb[:, None, :, :], diff.shape)
    N = _numerator(mode, Ax, Ay, Bx, By, X, Y)
    return np.einsum("nq,np,nqp,nqpij->nij", Wa, Wb, r ** (-alpha), N, optimize=True)


# ---------------------------------------------------------------------------
# per-pair entry point


def pair_relation(Ta, Tb):
    """Classify a pair by exactly shared vertices; returns the relation and
    both elements permuted so shared vertices come first, in the same order
    on both sides."""
    Ta = np.asarray(Ta, dtype=float)
    Tb = np.asarray(Tb, dtype=float)
    if Ta.ndim == 1:
        a = sorted((float(Ta[0]), float(Ta[1])))
        b = sorted((float(Tb[0]), float(Tb[1])))
        if a == b:
            return "identical", np.array(a), np.array(b)
        if a[1] == b[0] or b[1] == a[0]:
            c = a[1] if a[1] == b[0] else b[1]
            pa = np.array([c, a[0] if a[1] == c else a[1]])
            pb = np.array([c, b[0] if b[1] == c else b[1]])
            return "shared-vertex", pa, pb
        if a[1] > b[0] and b[1] > a[0]:
            raise ValueError("overlapping elements do not form a valid pair")
        return "disjoint", np.array(a), np.array(b)
    match = [
        (i, j)
        for i in range(3)
        for j in range(3)
        if Ta[i, 0] == Tb[j, 0] and Ta[i, 1] == Tb[j, 1]
    ]
    if len(match) == 3:
        return "identical", Ta, Tb
    if len(match) == 2:
        (i1, j1), (i2, j2) = match
        return "shared-edge", Ta[[i1, i2, 3 - i1 - i2]], Tb[[j1, j2, 3 - j1 - j2]]
    if len(match) == 1:
        i1, j1 = match[0]
        ra = [i1] + [i for i in range(3) if i != i1]
        rb = [j1] + [j for j in range(3) if j != j1]
        return "shared-vertex", Ta[ra], Tb[rb]
    return "disjoint", Ta, Tb


def _parse_factor(f, d):
    if isinstance(f, tuple) and len(f) == 2 and not np.isscalar(f[0]):
        ca = np.asarray(f[0], dtype=float)
        cb = np.asarray(f[1], dtype=float)
        if ca.shape != (d + 1,) or cb.shape != (d + 1,):
            raise ValueError("affine coefficient shape does not match dimension")
        return ca, cb, True
    c = np.asarray(f, dtype=float)
    if c.shape != (d + 1,):
        raise ValueError("affine coefficient shape does not match dimension")
    return c, None, False


def _shared_points(relation, Pa, d):
    if d == 1:
        if relation == "identical":
            return np.asarray(Pa, dtype=float).reshape(-1, 1)
        if relation == "shared-vertex":
            return np.asarray([[Pa[0]]], dtype=float)
        return np.zeros((0, 1))
    if relation == "identical":
        return Pa
    if relation == "shared-edge":
        return Pa[:2]
    if relation == "shared-vertex":
        return Pa[:1]
    return np.zeros((0, 2))


def _factor_vanish(ca, cb, is_diff, pts) -> int:
    """1 when the factor vanishes linearly on the shared set, else 0."""
    if len(pts) == 0:
        return 0
    ones = np.column_stack([np.ones(len(pts)), pts])
    scale = max(float(np.max(np.abs(ca))), 1e-30)
    va = ones @ ca
    if is_diff:
        return int(np.all(np.abs(va - ones @ cb) <= 1e-10 * scale))
    return int(np.all(np.abs(va) <= 1e-10 * scale))


_RADIAL_POWER_2D = {"identical": 1.0, "shared-edge": 2.0, "shared-vertex": 3.0}
_RADIAL_POWER_1D = {"identical": 0.0, "shared-vertex": 1.0}


def pair_kernel_integral(
    Ta, Tb, exponent, fa, fb, config: PairConfig | None = None
) -> float:
    """Double integral over Ta x Tb of |x-y|^(-exponent) against the
    product of two affine factors.

    Each factor is a coefficient vector in the (1, x[, y]) basis: a single
    vector is evaluated at its own element's variable (fa at x on Ta, fb at
    y on Tb); a pair (on_Ta, on_Tb) forms the difference on_Ta(x) -
    on_Tb(y), the shape arising in the diffusion form. Combinations whose
    numerator does not vanish enough on the shared set for the kernel to be
    integrable raise ValueError.
    """
    Ta = np.asarray(Ta, dtype=float)
    Tb = np.asarray(Tb, dtype=float)
    d = 1 if Ta.ndim == 1 else 2
    relation, Pa, Pb = pair_relation(Ta, Tb)
    if config is not None and config.relation != relation:
        raise ValueError(
            f"configured relation {config.relation!r} but the pair is {relation!r}"
        )
    order = config.order if config is not None else 5
    fac_a = _parse_factor(fa, d)
    fac_b = _parse_factor(fb, d)
    pts = _shared_points(relation, Pa, d)
    vanish = _factor_vanish(*fac_a, pts) + _factor_vanish(*fac_b, pts)
    if relation != "disjoint":
        table = _RADIAL_POWER_1D if d == 1 else _RADIAL_POWER_2D
        if table[relation] + vanish - exponent <= -1.0 + 1e-12:
            raise ValueError(
                "non-integrable pair: kernel too strong for the numerator's "
                "vanishing on the shared set"
            )
    if d == 2:
        mode, Ax, Ay, Bx, By = _mode_and_coeffs(fac_a, fac_b)
        if relation == "identical":
            val = coincident_blocks(
                Pa[None], exponent, mode, Ax, Ay, Bx, By, vanish, order
            )
        elif relation == "shared-edge":
            val = edge_blocks(
                Pa[None], Pb[None], exponent, mode, Ax, Ay, Bx, By, vanish, order
            )
        elif relation == "shared-vertex":
            val = vertex_blocks(
                Pa[None], Pb[None], exponent, mode, Ax, Ay, Bx, By, vanish, order
            )
        else:
            return _disjoint_adaptive_2d(Pa, Pb, exponent, mode, Ax, Ay, Bx, By, order)
        return float(val[0, 0, 0])
    if relation == "identical":
        return _pair_1d_identical(Pa, exponent, fac_a, fac_b, vanish, order)
    if relation == "shared-vertex":
        return _pair_1d_corner(Pa, Pb, exponent, fac_a, fac_b, vanish, order)
    return _pair_1d_disjoint(Pa, Pb, exponent, fac_a, fac_b, order)


def _mode_and_coeffs(fac_a, fac_b):
    (ca, cb, da), (ea, eb, db) = fac_a, fac_b

    def pad(c):
        return None if c is None else np.asarray(c, dtype=float)[None, None, :]

    if da and db:
        return "diff", pad(ca), pad(cb), pad(ea), pad(eb)
    if da or db:
        raise ValueError("mixed difference and plain factors are not supported")
    return "xy", pad(ca), None, None, pad(ea)


def _disjoint_adaptive_2d(Ta, Tb, alpha, mode, Ax, Ay, Bx, By, order, depth=0):
    da = np.max(np.linalg.norm(Ta - np.roll(Ta, 1, axis=0), axis=1))
    db = np.max(np.linalg.norm(Tb - np.roll(Tb, 1, axis=0), axis=1))
    gap = np.min(np.linalg.norm(Ta[:, None, :] - Tb[None, :, :], axis=-1))
    ratio = gap / max(da, db)
    if ratio >= 0.5 or depth >= 3:
        eff = order + (2 if ratio < 1.0 else 1 if ratio < 2.0 else 0)
        return float(
            disjoint_blocks(Ta[None], Tb[None], alpha, mode, Ax, Ay, Bx, By, eff)[
                0, 0, 0
            ]
        )
    big_is_a = da >= db
    big = Ta if big_is_a else Tb
    m01 = 0.5 * (big[0] + big[1])
    m12 = 0.5 * (big[1] + big[2])
    m02 = 0.5 * (big[0] + big[2])
    kids = (
        np.array([big[0], m01, m02]),
        np.array([m01, big[1], m12]),
        np.array([m02, m12, big[2]]),
        np.array([m01, m12, m02]),
    )
    tot = 0.0
    for kid in kids:
        A, B = (kid, Tb) if big_is_a else (Ta, kid)
        tot += _disjoint_adaptive_2d(A, B, alpha, mode, Ax, Ay, Bx, By, order, depth + 1)
    return tot


# ---------------------------------------------------------------------------
# 1d per-pair transforms


def _numer_1d(fac_a, fac_b, x, y):
    (ca, cb, da), (ea, eb, db) = fac_a, fac_b
    fa = (ca[0] + ca[1] * x) - (cb[0] + cb[1] * y) if da else ca[0] + ca[1] * x
    fb = (ea[0] + ea[1] * x) - (eb[0] + eb[1] * y) if db else ea[0] + ea[1] * y
    return fa * fb


def _pair_1d_identical(Pa, alpha, fac_a, fac_b, vanish, order):
    """Split by the signed gap z = x - y; the position line is exact at
    3-point Gauss, the z direction exact by the Jacobi rule."""
    e0, e1 = float(Pa[0]), float(Pa[1])
    L = e1 - e0
    xi, wxi = jacobi01(max(order, 3), vanish - alpha, 1.0)
    gx, gw = gauss01(3)
    tot = 0.0
    for r, wr in zip(xi, wxi):
        z = L * r
        acc = 0.0
        for branch in (-1.0, 1.0):
            lo = e0 + z if branch < 0 else e0
            x = lo + L * (1.0 - r) * gx
            y = x + branch * z
            acc += np.sum(gw * _numer_1d(fac_a, fac_b, x, y)) / r**vanish
        tot += wr * acc
    return float(L ** (2.0 - alpha) * tot)


def _pair_1d_corner(Pa, Pb, alpha, fac_a, fac_b, vanish, order):
    """Adjacent intervals sharing the corner c = Pa[0] = Pb[0], extending
    to opposite sides; two-region Duffy collapse at the corner."""
    c = float(Pa[0])
    sa = 1.0 if float(Pa[1]) > c else -1.0
    sb = 1.0 if float(Pb[1]) > c else -1.0
    if sa == sb:
        raise ValueError("overlapping elements do not form a valid pair")
    La = abs(float(Pa[1]) - c)
    Lb = abs(float(Pb[1]) - c)
    xi, wxi = jacobi01(max(order, 3), 1.0 + vanish - alpha, 0.0)
    gx, gw = gauss01(max(order, 4))
    tot = 0.0
    for r, wr in zip(xi, wxi):
        for region in (0, 1):
            if region == 0:
                u = La * r * np.ones_like(gx)
                v = Lb * r * gx
            else:
                u = La * r * gx
                v = Lb * r * np.ones_like(gx)
            x = c + sa * u
            y = c + sb * v
            kern = (u + v) ** (-alpha)
            vals = _numer_1d(fac_a, fac_b, x, y) / r**vanish
            tot += wr * La * Lb * np.sum(gw * vals * kern)
    return float(tot)


def _pair_1d_disjoint(Pa, Pb, alpha, fac_a, fac_b, order, depth=0):
    a0, a1 = float(Pa[0]), float(Pa[1])
    b0, b1 = float(Pb[0]), float(Pb[1])
    La, Lb = a1 - a0, b1 - b0
    gap = max(b0 - a1, a0 - b1)
    if gap >= 0.5 * max(La, Lb) or depth >= 24:
        n = max(order, 6)
        gx, gw = gauss01(n)
        x = a0 + La * gx
        y = b0 + Lb * gx
        X, Y = np.meshgrid(x, y, indexing="ij")
        W = np.outer(gw, gw) * La * Lb
        return float(
            np.sum(W * _numer_1d(fac_a, fac_b, X, Y) * np.abs(X - Y) ** (-alpha))
        )
    if La >= Lb:
        mid = 0.5 * (a0 + a1)
        return _pair_1d_disjoint(
            np.array([a0, mid]), Pb, alpha, fac_a, fac_b, order, depth + 1
        ) + _pair_1d_disjoint(
            np.array([mid, a1]), Pb, alpha, fac_a, fac_b, order, depth + 1
        )
    mid = 0.5 * (b0 + b1)
    return _pair_1d_disjoint(
        Pa, np.array([b0, mid]), alpha, fac_a, fac_b, order, depth + 1
    ) + _pair_1d_disjoint(
        Pa, np.array([mid, b1]), alpha, fac_a, fac_b, order, depth + 1
    )


# ---------------------------------------------------------------------------
# weighted volume rules


def volume_quadrature(T, g, rule: int, weight=None) -> float:
    """Integrate g over the element T with an order-`rule` Gauss rule,
    optionally against a boundary Jacobi weight.

    1d weight hint (gamma, 'left' | 'right'): integrates (x-a)^gamma or
    (b-x)^gamma times g. 2d weight hint (gamma, k): integrates
    lambda_k^gamma times g, lambda_k being the barycentric coordinate of
    vertex k (vanishing on the opposite edge).
    """
    T = np.asarray(T, dtype=float)
    if rule < 1:
        raise ValueError("rule must be at least 1")
    if T.ndim == 1:
        a, b = float(T[0]), float(T[1])
        if weight is None:
            x, w = gauss01(rule)
            pts = a + (b - a) * x
            return float((b - a) * np.sum(w * np.asarray(g(pts), dtype=float)))
        gamma_exp, side = float(weight[0]), weight[1]
        x, w = jacobi01(rule, 0.0, gamma_exp)
        if side == "right":
            pts = a + (b - a) * x
        elif side == "left":
            pts = b - (b - a) * x
        else:
            raise ValueError(f"unknown side {side!r}")
        return float(
            (b - a) ** (1.0 + gamma_exp) * np.sum(w * np.asarray(g(pts), dtype=float))
        )
    if weight is None:
        lam, w = duffy_rule(rule)
        pts = lam @ T
        return float(2.0 * tri_area(T) * np.sum(w * np.asarray(g(pts), dtype=float)))
    gamma_exp, k = float(weight[0]), int(weight[1])
    idx = [k] + [i for i in range(3) if i != k]
    Vk, Vi, Vj = T[idx[0]], T[idx[1]], T[idx[2]]
    a, wa = jacobi01(rule, 1.0, gamma_exp)
    b, wb = gauss01(rule)
    A, B = np.meshgrid(a, b, indexing="ij")
    pts = Vk[None, None, :] + A[..., None] * (
        (1.0 - B)[..., None] * (Vi - Vk) + B[..., None] * (Vj - Vk)
    )
    vals = np.asarray(g(pts.reshape(-1, 2)), dtype=float).reshape(A.shape)
    return float(2.0 * tri_area(T) * np.einsum("i,j,ij->", wa, wb, vals))
