"""Pointwise geometry of spacelike charts through the future lightcone.

A chart maps lifted coordinate jets to a jet-valued Minkowski vector; from
that single evaluation the frame below derives the induced metric, the
canonical lightlike normal, both Weingarten routes, the second fundamental
form, curvatures and inequality gaps -- all as jets, so second-level
quantities stay differentiable for the curvature calculus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .errors import (
    DegenerateNormalFrame,
    GaussMapUndefined,
    NotOnLightcone,
    NotSpacelike,
    ConsistencyError,
)
from .jets import Jet2, JetVec4

_E0 = np.array([1.0, 0.0, 0.0, 0.0])


@dataclass(frozen=True, eq=False)
class SurfacePatch:
    """A chart (u, v) -> psi(u, v) into the future lightcone.

    ``chart`` receives two lifted coordinate jets (possibly batched) and
    returns a JetVec4.  ``closed`` marks spherical (theta, phi) charts whose
    domain covers a closed surface; those get quadrature grids and a
    ``rotated`` twin chart for checks near the coordinate poles.
    """

    name: str
    chart: Callable[[Jet2, Jet2], JetVec4]
    domain: tuple
    closed: bool = False
    rotated: Optional["SurfacePatch"] = None

    def sample_points(self, n, rng, margin=0.05):
        """Uniform random interior points of the chart domain."""
        (u0, u1), (v0, v1) = self.domain
        du, dv = (u1 - u0) * margin, (v1 - v0) * margin
        u = rng.uniform(u0 + du, u1 - du, size=n)
        v = rng.uniform(v0 + dv, v1 - dv, size=n)
        return u, v

    def grid_points(self, shape, margin=0.02):
        """Uniform interior grid, flattened."""
        (u0, u1), (v0, v1) = self.domain
        nu, nv = shape
        du, dv = (u1 - u0) * margin, (v1 - v0) * margin
        u = np.linspace(u0 + du, u1 - du, nu)
        v = np.linspace(v0 + dv, v1 - dv, nv)
        U, V = np.meshgrid(u, v, indexing="ij")
        return U.ravel(), V.ravel()

    def position(self, u, v):
        """Chart value(s) as plain Minkowski coordinates."""
        psi = self.chart(Jet2.variable("u", np.asarray(u, float)),
                         Jet2.variable("v", np.asarray(v, float)))
        return psi.values


class JetFrame:
    """Every jet-level geometric quantity of a patch at one or many points.

    The frame is the single evaluation pass everything else reads from:
    metric and inverse, Christoffel symbols, the lightlike normal with
    <eta,eta> = 0 and <psi,eta> = 1, the shape operator by tangential
    projection, the eta-second fundamental form, mean curvature vector and
    the determinant/trace curvatures.
    """

    def __init__(self, patch, u, v, on_cone_tol=1e-9, check=True):
        self.patch = patch
        self.u = np.asarray(u, dtype=float)
        self.v = np.asarray(v, dtype=float)

        uj = Jet2.variable("u", self.u)
        vj = Jet2.variable("v", self.v)
        psi = patch.chart(uj, vj)
        self.psi = psi
        self.psi_u = psi.d("u")
        self.psi_v = psi.d("v")
        self.psi_uu = self.psi_u.d("u")
        self.psi_uv = self.psi_u.d("v")
        self.psi_vv = self.psi_v.d("v")

        if check:
            cone = psi.dot(psi).value
            if np.max(np.abs(cone)) > on_cone_tol or np.any(psi[0].value <= 0.0):
                raise NotOnLightcone(
                    f"{patch.name}: max |<psi,psi>| = {np.max(np.abs(cone)):.3e}, "
                    f"min psi0 = {np.min(psi[0].value):.3e}"
                )

        E = self.psi_u.dot(self.psi_u)
        F = self.psi_u.dot(self.psi_v)
        G = self.psi_v.dot(self.psi_v)
        detg = E * G - F * F
        if check and (np.any(E.value <= 0.0) or np.any(detg.value <= 0.0)):
            raise NotSpacelike(
                f"{patch.name}: induced metric not positive definite "
                f"(min E = {np.min(E.value):.3e}, min det g = {np.min(detg.value):.3e})"
            )
        self.E, self.F, self.G, self.detg = E, F, G, detg
        iE = G / detg
        iG = E / detg
        iF = -F / detg
        self.g = ((E, F), (F, G))
        self.gi = ((iE, iF), (iF, iG))

        # Normal-plane basis {psi, n}: project the time axis off the tangent
        # plane.  On the cone <e0, psi> = -psi0 < 0, so this seed never
        # degenerates and the combination below is the unique normal with
        # <eta,eta> = 0 and <psi,eta> = 1.
        e0 = JetVec4.constant(_E0)
        s_u = e0.dot(self.psi_u)
        s_v = e0.dot(self.psi_v)
        t_u = iE * s_u + iF * s_v
        t_v = iF * s_u + iG * s_v
        n = e0 - self.psi_u.scale(t_u) - self.psi_v.scale(t_v)
        pn = psi.dot(n)
        if np.any(np.abs(pn.value) < 1e-13):
            raise DegenerateNormalFrame(f"{patch.name}: normal-plane solve degenerated")
        nn = n.dot(n)
        self.eta = psi.scale(-nn / (pn * pn * 2.0)) + n.scale(1.0 / pn)
        self.eta_u = self.eta.d("u")
        self.eta_v = self.eta.d("v")

        # Shape operator of eta by tangential projection of its derivative.
        m_uu = self.eta_u.dot(self.psi_u)
        m_vu = self.eta_u.dot(self.psi_v)
        m_uv = self.eta_v.dot(self.psi_u)
        m_vv = self.eta_v.dot(self.psi_v)
        A00 = -(iE * m_uu + iF * m_vu)
        A10 = -(iF * m_uu + iG * m_vu)
        A01 = -(iE * m_uv + iF * m_vv)
        A11 = -(iF * m_uv + iG * m_vv)
        self.A = ((A00, A01), (A10, A11))

        # II(X, Y) = -<A X, Y>, assembled in the chart basis.
        g = self.g
        self.II = tuple(
            tuple(-(self.A[0][a] * g[0][b] + self.A[1][a] * g[1][b]) for b in range(2))
            for a in range(2)
        )

        self.detA = A00 * A11 - A01 * A10
        self.trA = A00 + A11
        self.K = -self.trA

    @cached_property
    def gamma(self):
        """Christoffel symbols of the induced metric, as jets."""
        g = self.g
        dg = [[[g[a][b].d(ax) for b in range(2)] for a in range(2)] for ax in ("u", "v")]
        gamma = [[[None, None], [None, None]], [[None, None], [None, None]]]
        for c in range(2):
            for a in range(2):
                for b in range(2):
                    acc = None
                    for d_ in range(2):
                        term = dg[a][d_][b] + dg[b][d_][a] - dg[d_][a][b]
                        term = self.gi[c][d_] * term
                        acc = term if acc is None else acc + term
                    gamma[c][a][b] = acc * 0.5
        return tuple(tuple(tuple(row) for row in plane) for plane in gamma)

    @cached_property
    def iivec(self):
        """Vector-valued second fundamental form in the chart basis."""
        dd = ((self.psi_uu, self.psi_uv), (self.psi_uv, self.psi_vv))
        tangents = (self.psi_u, self.psi_v)
        out = [[None, None], [None, None]]
        for a in range(2):
            for b in range(2):
                w = dd[a][b]
                for c in range(2):
                    w = w - tangents[c].scale(self.gamma[c][a][b])
                out[a][b] = w
        return out

    @cached_property
    def Hvec(self):
        """Mean curvature vector, half the metric trace of the vector form."""
        h = None
        for a in range(2):
            for b in range(2):
                term = self.iivec[a][b].scale(self.gi[a][b])
                h = term if h is None else h + term
        return h.scale(0.5)

    # -- value-level views --------------------------------------------------

    @cached_property
    def g_val(self):
        return _mat2(self.g)

    @cached_property
    def gi_val(self):
        return _mat2(self.gi)

    @cached_property
    def A_val(self):
        return _mat2(self.A)

    @cached_property
    def II_val(self):
        return _mat2(self.II)

    @cached_property
    def K_val(self):
        return self.K.value

    @cached_property
    def detA_val(self):
        return self.detA.value

    @cached_property
    def gap_low(self):
        return self.K_val**2 - 4.0 * self.detA_val

    @cached_property
    def gap_high(self):
        A = self.A_val
        tr_sq = np.einsum("...ab,...ba->...", A, A)
        return 2.0 * tr_sq - self.K_val**2

    @cached_property
    def psi0_val(self):
        return self.psi[0].value

    @cached_property
    def psi_val(self):
        return self.psi.values

    @cached_property
    def eta_val(self):
        return self.eta.values

    @cached_property
    def H_val(self):
        return self.Hvec.values

    @cached_property
    def H2_val(self):
        return self.Hvec.dot(self.Hvec).value

    @cached_property
    def sqrt_detg_val(self):
        return np.sqrt(self.detg.value)

    @cached_property
    def ii_positive(self):
        II = self.II_val
        det = II[..., 0, 0] * II[..., 1, 1] - II[..., 0, 1] * II[..., 1, 0]
        return (II[..., 0, 0] > 0.0) & (det > 0.0)

    # -- secondary computations ---------------------------------------------

    def weingarten_closed_form(self):
        """Shape operator from the height function psi0 and its metric Hessian.

        Independent of the projection route: uses only psi0, the gradient
        norm and the Christoffel-corrected Hessian, as jets.
        """
        p0 = self.psi[0]
        dp = (p0.d("u"), p0.d("v"))
        up = tuple(self.gi[a][0] * dp[0] + self.gi[a][1] * dp[1] for a in range(2))
        grad2 = dp[0] * up[0] + dp[1] * up[1]
        hess = [[None, None], [None, None]]
        ddp = ((p0.d("u").d("u"), p0.d("u").d("v")), (p0.d("u").d("v"), p0.d("v").d("v")))
        for a in range(2):
            for b in range(2):
                h = ddp[a][b]
                for c in range(2):
                    h = h - self.gamma[c][a][b] * dp[c]
                hess[a][b] = h
        lam = (grad2 + 1.0) / (self.psi[0] * self.psi[0] * 2.0)
        out = [[None, None], [None, None]]
        for c in range(2):
            for a in range(2):
                hop = self.gi[c][0] * hess[0][a] + self.gi[c][1] * hess[1][a]
                term = hop / p0
                if c == a:
                    term = term - lam
                out[c][a] = term
        return tuple(tuple(row) for row in out)

    def position_weingarten_residual(self):
        """Sup-norm of A_psi + I, with A_psi obtained by projection."""
        m = np.empty(self.g_val.shape)
        tangents = (self.psi_u, self.psi_v)
        for b in range(2):
            for a in range(2):
                m[..., b, a] = tangents[a].dot(tangents[b]).value
        a_psi = -np.einsum("...cb,...ba->...ca", self.gi_val, m)
        eye = np.eye(2)
        return np.max(np.abs(a_psi + eye), axis=(-2, -1))

    def normal_parallel_residual(self):
        """Euclidean size of the normal component of each eta derivative.

        The lightlike normal is parallel along the surface, so its derivative
        must be purely tangential.
        """
        out = []
        for deta in (self.eta_u, self.eta_v):
            su = deta.dot(self.psi_u)
            sv = deta.dot(self.psi_v)
            tu = self.gi[0][0] * su + self.gi[0][1] * sv
            tv = self.gi[1][0] * su + self.gi[1][1] * sv
            rem = deta - self.psi_u.scale(tu) - self.psi_v.scale(tv)
            out.append(np.linalg.norm(rem.values, axis=-1))
        return np.maximum(out[0], out[1])

    def second_form_inner_residual(self):
        """|<II, II> - 2 K| from the vector-valued second fundamental form."""
        gi = self.gi_val
        val = 0.0
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    for d_ in range(2):
                        ip = self.iivec[a][b].dot(self.iivec[c][d_]).value
                        val = val + gi[..., a, c] * gi[..., b, d_] * ip
        return np.abs(val - 2.0 * self.K_val)


def _mat2(entries):
    rows = []
    for a in range(2):
        rows.append([entries[a][b].value for b in range(2)])
    r0 = np.broadcast_arrays(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    return np.stack(
        [np.stack([r0[0], r0[1]], axis=-1), np.stack([r0[2], r0[3]], axis=-1)], axis=-2
    )


# -- public pointwise operations --------------------------------------------


@dataclass
class PointGeometry:
    """The pointwise dashboard: metric, normal, shape data and curvatures."""

    g: np.ndarray
    g_inv: np.ndarray
    eta: np.ndarray
    A: np.ndarray
    II: np.ndarray
    K: float
    detA: float
    quartic: float
    H: np.ndarray
    gap_low: float
    gap_high: float
    K_eta: Optional[float] = None


def first_fundamental_form(patch, p):
    """Induced metric matrix at a point."""
    frame = JetFrame(patch, *p)
    return frame.g_val


def lightlike_normal(patch, p):
    """The normal with <eta,eta> = 0, <psi,eta> = 1, as a differentiable jet."""
    return JetFrame(patch, *p).eta


def weingarten_eta(patch, p, method="projection"):
    """Shape operator of the lightlike normal in the chart basis."""
    frame = JetFrame(patch, *p)
    if method == "projection":
        return frame.A_val
    if method == "closed_form":
        return _mat2(frame.weingarten_closed_form())
    raise ValueError(f"unknown method {method!r}")


def verify_position_weingarten(patch, p):
    """Residual of the identity 'shape operator of the position = -I'."""
    return float(np.max(JetFrame(patch, *p).position_weingarten_residual()))


def point_geometry(patch, p, second_form_curvature=True):
    """Full pointwise dashboard; optionally includes the curvature of II."""
    frame = JetFrame(patch, *p)
    resid = frame.second_form_inner_residual()
    if np.max(resid) > 1e-9:
        raise ConsistencyError(
            f"<II,II> = 2K failed by {np.max(resid):.3e} at {patch.name}"
        )
    k_eta = None
    if second_form_curvature and bool(np.all(frame.ii_positive)):
        from .curvature import second_form_curvature as _sfc

        k_eta = _sfc(frame)
    return PointGeometry(
        g=frame.g_val,
        g_inv=frame.gi_val,
        eta=frame.eta_val,
        A=frame.A_val,
        II=frame.II_val,
        K=frame.K_val,
        detA=frame.detA_val,
        quartic=2.0 * frame.detA_val,
        H=frame.H_val,
        gap_low=frame.gap_low,
        gap_high=frame.gap_high,
        K_eta=k_eta,
    )


def gauss_maps(patch, p, tol=1e-14):
    """The two sphere-valued Gauss maps, normalized to unit time component.

    The first is the direction of the position, the second the direction of
    the lightlike normal; both are future null directions scaled so the time
    coordinate equals one.
    """
    frame = JetFrame(patch, *p)
    psi = frame.psi_val
    eta = frame.eta_val
    gf = psi / psi[..., 0:1]
    if np.any(np.abs(eta[..., 0]) < tol):
        raise GaussMapUndefined("normal has zero time component")
    gp = eta / eta[..., 0:1]
    return gf, gp


def pole_map_jacobian_rank(patch, p, threshold=1e-8):
    """Rank of the spatial Jacobian of the normal-direction Gauss map.

    Diagnostic only: degeneracy of the normal shows up as rank loss here,
    but nothing downstream relies on the equivalence.
    """
    frame = JetFrame(patch, *p)
    gp = frame.eta.scale(1.0 / frame.eta[0])
    J = np.stack(
        [np.stack([gp[k].d(ax).value for ax in ("u", "v")], axis=-1) for k in (1, 2, 3)],
        axis=-2,
    )
    s = np.linalg.svd(J, compute_uv=False)
    return int(np.count_nonzero(s > threshold * max(1.0, float(s.max()))))


@dataclass
class NondegeneracyReport:
    nondegenerate: bool
    min_abs_detA: float
    ii_positive_everywhere: bool


def is_nondegenerate(patch, grid=(32, 64), threshold=1e-8):
    """Sweep a grid for |det A| and the definiteness of II."""
    u, v = patch.grid_points(grid)
    frame = JetFrame(patch, u, v)
    min_abs = float(np.min(np.abs(frame.detA_val)))
    return NondegeneracyReport(
        nondegenerate=min_abs > threshold,
        min_abs_detA=min_abs,
        ii_positive_everywhere=bool(np.all(frame.ii_positive)),
    )


def umbilic_point_search(patch, coarse=(48, 96), refine_iters=200, n_starts=4):
    """Locate a point where both curvature-inequality gaps (nearly) vanish.

    On a closed surface an umbilic point must exist, but a fixed grid only
    gets within O(h^2) of it, and the gap field can carry shallow secondary
    minima; a simplex descent is therefore started from several separated
    low-gap grid nodes.  An umbilic sitting at a coordinate pole is
    invisible to the main chart, so a pole-rotated twin chart is searched
    too and the better find wins.  Returns (u, v, gap_low, gap_high) in the
    coordinates of the winning chart.
    """
    best = _umbilic_search_one(patch, coarse, refine_iters, n_starts)
    if patch.rotated is not None:
        alt = _umbilic_search_one(patch.rotated, coarse, refine_iters, n_starts)
        if alt[2] < best[2]:
            best = alt
    return best


def _umbilic_search_one(patch, coarse, refine_iters, n_starts):
    from scipy.optimize import minimize

    u, v = patch.grid_points(coarse)
    frame = JetFrame(patch, u, v)
    (u0b, u1b), (v0b, v1b) = patch.domain
    span_u, span_v = u1b - u0b, v1b - v0b

    # lowest-gap nodes, kept mutually separated so distinct basins are hit
    order = np.argsort(frame.gap_low)
    starts = []
    for k in order:
        if len(starts) >= n_starts:
            break
        if all(
            max(abs(u[k] - su) / span_u, abs(v[k] - sv) / span_v) > 0.08
            for su, sv in starts
        ) or not starts:
            starts.append((u[k], v[k]))

    def gap(x):
        uu = float(np.clip(x[0], u0b + 1e-6, u1b - 1e-6))
        vv = float(np.clip(x[1], v0b + 1e-6, v1b - 1e-6))
        return float(JetFrame(patch, uu, vv).gap_low)

    best = None
    for su, sv in starts:
        res = minimize(
            gap,
            np.array([su, sv]),
            method="Nelder-Mead",
            options={"maxiter": refine_iters, "xatol": 1e-10, "fatol": 1e-14},
        )
        if best is None or res.fun < best.fun:
            best = res
        if best.fun < 1e-14:
            break
    uu = float(np.clip(best.x[0], u0b + 1e-6, u1b - 1e-6))
    vv = float(np.clip(best.x[1], v0b + 1e-6, v1b - 1e-6))
    f = JetFrame(patch, uu, vv)
    return uu, vv, float(f.gap_low), float(f.gap_high)
