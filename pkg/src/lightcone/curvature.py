"""Second-level curvature machinery.

Brioschi's intrinsic Gauss curvature of an arbitrary jet-valued metric
serves as the independent oracle for both the induced metric and the
eta-second fundamental form.  On top of it sit the Codazzi residual, the
difference tensor between the two Levi-Civita connections, the trace
identity tying that tensor to the logarithmic gradient of the determinant
curvature, and the residual of the relation

    2 K^II = K^2 / det A + II(L, L) - II(grad det A, grad det A) / (4 det A^2)

which links the curvature of II to the induced curvature and the
determinant of the shape operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetric, DegeneracyViolation, NotRiemannianII
from .jets import Jet2
from .surfaces import JetFrame


@dataclass
class MetricField:
    """Symmetric 2x2 metric in chart coordinates with jet-valued entries."""

    E: Jet2
    F: Jet2
    G: Jet2

    def det(self):
        return self.E * self.G - self.F * self.F

    def riemannian_at_base(self):
        return bool(np.all(self.E.value > 0.0) and np.all(self.det().value > 0.0))

    def require_nondegenerate(self):
        if np.any(self.det().value == 0.0):
            raise DegenerateMetric("metric determinant vanishes at the base point")


def induced_metric_field(frame):
    return MetricField(frame.E, frame.F, frame.G)


def second_form_metric_field(frame):
    II = frame.II
    # Off-diagonal entries agree analytically; averaging symmetrizes rounding.
    F = (II[0][1] + II[1][0]) * 0.5
    return MetricField(II[0][0], F, II[1][1])


def christoffels(m):
    """Levi-Civita symbols Gamma[c][a][b] of a metric field, as jets."""
    m.require_nondegenerate()
    det = m.det()
    g = ((m.E, m.F), (m.F, m.G))
    gi = ((m.G / det, -m.F / det), (-m.F / det, m.E / det))
    dg = [[[g[a][b].d(ax) for b in range(2)] for a in range(2)] for ax in ("u", "v")]
    out = [[[None, None], [None, None]], [[None, None], [None, None]]]
    for c in range(2):
        for a in range(2):
            for b in range(2):
                acc = None
                for d in range(2):
                    t = gi[c][d] * (dg[a][d][b] + dg[b][d][a] - dg[d][a][b])
                    acc = t if acc is None else acc + t
                out[c][a][b] = acc * 0.5
    return tuple(tuple(tuple(r) for r in p) for p in out)


def brioschi_curvature(m):
    """Gauss curvature of a metric field from E, F, G and two derivative levels."""
    m.require_nondegenerate()
    E, F, G = m.E, m.F, m.G
    Eu, Ev = E.partial(1, 0), E.partial(0, 1)
    Gu, Gv = G.partial(1, 0), G.partial(0, 1)
    Fu, Fv = F.partial(1, 0), F.partial(0, 1)
    Evv = E.partial(0, 2)
    Guu = G.partial(2, 0)
    Fuv = F.partial(1, 1)
    e, f, g = E.value, F.value, G.value

    a11 = -0.5 * Evv + Fuv - 0.5 * Guu
    m1 = _det3(
        a11, 0.5 * Eu, Fu - 0.5 * Ev,
        Fv - 0.5 * Gu, e, f,
        0.5 * Gv, f, g,
    )
    m2 = _det3(
        np.zeros_like(e), 0.5 * Ev, 0.5 * Gu,
        0.5 * Ev, e, f,
        0.5 * Gu, f, g,
    )
    det = e * g - f * f
    return (m1 - m2) / det**2


def _det3(a, b, c, d, e, f, g, h, i):
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def gauss_curvature_brioschi(frame):
    """Independent intrinsic route to the induced Gauss curvature."""
    return brioschi_curvature(induced_metric_field(frame))


def _require_riemannian_ii(frame):
    if not np.all(frame.ii_positive):
        raise NotRiemannianII(
            f"{frame.patch.name}: second fundamental form is not positive definite"
        )


def second_form_curvature(frame):
    """Gauss curvature of the eta-second fundamental form (Brioschi route)."""
    _require_riemannian_ii(frame)
    return brioschi_curvature(second_form_metric_field(frame))


def k_eta(patch, p):
    """Curvature of II at a point of a patch."""
    return second_form_curvature(JetFrame(patch, *p))


def shape_operator_covariant_derivative(frame):
    """(nabla_a A)^c_b as a value array of shape (..., 2, 2, 2) = [a, c, b]."""
    A = frame.A
    gam = frame.gamma
    axes = ("u", "v")
    dA = np.empty(frame.A_val.shape[:-2] + (2, 2, 2))
    gam_v = np.empty_like(dA)
    for a in range(2):
        for c in range(2):
            for b in range(2):
                dA[..., a, c, b] = A[c][b].d(axes[a]).value
                gam_v[..., a, c, b] = gam[c][a][b].value
    A_v = frame.A_val
    out = dA.copy()
    out += np.einsum("...acd,...db->...acb", gam_v, A_v)
    out -= np.einsum("...adb,...cd->...acb", gam_v, A_v)
    return out


def codazzi_residual(patch, p=None, frame=None):
    """Metric norm of (nabla_X A)Y - (nabla_Y A)X over the chart basis.

    The lightlike normal is parallel in the normal bundle, so the Codazzi
    equation forces this antisymmetric part to vanish identically.
    """
    if frame is None:
        frame = JetFrame(patch, *p)
    na = shape_operator_covariant_derivative(frame)
    w = na[..., 0, :, 1] - na[..., 1, :, 0]
    g = frame.g_val
    return np.sqrt(np.einsum("...c,...cd,...d->...", w, g, w))


@dataclass
class DifferenceTensor:
    """Difference of the II and induced Levi-Civita connections.

    ``L[..., a, b, c]`` is the output component c of L(e_a, e_b); the tensor
    is symmetric in (a, b), and lowering the output index with II makes it
    totally symmetric.
    """

    L: np.ndarray
    lowered: np.ndarray


def difference_tensor(patch, p=None, frame=None, floor=1e-10):
    """L = (1/2) A^{-1} (nabla A), the connection difference tensor."""
    if frame is None:
        frame = JetFrame(patch, *p)
    detA = frame.detA_val
    if np.any(np.abs(detA) < floor):
        raise DegeneracyViolation(
            f"{frame.patch.name}: |det A| fell below {floor:.1e} "
            f"(min {np.min(np.abs(detA)):.3e})"
        )
    A = frame.A_val
    inv = np.empty_like(A)
    inv[..., 0, 0] = A[..., 1, 1]
    inv[..., 1, 1] = A[..., 0, 0]
    inv[..., 0, 1] = -A[..., 0, 1]
    inv[..., 1, 0] = -A[..., 1, 0]
    inv = inv / detA[..., None, None]
    na = shape_operator_covariant_derivative(frame)
    L = 0.5 * np.einsum("...cd,...adb->...abc", inv, na)
    lowered = np.einsum("...abc,...cd->...abd", L, frame.II_val)
    return DifferenceTensor(L=L, lowered=lowered)


def _ii_inverse(frame):
    II = frame.II_val
    det = II[..., 0, 0] * II[..., 1, 1] - II[..., 0, 1] * II[..., 1, 0]
    inv = np.empty_like(II)
    inv[..., 0, 0] = II[..., 1, 1]
    inv[..., 1, 1] = II[..., 0, 0]
    inv[..., 0, 1] = -II[..., 0, 1]
    inv[..., 1, 0] = -II[..., 1, 0]
    return inv / det[..., None, None]


def trace_gradient_residual(patch, p=None, frame=None):
    """Residual of the identity tying the II-trace of L to grad(log det A).

    Returned as the sup of the components of the II-lowered difference
    between the contracted tensor and grad(det A) / (2 det A).
    """
    if frame is None:
        frame = JetFrame(patch, *p)
    lt = difference_tensor(None, frame=frame)
    ii_inv = _ii_inverse(frame)
    tr_l = np.einsum("...ab,...abc->...c", ii_inv, lt.L)
    d_det = np.stack(
        [frame.detA.partial(1, 0), frame.detA.partial(0, 1)], axis=-1
    )
    grad = np.einsum("...cd,...d->...c", ii_inv, d_det)
    v = tr_l - grad / (2.0 * frame.detA_val[..., None])
    w = np.einsum("...bc,...c->...b", frame.II_val, v)
    return np.max(np.abs(w), axis=-1)


def curvature_relation(patch, p=None, frame=None):
    """Both sides of the central curvature relation, plus diagnostics.

    Returns a dict with the residual, the Brioschi curvature of II, the
    three right-hand-side pieces, and the residual of the auxiliary trace
    identity tr_II(Ric) = K^2 / det A.
    """
    if frame is None:
        frame = JetFrame(patch, *p)
    _require_riemannian_ii(frame)
    keta = second_form_curvature(frame)
    detA = frame.detA_val
    if np.any(np.abs(detA) < 1e-10):
        raise DegeneracyViolation("det A vanishes on the evaluation set")
    lt = difference_tensor(None, frame=frame)
    ii = frame.II_val
    ii_inv = _ii_inverse(frame)

    ii_LL = np.einsum(
        "...ac,...bd,...abe,...cdf,...ef->...",
        ii_inv, ii_inv, lt.L, lt.L, ii,
    )
    d_det = np.stack([frame.detA.partial(1, 0), frame.detA.partial(0, 1)], axis=-1)
    grad_sq = np.einsum("...ab,...a,...b->...", ii_inv, d_det, d_det)
    k2_over_d = frame.K_val**2 / detA
    rhs = k2_over_d + ii_LL - grad_sq / (4.0 * detA**2)
    residual = np.abs(2.0 * keta - rhs)

    # Auxiliary identity: the II-trace of the Ricci form of the induced
    # metric equals K^2/det A.  Uses the Brioschi K for independence.
    k_br = gauss_curvature_brioschi(frame)
    ric_tr = k_br * np.einsum("...ab,...ba->...", ii_inv, frame.g_val)
    ric_residual = np.abs(ric_tr - k_br**2 / detA)

    return {
        "residual": residual,
        "k_eta": keta,
        "k2_over_d": k2_over_d,
        "ii_LL": ii_LL,
        "grad_term": grad_sq / (4.0 * detA**2),
        "ric_residual": ric_residual,
    }
