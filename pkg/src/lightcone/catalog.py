"""Constructors for the concrete test surfaces.

Round spheres (possibly boosted), the flat product cylinder, the flat
paraboloid graph, radial graphs over the unit sphere, and the
harmonic-perturbation family that drives the verification sweeps and the
constant-curvature search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from . import jets
from .errors import NonpositiveRadialFunction, NonpositiveRadius
from .harmonics import L_MAX, real_harmonic
from .jets import Jet2, JetVec4
from .minkowski import boost_to, vec
from .surfaces import SurfacePatch
from .transforms import ScalarField, expand

_SPHERE_DOMAIN = ((0.0, np.pi), (0.0, 2.0 * np.pi))

#: Quarter turn about the y axis; sends the chart poles to equatorial points.
_POLE_SWAP = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]])


def _direction_jets(tj, pj, rotation=None):
    st, ct = jets.sin(tj), jets.cos(tj)
    cp, sp = jets.cos(pj), jets.sin(pj)
    w = [st * cp, st * sp, ct]
    if rotation is not None:
        R = np.asarray(rotation, dtype=float)
        w = [w[0] * R[k, 0] + w[1] * R[k, 1] + w[2] * R[k, 2] for k in range(3)]
    return w


def round_sphere(u=None, r=1.0):
    """The round sphere cut out by an observer u at radius r.

    The chart is (theta, phi) -> B (r, r w(theta, phi)) with B the boost
    taking (-1, 0, 0, 0) to u, so <u, psi> = r holds identically.
    """
    if r <= 0.0:
        raise NonpositiveRadius(f"radius must be positive, got {r}")
    u = vec(-1.0, 0.0, 0.0, 0.0) if u is None else np.asarray(u, dtype=float)
    B = boost_to(u)

    def make_chart(rotation):
        def chart(tj, pj):
            w = _direction_jets(tj, pj, rotation)
            base = JetVec4(Jet2.constant(r), w[0] * r, w[1] * r, w[2] * r)
            return base.linear_map(B)

        return chart

    name = f"round-sphere(r={r:g})"
    rotated = SurfacePatch(
        name=name + "/rotated", chart=make_chart(_POLE_SWAP),
        domain=_SPHERE_DOMAIN, closed=True,
    )
    return SurfacePatch(
        name=name, chart=make_chart(None), domain=_SPHERE_DOMAIN,
        closed=True, rotated=rotated,
    )


def product_cylinder(x_extent=1.5):
    """Flat complete surface (cosh x, sinh x, cos y, sin y) on a rectangle.

    The canonical example with indefinite second fundamental form: the
    shape operator has eigenvalues of opposite sign everywhere.
    """

    def chart(uj, vj):
        return JetVec4(jets.cosh(uj), jets.sinh(uj), jets.cos(vj), jets.sin(vj))

    return SurfacePatch(
        name="product-cylinder",
        chart=chart,
        domain=((-x_extent, x_extent), (0.0, 2.0 * np.pi)),
    )


def paraboloid_graph(extent=2.0):
    """Flat isometric graph with identically vanishing shape operator."""

    def chart(uj, vj):
        q = (uj * uj + vj * vj) * 0.5
        return JetVec4(q + 0.5, q - 0.5, uj, vj)

    return SurfacePatch(
        name="paraboloid-graph",
        chart=chart,
        domain=((-extent, extent), (-extent, extent)),
    )


@dataclass(frozen=True)
class HarmonicSpec:
    """A finite real-spherical-harmonic expansion for log-radial bumps.

    Serialized as a JSON array of [degree, order, amplitude] triples.
    """

    terms: tuple = ()

    def __post_init__(self):
        for l, m, a in self.terms:
            if not (0 <= l <= L_MAX and -l <= m <= l):
                raise ValueError(f"bad harmonic index ({l}, {m})")
            if not np.isfinite(a):
                raise ValueError(f"amplitude for ({l}, {m}) is not finite")

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(terms=tuple((int(l), int(m), float(a)) for l, m, a in data))

    def to_json(self):
        return json.dumps([[l, m, a] for l, m, a in self.terms])

    def cartesian(self, x, y, z):
        """Evaluate the expansion at direction cosines (numbers or jets)."""
        total = 0.0
        for l, m, a in self.terms:
            total = real_harmonic(l, m, x, y, z) * a + total
        return total

    def chart_field(self, rotation=None):
        """The expansion as a ScalarField on a (theta, phi) sphere chart."""

        def fn(tj, pj):
            w = _direction_jets(tj, pj, rotation)
            out = self.cartesian(*w)
            if not isinstance(out, Jet2):
                out = Jet2.constant(np.zeros(np.broadcast_shapes(tj.batch_shape, pj.batch_shape)))
            return out

        return ScalarField(fn)

    def pack(self, pairs):
        """Coefficient vector in the order of ``pairs`` (absent terms are 0)."""
        lut = {(l, m): a for l, m, a in self.terms}
        return np.array([lut.get(p, 0.0) for p in pairs])

    @classmethod
    def unpack(cls, pairs, values):
        return cls(terms=tuple((l, m, float(a)) for (l, m), a in zip(pairs, values)))


def graph_over_sphere(f_cart, name="radial-graph", check_grid=(24, 48)):
    """Radial graph psi = f(w) (1, w) over the unit sphere.

    ``f_cart`` maps direction cosines (as jets) to a positive jet; any
    smooth metric on the sphere can be realized this way.
    """

    def make_chart(rotation):
        def chart(tj, pj):
            w = _direction_jets(tj, pj, rotation)
            f = f_cart(*w)
            if not isinstance(f, Jet2):
                f = Jet2.constant(
                    np.broadcast_to(np.asarray(f, float),
                                    np.broadcast_shapes(tj.batch_shape, pj.batch_shape)).copy()
                )
            return JetVec4(f, f * w[0], f * w[1], f * w[2])

        return chart

    patch = SurfacePatch(
        name=name,
        chart=make_chart(None),
        domain=_SPHERE_DOMAIN,
        closed=True,
        rotated=SurfacePatch(
            name=name + "/rotated", chart=make_chart(_POLE_SWAP),
            domain=_SPHERE_DOMAIN, closed=True,
        ),
    )
    u, v = patch.grid_points(check_grid)
    vals = patch.position(u, v)[..., 0]
    if np.any(vals <= 0.0):
        raise NonpositiveRadialFunction(
            f"radial function reaches {np.min(vals):.3e} on the check grid"
        )
    return patch


def perturbed_sphere(spec, r=1.0):
    """Expansion of the trivial round sphere by a harmonic log-radius bump."""
    base = round_sphere(r=r)
    main = expand(base, spec.chart_field())
    label = f"perturbed-sphere(r={r:g}, {len(spec.terms)} terms)"
    rotated = SurfacePatch(
        name=label + "/rotated",
        chart=expand(base.rotated, spec.chart_field(rotation=_POLE_SWAP)).chart,
        domain=_SPHERE_DOMAIN,
        closed=True,
    )
    return replace(main, name=label, rotated=rotated)
