"""Command-line interface: verify, global, search, export.

Every run writes a JSON manifest echoing the configuration, the residual of
each check with its tolerance, and the wall time.  Exit codes: 0 all checks
pass, 2 a check failed, 3 degenerate or invalid surface input, 4 malformed
search configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import __version__, catalog, curvature, transforms
from .errors import (
    DegeneracyViolation,
    LightconeError,
    NotOnLightcone,
    NotSpacelike,
)
from .integrals import SphereGrid, geometry_table
from .search import SearchConfig, search as run_search
from .spectrum import lambda1_estimate
from .surfaces import JetFrame, umbilic_point_search
from .util import worker_count

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_DEGENERATE = 3
EXIT_BAD_CONFIG = 4

DEFAULT_TOLS = {
    "on_cone": 1e-9,
    "normal_constraints": 1e-10,
    "position_weingarten": 1e-10,
    "weingarten_agreement": 1e-8,
    "normal_parallel": 1e-9,
    "second_form_symmetry": 1e-12,
    "shape_self_adjoint": 1e-10,
    "curvature_trace": 1e-8,
    "second_form_inner": 1e-9,
    "gap_floor": 1e-9,
    "gap_match": 1e-8,
    "codazzi": 1e-7,
    "degeneracy_floor": 1e-8,
    "curvature_relation": 1e-6,
    "trace_gradient": 1e-7,
    "lowered_symmetry": 1e-8,
    "conjugate_weingarten": 1e-7,
    "conjugate_second_form": 1e-7,
    "conjugate_curvature": 1e-7,
    "double_conjugate": 1e-9,
    "third_form": 1e-8,
    "expansion_weingarten": 1e-7,
    "expansion_second_form": 1e-7,
    "expansion_curvature": 1e-7,
    "expansion_trace": 1e-8,
    "expansion_normal": 1e-7,
    "expansion_pairing": 1e-9,
    "expansion_metric": 1e-9,
    "gauss_maps": 1e-10,
    "round_keta": 1e-8,
    "umbilic_point": 1e-6,
    "gauss_bonnet_induced": 1e-6,
    "gauss_bonnet_second": 1e-5,
    "second_form_area": 1e-6,
    "round_second_form_area": 1e-6,
    "lambda1_slack": 5e-2,
    "round_lambda1": 2e-2,
    "curvature_floor": 1e-6,
}


class Manifest:
    """Collects check results, prints a summary, and serializes to JSON."""

    def __init__(self, command, config, seed=None):
        self.command = command
        self.config = config
        self.seed = seed
        self.checks = []
        self.extra = {}
        self._t0 = time.time()

    def add(self, name, residual=None, tolerance=None, status=None, detail=""):
        if status is None:
            status = "PASS" if abs(residual) <= tolerance else "FAIL"
        self.checks.append(
            {
                "name": name,
                "status": status,
                "residual": None if residual is None else float(residual),
                "tolerance": None if tolerance is None else float(tolerance),
                "detail": detail,
            }
        )

    def skip(self, name, detail):
        self.add(name, status="SKIP", detail=detail)

    @property
    def passed(self):
        return all(c["status"] != "FAIL" for c in self.checks)

    def to_dict(self):
        out = {
            "tool_version": __version__,
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "wall_time_s": time.time() - self._t0,
            "checks": self.checks,
            "passed": self.passed,
        }
        out.update(self.extra)
        return out

    def print_summary(self, stream=sys.stdout):
        width = max((len(c["name"]) for c in self.checks), default=10) + 2
        for c in self.checks:
            res = "" if c["residual"] is None else f"{c['residual']:.3e}"
            tol = "" if c["tolerance"] is None else f"(tol {c['tolerance']:.1e})"
            detail = f"  {c['detail']}" if c["detail"] else ""
            print(f"  {c['name']:<{width}} {c['status']:<4} {res:>10} {tol}{detail}", file=stream)
        print(f"  => {'PASS' if self.passed else 'FAIL'}", file=stream)

    def write(self, path):
        if path:
            with open(path, "w") as fh:
                json.dump(self.to_dict(), fh, indent=2)


def _parse_grid(text):
    try:
        nt, np_ = text.lower().split("x")
        return int(nt), int(np_)
    except Exception:
        raise argparse.ArgumentTypeError(f"grid must look like 64x128, got {text!r}")


def _tol_item(item):
    if "=" not in item:
        raise argparse.ArgumentTypeError(f"tolerance override needs NAME=VALUE, got {item!r}")
    name, value = item.split("=", 1)
    if name not in DEFAULT_TOLS:
        raise argparse.ArgumentTypeError(f"unknown tolerance {name!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} needs a number, got {value!r}")


def _parse_tols(items):
    tols = dict(DEFAULT_TOLS)
    tols.update(items or [])
    return tols


def _build_surface(args):
    sel = args.surface
    if sel == "round-sphere":
        u = None if args.u is None else np.asarray(args.u, dtype=float)
        return catalog.round_sphere(u=u, r=args.r)
    if sel == "cylinder":
        return catalog.product_cylinder()
    if sel == "paraboloid":
        return catalog.paraboloid_graph()
    if sel == "perturbed":
        if not args.spec:
            raise LightconeError("perturbed surface needs --spec FILE")
        with open(args.spec) as fh:
            spec = catalog.HarmonicSpec.from_json(fh.read())
        return catalog.perturbed_sphere(spec, r=args.r)
    raise LightconeError(f"unknown surface selector {sel!r}")


# -- verify ------------------------------------------------------------------


def _verify_points(patch, grid, seed):
    u, v = patch.grid_points(grid)
    rng = np.random.default_rng(seed)
    ur, vr = patch.sample_points(200, rng, margin=0.03)
    return np.concatenate([u, ur]), np.concatenate([v, vr])


def cmd_verify(args):
    tols = _parse_tols(args.tol)
    manifest = Manifest(
        "verify",
        {
            "surface": args.surface,
            "r": args.r,
            "u": args.u,
            "spec": args.spec,
            "grid": list(args.grid),
            "tolerances": tols,
            "workers": worker_count(),
        },
        seed=args.seed,
    )
    try:
        patch = _build_surface(args)
        u, v = _verify_points(patch, args.grid, args.seed)
        frame = JetFrame(patch, u, v)
    except (NotOnLightcone, NotSpacelike, LightconeError) as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE

    cone = np.max(np.abs(frame.psi.dot(frame.psi).value))
    manifest.add("on_cone", cone, tols["on_cone"])

    eta, psi = frame.eta, frame.psi
    nc = max(
        np.max(np.abs(eta.dot(eta).value)),
        np.max(np.abs(eta.dot(psi).value - 1.0)),
        np.max(np.abs(eta.dot(frame.psi_u).value)),
        np.max(np.abs(eta.dot(frame.psi_v).value)),
    )
    manifest.add("normal_constraints", nc, tols["normal_constraints"])
    manifest.add(
        "position_weingarten",
        np.max(frame.position_weingarten_residual()),
        tols["position_weingarten"],
    )

    from .surfaces import _mat2

    closed_form = _mat2(frame.weingarten_closed_form())
    manifest.add(
        "weingarten_agreement",
        np.max(np.abs(closed_form - frame.A_val)),
        tols["weingarten_agreement"],
    )
    manifest.add(
        "normal_parallel", np.max(frame.normal_parallel_residual()), tols["normal_parallel"]
    )
    II = frame.II_val
    manifest.add(
        "second_form_symmetry",
        np.max(np.abs(II[..., 0, 1] - II[..., 1, 0])),
        tols["second_form_symmetry"],
    )
    gA = np.einsum("...ac,...cb->...ab", frame.g_val, frame.A_val)
    manifest.add(
        "shape_self_adjoint",
        np.max(np.abs(gA[..., 0, 1] - gA[..., 1, 0])),
        tols["shape_self_adjoint"],
    )
    k_br = curvature.gauss_curvature_brioschi(frame)
    manifest.add(
        "curvature_trace",
        max(np.max(np.abs(k_br - frame.K_val)), np.max(np.abs(frame.H2_val - frame.K_val))),
        tols["curvature_trace"],
    )
    manifest.add(
        "second_form_inner",
        np.max(frame.second_form_inner_residual()),
        tols["second_form_inner"],
    )
    manifest.add(
        "gap_floor",
        max(0.0, -min(np.min(frame.gap_low), np.min(frame.gap_high))),
        tols["gap_floor"],
    )
    manifest.add(
        "gap_match", np.max(np.abs(frame.gap_low - frame.gap_high)), tols["gap_match"]
    )
    manifest.add(
        "codazzi", np.max(curvature.codazzi_residual(None, frame=frame)), tols["codazzi"]
    )

    min_abs_d = float(np.min(np.abs(frame.detA_val)))
    nondegenerate = min_abs_d > tols["degeneracy_floor"]
    ii_definite = bool(np.all(frame.ii_positive))
    manifest.add(
        "nondegeneracy",
        status="PASS" if nondegenerate else "SKIP",
        residual=min_abs_d,
        tolerance=tols["degeneracy_floor"],
        detail="nondegenerate" if nondegenerate else "degenerate shape operator",
    )

    sub = (max(4, args.grid[0] // 4), max(8, args.grid[1] // 4))
    if nondegenerate and ii_definite:
        rel = curvature.curvature_relation(None, frame=frame)
        manifest.add(
            "curvature_relation", np.max(rel["residual"]), tols["curvature_relation"]
        )
        manifest.add(
            "trace_gradient",
            np.max(curvature.trace_gradient_residual(None, frame=frame)),
            tols["trace_gradient"],
        )
        lt = curvature.difference_tensor(None, frame=frame)
        sym = max(
            np.max(np.abs(lt.lowered - np.swapaxes(lt.lowered, -3, -2))),
            np.max(np.abs(lt.lowered - np.swapaxes(lt.lowered, -2, -1))),
        )
        manifest.add("lowered_symmetry", sym, tols["lowered_symmetry"])
        if args.surface == "round-sphere":
            keta = curvature.second_form_curvature(frame)
            manifest.add("round_keta", np.max(np.abs(keta - 2.0)), tols["round_keta"])
    else:
        why = "degenerate shape operator" if not nondegenerate else "second form not definite"
        for name in ("curvature_relation", "trace_gradient", "lowered_symmetry"):
            manifest.skip(name, why)

    if nondegenerate:
        dual = transforms.verify_conjugate_duality(patch, grid=sub)
        manifest.add(
            "conjugate_weingarten", dual["weingarten_inverse"], tols["conjugate_weingarten"]
        )
        manifest.add(
            "conjugate_second_form", dual["second_form_match"], tols["conjugate_second_form"]
        )
        manifest.add(
            "conjugate_curvature", dual["curvature_ratio"], tols["conjugate_curvature"]
        )
        manifest.add("third_form", dual["third_form_match"], tols["third_form"])
        manifest.add(
            "double_conjugate",
            transforms.double_conjugate_residual(patch, grid=sub),
            tols["double_conjugate"],
        )
    else:
        for name in (
            "conjugate_weingarten",
            "conjugate_second_form",
            "conjugate_curvature",
            "third_form",
            "double_conjugate",
        ):
            manifest.skip(name, "degenerate shape operator")

    sigma = catalog.HarmonicSpec(terms=((1, 1, 0.02), (2, -1, 0.015))).chart_field()
    rng = np.random.default_rng(args.seed)
    pts = patch.sample_points(100, rng, margin=0.05)
    laws = transforms.verify_expansion_laws(patch, sigma, pts)
    for key, tol_name in (
        ("weingarten", "expansion_weingarten"),
        ("second_form", "expansion_second_form"),
        ("curvature", "expansion_curvature"),
        ("trace_consistency", "expansion_trace"),
        ("normal", "expansion_normal"),
        ("pairing", "expansion_pairing"),
        ("metric", "expansion_metric"),
    ):
        manifest.add(tol_name, laws[key], tols[tol_name])

    gf_t = frame.psi_val / frame.psi0_val[..., None]
    gp_t = frame.eta_val / frame.eta_val[..., 0:1]
    gm = max(
        np.max(np.abs(np.linalg.norm(gf_t[..., 1:], axis=-1) - 1.0)),
        np.max(np.abs(np.linalg.norm(gp_t[..., 1:], axis=-1) - 1.0)),
    )
    manifest.add("gauss_maps", gm, tols["gauss_maps"])

    if patch.closed:
        _, _, glow, ghigh = umbilic_point_search(patch, coarse=(32, 64))
        manifest.add("umbilic_point", max(glow, ghigh), tols["umbilic_point"])
    else:
        manifest.skip("umbilic_point", "not a closed surface")

    print(f"verify {patch.name} on {args.grid[0]}x{args.grid[1]} + 200 random points")
    manifest.print_summary()
    manifest.write(args.out)
    return EXIT_OK if manifest.passed else EXIT_CHECK_FAILED


# -- global ------------------------------------------------------------------


def cmd_global(args):
    tols = _parse_tols(args.tol)
    manifest = Manifest(
        "global",
        {
            "surface": args.surface,
            "r": args.r,
            "u": args.u,
            "spec": args.spec,
            "grid": list(args.grid),
            "tolerances": tols,
            "workers": worker_count(),
        },
        seed=args.seed,
    )
    try:
        patch = _build_surface(args)
        if not patch.closed:
            raise DegeneracyViolation(f"{patch.name} is not a compact sphere chart")
        grid = SphereGrid(patch, *args.grid)
        if np.any(grid.table["detA"] <= 0.0):
            raise DegeneracyViolation("det A <= 0 at a grid node")
    except (LightconeError, OSError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE

    gb = grid.gauss_bonnet()
    manifest.add("gauss_bonnet_induced", gb - 4.0 * np.pi, tols["gauss_bonnet_induced"])
    gb2 = grid.gauss_bonnet_second_form()
    manifest.add("gauss_bonnet_second", gb2 - 4.0 * np.pi, tols["gauss_bonnet_second"])
    ii_area = grid.second_form_area(check=False)
    manifest.add(
        "second_form_area_bound",
        max(0.0, ii_area - 2.0 * np.pi),
        tols["second_form_area"],
        detail=f"area {ii_area:.9f} vs 2 pi (equality iff umbilical)",
    )
    if args.surface == "round-sphere":
        manifest.add(
            "round_second_form_area",
            ii_area - 2.0 * np.pi,
            tols["round_second_form_area"],
        )
    floor = grid.second_curvature_floor(tol=tols["curvature_floor"])
    manifest.add(
        "curvature_floor",
        min(floor["keta_slack"], floor["floor_slack"]),
        -tols["curvature_floor"],
        status="PASS" if floor["passes"] else "FAIL",
        detail=f"ratio {floor['ratio']:.6f} at theta={floor['point'][0]:.3f}",
    )
    lam = lambda1_estimate(grid)
    slack = tols["lambda1_slack"]
    manifest.add(
        "eigenvalue_bound",
        max(0.0, (lam.value - lam.reilly_rhs) / lam.reilly_rhs),
        slack,
        detail=f"lambda1 {lam.value:.6f} vs bound {lam.reilly_rhs:.6f}",
    )
    if args.surface == "round-sphere":
        expected = 2.0 / args.r**2
        manifest.add(
            "round_lambda1",
            abs(lam.value - expected) / expected,
            tols["round_lambda1"],
        )
    manifest.extra["report"] = {
        "surface": patch.name,
        "n_theta": grid.n_theta,
        "n_phi": grid.n_phi,
        "area": grid.area(),
        "gauss_bonnet": gb,
        "gauss_bonnet_second_form": gb2,
        "ii_eta_area": ii_area,
        "lambda1": lam.value,
        "lambda1_refinement_gap": lam.refinement_gap,
        "bound_rhs": lam.reilly_rhs,
        "margins": {
            "gauss_bonnet": gb - 4.0 * np.pi,
            "ii_area_vs_2pi": ii_area - 2.0 * np.pi,
            "bound_minus_lambda1": lam.reilly_rhs - lam.value,
        },
    }
    print(f"global {patch.name} on {grid.n_theta}x{grid.n_phi}")
    manifest.print_summary()
    manifest.write(args.out)
    return EXIT_OK if manifest.passed else EXIT_CHECK_FAILED


# -- search ------------------------------------------------------------------


def cmd_search(args):
    try:
        with open(args.config) as fh:
            text = fh.read()
        data = json.loads(text)
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except json.JSONDecodeError as exc:
        print(
            f"malformed config {args.config}: line {exc.lineno}, column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return EXIT_BAD_CONFIG
    try:
        if args.seed is not None:
            data["seed"] = args.seed
        config = SearchConfig(**data)
    except (TypeError, ValueError) as exc:
        print(f"bad config value: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG

    manifest = Manifest("search", config.to_dict(), seed=config.seed)
    report = run_search(config)
    n_umb = sum(1 for r in report.results if r.classification == "umbilical")
    manifest.add(
        "search_completed",
        status="PASS",
        detail=(
            f"{len(report.results)} starts, {n_umb} umbilical, "
            f"{len(report.candidates)} candidates"
        ),
    )
    manifest.extra["all_umbilical"] = report.all_umbilical
    manifest.extra["candidates"] = report.candidates

    out_base = args.out or "search_report.json"
    with open(out_base, "w") as fh:
        fh.write(report.to_json())
    trace_path = args.trace or (out_base.rsplit(".", 1)[0] + "_trace.csv")
    with open(trace_path, "w") as fh:
        fh.write(report.trace_csv())
    print(f"search: report -> {out_base}, trace -> {trace_path}")
    manifest.print_summary()
    manifest.write(args.manifest)
    return EXIT_OK


# -- export ------------------------------------------------------------------


def cmd_export(args):
    try:
        patch = _build_surface(args)
        if patch.closed:
            grid = SphereGrid(patch, *args.grid)
            th, ph, table = grid.TH, grid.PH, grid.table
        else:
            th, ph = patch.grid_points(args.grid)
            table = geometry_table(patch, th, ph)
    except LightconeError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE

    keta = table.get("K_eta")
    if keta is None:
        keta = np.full(th.size, np.nan)
    try:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["theta", "phi", "K", "Keta", "d", "gap_low", "gap_high", "psi0"])
            for k in range(th.size):
                w.writerow(
                    [
                        repr(float(th[k])),
                        repr(float(ph[k])),
                        repr(float(table["K"][k])),
                        repr(float(keta[k])),
                        repr(float(table["detA"][k])),
                        repr(float(table["gap_low"][k])),
                        repr(float(table["gap_high"][k])),
                        repr(float(table["psi0"][k])),
                    ]
                )
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    print(f"export: {th.size} rows -> {args.out}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lightcone",
        description=__doc__,
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_surface_args(p):
        p.add_argument(
            "surface",
            choices=["round-sphere", "cylinder", "paraboloid", "perturbed"],
            help="catalog surface selector",
        )
        p.add_argument("--r", type=float, default=1.0, help="sphere radius")
        p.add_argument(
            "--u", type=float, nargs=4, default=None,
            help="observer vector (past unit timelike) for boosted spheres",
        )
        p.add_argument("--spec", default=None, help="harmonic spec JSON file")
        p.add_argument(
            "--grid", type=_parse_grid, default=(64, 128), help="grid as NTHETAxNPHI"
        )
        p.add_argument(
            "--tol", action="append", metavar="NAME=VALUE", type=_tol_item,
            help="tolerance override (repeatable)",
        )
        p.add_argument("--seed", type=int, default=0, help="random-point seed")
        p.add_argument("--out", default=None, help="manifest JSON path")

    fmt = dict(formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_verify = sub.add_parser(
        "verify",
        help="run the pointwise identity suite",
        description="Pointwise identity suite; nested transform checks run on "
        "a quarter-resolution subgrid.",
        **fmt,
    )
    add_surface_args(p_verify)
    p_verify.set_defaults(fn=cmd_verify)

    p_global = sub.add_parser(
        "global", help="integrals, area bound and eigenvalue bound", **fmt
    )
    add_surface_args(p_global)
    p_global.set_defaults(fn=cmd_global)

    p_search = sub.add_parser("search", help="constant-curvature variance search", **fmt)
    p_search.add_argument("--config", required=True, help="SearchConfig JSON file")
    p_search.add_argument("--seed", type=int, default=None, help="override config seed")
    p_search.add_argument("--out", default=None, help="report JSON path")
    p_search.add_argument("--trace", default=None, help="trace CSV path")
    p_search.add_argument("--manifest", default=None, help="manifest JSON path")
    p_search.set_defaults(fn=cmd_search)

    p_export = sub.add_parser("export", help="dump per-node curvature table as CSV", **fmt)
    add_surface_args(p_export)
    p_export.set_defaults(fn=cmd_export)
    # export writes the table, not a manifest
    for action in p_export._actions:
        if action.dest == "out":
            action.required = True
            action.help = "output CSV path"
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
