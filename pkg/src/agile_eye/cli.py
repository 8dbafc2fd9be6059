"""Command-line front end: single-query solvers, sweeps, and tracking.

All angles are radians unless --degrees is given, which converts at the
I/O boundary only.  JSON output carries a schema_version field and floats
printed with 17 significant digits, so identical inputs produce
byte-identical documents.

Exit codes: 2 parse/usage errors, 3 not-assembled, 4 start-not-a-solution,
5 singularity crossing during tracking.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import replace

import click
import numpy as np

from .config import load_config
from .dk import (
    FAMILY_LABELS,
    FAMILY_SINGULAR_LEG,
    classify_joint_degeneracy,
    self_motion_family,
    solve_dk,
)
from .exceptions import (
    MalformedRotation,
    NotAssembled,
    SingularNoSignature,
    StartNotASolution,
    UnknownFamily,
)
from .ik import solve_ik
from .mechanism import JointTriplet, constraint_residuals
from .modes import assembly_mode_id, track_path, working_mode_signature
from .singularity import (
    classify_configuration,
    det3,
    det_a_closed_form,
    jacobians,
)
from .so3 import euler_to_rotation, validate_rotation
from .sweep import iter_records, run_sweep

EXIT_NOT_ASSEMBLED = 3
EXIT_START_NOT_A_SOLUTION = 4
EXIT_SINGULARITY_CROSSING = 5

SCHEMA_VERSION = "1"


def _fmt(x: float) -> str:
    """Float with 17 significant digits (lossless double round-trip)."""
    return format(float(x), ".17g")


def _json(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, .17g floats."""
    out = io.StringIO()
    _write_json(obj, out)
    return out.getvalue()


def _write_json(obj, out) -> None:
    if obj is None:
        out.write("null")
    elif obj is True:
        out.write("true")
    elif obj is False:
        out.write("false")
    elif isinstance(obj, (int, np.integer)):
        out.write(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.write(_fmt(obj))
    elif isinstance(obj, str):
        out.write('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, dict):
        out.write("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.write(", ")
            out.write(f'"{k}": ')
            _write_json(v, out)
        out.write("}")
    elif isinstance(obj, (list, tuple)):
        out.write("[")
        for i, v in enumerate(obj):
            if i:
                out.write(", ")
            _write_json(v, out)
        out.write("]")
    elif isinstance(obj, np.ndarray):
        _write_json(obj.tolist(), out)
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def _angles_out(values, degrees: bool):
    conv = math.degrees if degrees else float
    return [conv(v) for v in values]


def _angles_in(values, degrees: bool):
    conv = math.radians if degrees else float
    return tuple(conv(v) for v in values)


def _matrix_rows(r: np.ndarray):
    return [[float(x) for x in row] for row in r]


def _parse_orientation(euler, matrix, degrees: bool) -> np.ndarray:
    if (euler is None or len(euler) == 0) == (matrix is None or len(matrix) == 0):
        raise click.UsageError("provide exactly one of --euler or --matrix")
    if euler:
        return euler_to_rotation(_angles_in(euler, degrees))
    try:
        return validate_rotation(np.array(matrix, dtype=float).reshape(3, 3))
    except MalformedRotation as exc:
        raise click.UsageError(f"invalid rotation matrix: {exc}") from exc


def _signature_or_none(j: JointTriplet, r: np.ndarray) -> str | None:
    try:
        return working_mode_signature(j, r).label
    except SingularNoSignature:
        return None


@click.group()
@click.option("--tol-residual", type=float, default=None, help="Assembly residual tolerance.")
@click.option("--tol-singular", type=float, default=None, help="Singularity detection tolerance.")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["json", "csv"]),
    default=None,
    help="Output format (default json).",
)
@click.option("--degrees", is_flag=True, help="Angles in degrees at the I/O boundary.")
@click.pass_context
def main(ctx, tol_residual, tol_singular, output_format, degrees):
    """Kinematics toolkit for the orthogonal 3-RRR spherical wrist.

    Reads defaults from the file named by $AGILE_CONFIG (key = value
    lines mirroring the tolerance settings); command-line flags override.
    """
    try:
        cfg = load_config()
    except (OSError, ValueError) as exc:
        raise click.UsageError(f"bad config file: {exc}") from exc
    overrides = {}
    if tol_residual is not None:
        overrides["residual_tol"] = tol_residual
    if tol_singular is not None:
        overrides["singular_tol"] = tol_singular
    if output_format is not None:
        overrides["output_format"] = output_format
    if overrides:
        try:
            cfg = replace(cfg, **overrides).validate()
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
    ctx.obj = {"cfg": cfg, "degrees": degrees}


@main.command()
@click.option("--euler", nargs=3, type=float, help="Orientation as phi theta psi.")
@click.option("--matrix", nargs=9, type=float, help="Orientation as 9 row-major entries.")
@click.option("--fill-arbitrary", is_flag=True, help="Fill arbitrary legs with angle 0.")
@click.pass_context
def ik(ctx, euler, matrix, fill_arbitrary):
    """Inverse kinematics: up to 8 joint solutions for an orientation."""
    cfg, degrees = ctx.obj["cfg"], ctx.obj["degrees"]
    r = _parse_orientation(euler, matrix, degrees)
    result = solve_ik(r, fill_arbitrary=fill_arbitrary)
    solutions = [
        {
            "joints": _angles_out(j.as_tuple(), degrees),
            "signature": _signature_or_none(j, r),
        }
        for j in result.enumerated
    ]
    if cfg.output_format == "csv":
        lines = ["theta1,theta2,theta3,signature"]
        for sol in solutions:
            sig = sol["signature"] or ""
            lines.append(",".join(_fmt(v) for v in sol["joints"]) + f",{sig}")
        click.echo("\n".join(lines))
        return
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "ik",
        "orientation": _matrix_rows(r),
        "legs": [
            {
                "leg": i + 1,
                "arbitrary": leg.arbitrary,
                "angles": None
                if leg.arbitrary
                else _angles_out(leg.angles, degrees),
            }
            for i, leg in enumerate(result.legs)
        ],
        "solution_count": len(solutions),
        "solutions": solutions,
    }
    click.echo(_json(doc))


@main.command()
@click.argument("joints", nargs=3, type=float)
@click.pass_context
def dk(ctx, joints):
    """Direct kinematics for one joint triplet (radians; use -- before
    negative values)."""
    cfg, degrees = ctx.obj["cfg"], ctx.obj["degrees"]
    j = JointTriplet(*_angles_in(joints, degrees))
    result = solve_dk(j)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "dk",
        "joints": _angles_out(j.as_tuple(), degrees),
        "branch": result.branch,
        "trivial": [_matrix_rows(m) for m in result.trivial],
    }
    if result.is_finite:
        doc["solutions"] = []
        for mode_id, sol in enumerate(result.solutions, 1):
            r = euler_to_rotation(sol)
            doc["solutions"].append(
                {
                    "mode_id": mode_id,
                    "euler": _angles_out(sol.as_tuple(), degrees),
                    "signature": _signature_or_none(j, r),
                }
            )
    elif result.branch == "self_motion":
        doc["pair"] = result.pair
        doc["families"] = list(result.families)
        doc["family_labels"] = [FAMILY_LABELS[f - 1] for f in result.families]
        doc["constrained"] = result.constrained
    if cfg.output_format == "csv":
        lines = ["mode_id,phi,theta,psi,signature"]
        for sol in doc.get("solutions", []):
            sig = sol["signature"] or ""
            lines.append(
                f"{sol['mode_id']},"
                + ",".join(_fmt(v) for v in sol["euler"])
                + f",{sig}"
            )
        click.echo("\n".join(lines))
        return
    click.echo(_json(doc))


@main.command()
@click.option("--joints", nargs=3, type=float, required=True)
@click.option("--euler", nargs=3, type=float)
@click.option("--matrix", nargs=9, type=float)
@click.pass_context
def jacobian(ctx, joints, euler, matrix):
    """Numeric Jacobians A and diag(B) plus determinant cross-checks."""
    cfg, degrees = ctx.obj["cfg"], ctx.obj["degrees"]
    j = JointTriplet(*_angles_in(joints, degrees))
    r = _parse_orientation(euler, matrix, degrees)
    pair = jacobians(j, r)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "jacobian",
        "joints": _angles_out(j.as_tuple(), degrees),
        "a": _matrix_rows(pair.a),
        "b_diag": [float(x) for x in pair.b_diag],
        "det_a": det3(pair.a),
        "det_a_closed_form_nontrivial": det_a_closed_form(j, "nontrivial"),
        "residuals": [float(x) for x in constraint_residuals(j, r)],
    }
    if cfg.output_format == "csv":
        lines = ["key,value"]
        lines.append("det_a," + _fmt(doc["det_a"]))
        lines.append(
            "det_a_closed_form_nontrivial,"
            + _fmt(doc["det_a_closed_form_nontrivial"])
        )
        for i in range(3):
            lines.append(f"b{i + 1}{i + 1}," + _fmt(doc["b_diag"][i]))
        click.echo("\n".join(lines))
        return
    click.echo(_json(doc))


@main.command()
@click.option("--joints", nargs=3, type=float, required=True)
@click.option("--euler", nargs=3, type=float)
@click.option("--matrix", nargs=9, type=float)
@click.pass_context
def classify(ctx, joints, euler, matrix):
    """Singularity class of an assembled configuration."""
    cfg, degrees = ctx.obj["cfg"], ctx.obj["degrees"]
    j = JointTriplet(*_angles_in(joints, degrees))
    r = _parse_orientation(euler, matrix, degrees)
    try:
        result = classify_configuration(j, r, cfg)
    except NotAssembled as exc:
        click.echo(f"not assembled: {exc}", err=True)
        sys.exit(EXIT_NOT_ASSEMBLED)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "classify",
        "kind": result.kind,
        "family_id": result.family_id,
        "family_label": None
        if result.family_id is None
        else FAMILY_LABELS[result.family_id - 1],
        "trivial_id": result.trivial_id,
        "det_a": det3(jacobians(j, r).a),
        "det_factor": det_a_closed_form(j, "nontrivial"),
        "joint_degeneracy": classify_joint_degeneracy(j, cfg.structure_tol).kind,
        "residuals": [float(x) for x in constraint_residuals(j, r)],
    }
    if cfg.output_format == "csv":
        lines = ["key,value", f"kind,{doc['kind']}"]
        lines.append("det_a," + _fmt(doc["det_a"]))
        lines.append("det_factor," + _fmt(doc["det_factor"]))
        click.echo("\n".join(lines))
        return
    click.echo(_json(doc))


@main.command("self-motion")
@click.option("--family", required=True, help="Family id 1..6 or label 1a..3b.")
@click.option("--parameter", type=float, default=0.0, help="Free angle on the curve.")
@click.pass_context
def self_motion(ctx, family, parameter):
    """Orientation on one of the six self-motion curves."""
    cfg, degrees = ctx.obj["cfg"], ctx.obj["degrees"]
    label = family.strip().lower()
    t = _angles_in([parameter], degrees)[0]
    try:
        r = self_motion_family(int(label) if label.isdigit() else label, t)
    except UnknownFamily as exc:
        raise click.UsageError(str(exc)) from exc
    fid_num = int(label) if label.isdigit() else FAMILY_LABELS.index(label) + 1
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "self_motion",
        "family_id": fid_num,
        "family_label": FAMILY_LABELS[fid_num - 1],
        "parameter": float(t),
        "singular_leg": FAMILY_SINGULAR_LEG[fid_num],
        "variant": "folded" if fid_num % 2 == 1 else "extended",
        "matrix": _matrix_rows(r),
    }
    if cfg.output_format == "csv":
        lines = ["r11,r12,r13,r21,r22,r23,r31,r32,r33"]
        lines.append(",".join(_fmt(x) for row in doc["matrix"] for x in row))
        click.echo("\n".join(lines))
        return
    click.echo(_json(doc))


def _read_path_file(path_file: str) -> list[JointTriplet]:
    with open(path_file, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise click.UsageError(f"{path_file}: empty path file") from None
        if [h.strip() for h in header] != ["theta1", "theta2", "theta3"]:
            raise click.UsageError(
                f"{path_file}: expected header 'theta1,theta2,theta3'"
            )
        waypoints = []
        for lineno, row in enumerate(reader, 2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 3:
                raise click.UsageError(f"{path_file}:{lineno}: expected 3 columns")
            try:
                waypoints.append(JointTriplet(*(float(c) for c in row)))
            except ValueError as exc:
                raise click.UsageError(f"{path_file}:{lineno}: {exc}") from exc
    if not waypoints:
        raise click.UsageError(f"{path_file}: no waypoints")
    return waypoints


@main.command()
@click.argument("path_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--start-euler", nargs=3, type=float)
@click.option("--start-matrix", nargs=9, type=float)
@click.pass_context
def track(ctx, path_file, start_euler, start_matrix):
    """Track the assembly mode along a joint path (CSV with header
    theta1,theta2,theta3)."""
    cfg, degrees = ctx.obj["cfg"], ctx.obj["degrees"]
    waypoints = _read_path_file(path_file)
    if degrees:
        waypoints = [
            JointTriplet(*_angles_in(w.as_tuple(), True)) for w in waypoints
        ]
    start = _parse_orientation(start_euler, start_matrix, degrees)
    try:
        result = track_path(waypoints, start, cfg)
    except StartNotASolution as exc:
        click.echo(f"start orientation rejected: {exc}", err=True)
        sys.exit(EXIT_START_NOT_A_SOLUTION)
    steps = []
    sigs = set()
    modes = set()
    for k, e in enumerate(result.eulers):
        jk = waypoints[k]
        r = result.orientations[k]
        mode = assembly_mode_id(jk, r)
        sig = _signature_or_none(jk, r)
        modes.add(mode)
        sigs.add(sig)
        steps.append(
            {
                "step": k,
                "joints": _angles_out(jk.as_tuple(), degrees),
                "euler": _angles_out(e.as_tuple(), degrees),
                "mode_id": mode,
                "signature": sig,
            }
        )
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "track",
        "steps": steps,
        "mode_constant": len(modes) <= 1 and len(sigs) <= 1,
        "crossing": None
        if result.crossing is None
        else {"segment": result.crossing.segment, "reason": result.crossing.reason},
    }
    if cfg.output_format == "csv":
        lines = ["step,phi,theta,psi,mode_id,signature"]
        for s in steps:
            lines.append(
                f"{s['step']},"
                + ",".join(_fmt(v) for v in s["euler"])
                + f",{s['mode_id']},{s['signature']}"
            )
        click.echo("\n".join(lines))
        click.echo(f"mode constant: {str(doc['mode_constant']).lower()}", err=True)
    else:
        click.echo(_json(doc))
    if result.crossing is not None:
        click.echo(
            f"singularity crossing at segment {result.crossing.segment}: "
            f"{result.crossing.reason}",
            err=True,
        )
        sys.exit(EXIT_SINGULARITY_CROSSING)


@main.command()
@click.option("--grid-n", type=int, default=None, help="Grid points per joint axis.")
@click.option(
    "--records-out",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Write per-cell records CSV here (default: stream to stdout).",
)
@click.option("--no-records", is_flag=True, help="Summary only; skip the record stream.")
@click.pass_context
def sweep(ctx, grid_n, records_out, no_records):
    """Joint-space sweep with det-sign flood fill on the wrapped grid.

    Records go to --records-out (or stdout if omitted); the summary goes
    to stdout, or to stderr when records already use stdout.
    """
    cfg = ctx.obj["cfg"]
    n = grid_n if grid_n is not None else cfg.grid_n
    if n < 8:
        raise click.UsageError("grid_n must be at least 8")
    result = run_sweep(n, cfg)
    summary = result.summary
    if cfg.output_format == "csv":
        lines = ["key,value"]
        for key in (
            "grid_n",
            "components_positive",
            "components_negative",
            "singular_cell_fraction",
            "wall_cell_fraction",
        ):
            value = summary[key]
            lines.append(
                f"{key}," + (_fmt(value) if isinstance(value, float) else str(value))
            )
        summary_text = "\n".join(lines)
    else:
        summary_text = _json(summary)

    header = "theta1,theta2,theta3,det_a,degeneracy,component_id"

    def write_records(out):
        out.write(header + "\n")
        for rec in iter_records(result):
            out.write(
                f"{_fmt(rec.theta1)},{_fmt(rec.theta2)},{_fmt(rec.theta3)},"
                f"{_fmt(rec.det_a)},{rec.degeneracy},{rec.component_id}\n"
            )

    if no_records:
        click.echo(summary_text)
    elif records_out is not None:
        with open(records_out, "w") as fh:
            write_records(fh)
        click.echo(summary_text)
    else:
        write_records(sys.stdout)
        click.echo(summary_text, err=True)


if __name__ == "__main__":
    main()
