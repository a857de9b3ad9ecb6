"""Command-line front end: ``verify``, ``spectrum`` and ``dump``.

Exit status: 0 when every check is within tolerance, 1 when a suite fails or
output cannot be written, 2 for invalid configuration.  Option values come
from flags first, then a flat ``key = value`` config file, then defaults.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from typing import Any, Callable

import click

from . import casimir_fields as cf
from . import fock_rep as fr
from . import gt_basis as gt
from . import lie_core as lc
from . import pbw_env as pe

SCHEMA_VERSION = 1
SUITES = ("jacobi", "central", "w-relations", "fock-brackets", "gt-brackets", "reductions")
FORMATS = ("json", "md", "csv")

REPORT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["schema", "command", "config", "tolerances", "ok", "results"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "config": {"type": "object"},
        "tolerances": {
            "type": "object",
            "required": ["bracket", "reduction"],
            "properties": {"bracket": {"type": "number"}, "reduction": {"type": "number"}},
        },
        "ok": {"type": "boolean"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check", "ok"],
                "properties": {"check": {"type": "string"}, "ok": {"type": "boolean"}},
            },
        },
    },
}


# -- config file -------------------------------------------------------------------------


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment; keys use underscores or dashes."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for num, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.UsageError(f"{path}:{num}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _apply_config(ctx: click.Context, params: dict[str, Any]) -> dict[str, Any]:
    path = params.pop("config", None)
    if not path:
        return params
    values = read_config_file(path)
    unknown = set(values) - set(params)
    if unknown:
        raise click.UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, raw in values.items():
        if ctx.get_parameter_source(key) != click.core.ParameterSource.DEFAULT:
            continue
        opt = next(p for p in ctx.command.params if p.name == key)
        try:
            params[key] = opt.type_cast_value(ctx, raw)
        except click.BadParameter as exc:
            raise click.UsageError(f"config key {key}: {exc.message}") from None
    return params


# -- parsing helpers ------------------------------------------------------------------------


def _fraction(text: str | None, name: str) -> Fraction | None:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"--{name} must be a rational number, got {text!r}") from None


def _load(preset: str, params: lc.Params | None = None) -> lc.Algebra:
    try:
        return lc.load_preset(preset, params)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def _label(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return gt.IrrepLabel.parse(text).top
    except ValueError as exc:
        raise click.UsageError(f"bad --label: {exc}") from None


def _rep_config(s: Fraction, kappa: Fraction | None) -> fr.RepConfig:
    try:
        return fr.RepConfig.matched(s) if kappa is None else fr.RepConfig(s, kappa)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


# -- output ---------------------------------------------------------------------------------


def _write(text: str, output: str | None) -> None:
    if output is None:
        click.echo(text, nl=False)
        return
    directory = os.path.dirname(os.path.abspath(output))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".quaplectic-")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except OSError as exc:
        click.echo(f"error: cannot write {output}: {exc}", err=True)
        sys.exit(1)


def _report_text(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = [(r["check"], "pass" if r["ok"] else "FAIL", _detail(r)) for r in report["results"]]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "status", "detail"])
        w.writerows(rows)
        return buf.getvalue()
    lines = [f"# {report['command']}", "", "| check | status | detail |", "|---|---|---|"]
    lines += [f"| {c} | {s} | {d} |" for c, s, d in rows]
    return "\n".join(lines) + "\n"


def _detail(result: dict) -> str:
    return "; ".join(f"{k}={v}" for k, v in sorted(result.items()) if k not in ("check", "ok") and not isinstance(v, (list, dict)))


def _envelope(command: str, config: dict, tol: float, red_tol: float, results: list[dict]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "tolerances": {"bracket": tol, "reduction": red_tol},
        "ok": all(r["ok"] for r in results),
        "results": results,
    }


# -- suites ---------------------------------------------------------------------------------


def _suite_jacobi(alg: lc.Algebra, opts: dict) -> list[dict]:
    rep = lc.verify_jacobi(alg.constants)
    return [{"check": f"jacobi {alg.constants.name}", "ok": rep.ok, "max_residual": str(rep.max_residual), "triples": rep.triples_checked}]


def _suite_central(alg: lc.Algebra, opts: dict) -> list[dict]:
    orders = [opts["order"]] if opts["order"] else [2]
    out = []
    for order in orders:
        try:
            c = pe.build_casimir(alg, order)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from None
        rep = pe.verify_central(c, alg)
        out.append({"check": f"central C{order} {alg.constants.name}", "ok": rep.ok, "generators": rep.checked, "failing": sorted(rep.residuals)})
    return out


def _suite_w(alg: lc.Algebra, opts: dict) -> list[dict]:
    try:
        rep = pe.verify_W_relations(alg)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    return [
        {"check": "W translation invariance", "ok": rep.translation_invariant, "checked": rep.checked},
        {"check": "W rotation pattern", "ok": rep.rotation_pattern, "failures": list(rep.failures)},
    ]


def _suite_fock(alg: lc.Algebra, opts: dict) -> list[dict]:
    names = set(alg.basis.names)
    noncompact = bool(names & {"Z00", "X0", "T", "A+0"})
    space = fr.TruncatedFock(alg.constants.n, opts["nmax"], noncompact)
    cfg = _rep_config(opts["s"], opts["kappa"])
    ops: dict[str, fr.SparseOperator] = {}
    ops.update(fr.complex_generators(space, cfg))
    ops.update(fr.four_generators(space, cfg))
    ops.update(fr.real_generators(space, cfg))
    missing = names - set(ops)
    if missing:
        raise click.UsageError(f"no Fock realization for generators {sorted(missing)}")
    rep = fr.verify_brackets(ops, alg.constants, cfg, depth=2, tol=opts["tol"])
    herm = max(fr.hermiticity_residual(ops[x]) for x in names if not x.startswith(("Z", "A")))  if any(not x.startswith(("Z", "A")) for x in names) else 0.0
    out = [{"check": f"fock brackets {alg.constants.name}", "ok": rep.ok, "max_residual": rep.max_residual, "pairs": rep.pairs_checked}]
    out.append({"check": "hermiticity of real generators", "ok": herm <= opts["tol"], "max_residual": herm})
    probe = fr.degenerate_limit_probe(1, cfg.s, ["1", "1/2", "1/4", "1/8"])
    out.append({"check": "degenerate limit slope", "ok": probe.slope_error <= opts["tol"], "slope": probe.slope, "slope_error": probe.slope_error})
    return out


def _suite_gt(alg: lc.Algebra | None, opts: dict) -> list[dict]:
    labels = [opts["label"]] if opts["label"] else [(1, 0), (2, 1), (1, 0, 0), (2, 1, 0), (2, 1, -1), (1, 1, 0, 0)]
    out = []
    for lab in labels:
        space = gt.GTSpace(lab)
        n = space.n
        worst = 0.0
        mats = {(a, b): space.sigma_Z(a, b) for a in range(1, n + 1) for b in range(1, n + 1)}
        for (a, b), x in mats.items():
            for (c, d), y in mats.items():
                rhs = (b == c) * mats[(a, d)] - (a == d) * mats[(c, b)]
                worst = max(worst, float(abs(x @ y - y @ x - rhs).max()))
        dim_ok = space.dim == gt.weyl_dimension(lab)
        cas = gt.un_casimirs(lab, n)
        poly = [float(gt.casimir_polynomial(lab, k)) for k in range(1, n + 1)]
        cas_err = max(abs(x - y) for x, y in zip(cas, poly))
        out.append({
            "check": f"gt label {','.join(map(str, lab))}",
            "ok": worst <= opts["tol"] and dim_ok and cas_err <= opts["tol"],
            "dim": space.dim,
            "bracket_residual": worst,
            "casimir_residual": cas_err,
        })
    return out


def _suite_reductions(alg: lc.Algebra | None, opts: dict) -> list[dict]:
    out = []
    s = opts["s"]
    for n, noncompact in ((2, False), (3, True)):
        rep = cf.verify_boundary_conditions(s, n, noncompact, n_max=opts["nmax"])
        out.append({
            "check": f"C2 spectrum law {'noncompact' if noncompact else 'compact'} n={n}",
            "ok": rep.max_deviation <= 1e-10 and rep.shift_deviation <= 1e-10,
            "a": str(rep.a),
            "c1": str(rep.c1),
            "c2": str(rep.c2),
            "max_deviation": rep.max_deviation,
            "shift_deviation": rep.shift_deviation,
        })
    cfg = fr.RepConfig.matched(s)
    label = opts["label"] or (1, 0)
    space = cf.ProductSpace.compact(label, opts["nmax"])
    for grade in range(0, min(3, opts["nmax"]) + 1):
        red = cf.verify_C4_reduction(space, cfg, grade, opts["coefficients"], "invariant" if opts["coefficients"] == "derived" else "printed")
        out.append({
            "check": f"C4 reduction label {','.join(map(str, label))} l={grade} ({opts['coefficients']})",
            "ok": red.ok(opts["reduction_tol"]),
            "residual": red.residual,
            "c4": list(red.c4_values),
        })
    pde = [cf.oscillator_pde_check(k) for k in ((0,), (1, 1, 0), (3, 2))] + [cf.oscillator_pde_check(k, True) for k in ((1, 1, 0, 0), (2, 0, 1, 3))]
    worst = max(max(p.coefficient_residual, p.grid_residual) for p in pde)
    out.append({"check": "oscillator equations on Hermite products", "ok": worst <= opts["reduction_tol"], "max_residual": worst})
    deg = fr.degeneracy_residual(fr.TruncatedFock(2, opts["nmax"]), cfg, 2)
    out.append({"check": "u(n) Casimir degeneracy D2 = D1 (D1 + lam (n-1))", "ok": deg <= opts["tol"], "residual": deg})
    return out


SUITE_RUNNERS: dict[str, Callable[[Any, dict], list[dict]]] = {
    "jacobi": _suite_jacobi,
    "central": _suite_central,
    "w-relations": _suite_w,
    "fock-brackets": _suite_fock,
    "gt-brackets": _suite_gt,
    "reductions": _suite_reductions,
}


# -- commands -------------------------------------------------------------------------------

_common = [
    click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None, help="Flat key = value file; flags take precedence."),
    click.option("--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True),
    click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout."),
]


def common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Quaplectic algebra, representation and Casimir toolkit."""


@main.command()
@click.option("--suite", type=click.Choice(SUITES), default="jacobi", show_default=True)
@click.option("--preset", default="C(1,3)", show_default=True)
@click.option("--order", type=int, default=None, help="Casimir order for the central suite.")
@click.option("--s", "s", default="2", show_default=True)
@click.option("--kappa", default=None, help="Central eigenvalue; defaults to s/(s-1).")
@click.option("--nmax", type=int, default=8, show_default=True)
@click.option("--label", default=None, help="Comma-separated GT label, e.g. 1,0.")
@click.option("--coefficients", type=click.Choice(["derived", "printed"]), default="derived", show_default=True)
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--reduction-tol", type=float, default=1e-9, show_default=True)
@common
@click.pass_context
def verify(ctx: click.Context, **params: Any) -> None:
    """Run one verification suite and exit 0 iff every check passes."""
    params = _apply_config(ctx, params)
    opts = dict(params)
    opts["s"] = _fraction(params["s"], "s")
    opts["kappa"] = _fraction(params["kappa"], "kappa")
    opts["label"] = _label(params["label"])
    if opts["nmax"] < 0:
        raise click.UsageError("--nmax must be non-negative")
    if opts["s"] in (0, 1):
        raise click.UsageError("--s must differ from 0 and 1")
    needs_algebra = params["suite"] in ("jacobi", "central", "w-relations", "fock-brackets")
    alg = _load(params["preset"]) if needs_algebra else None
    results = SUITE_RUNNERS[params["suite"]](alg, opts)
    config = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in params.items() if k not in ("fmt", "output")}
    report = _envelope(f"verify {params['suite']}", config, params["tol"], params["reduction_tol"], results)
    _write(_report_text(report, params["fmt"]), params["output"])
    sys.exit(0 if report["ok"] else 1)


@main.command()
@click.option("--preset", default="C(2)", show_default=True)
@click.option("--s", "s", default="2", show_default=True)
@click.option("--kappa", default=None, help="Central eigenvalue; defaults to s/(s-1).")
@click.option("--nmax", type=int, default=8, show_default=True)
@click.option("--label", default=None, help="GT label (compact) such as 1,0; omitted means scalar.")
@click.option("--ladder-grade", type=int, default=None, help="Noncompact only: internal u(1,n) ladder module of this grade.")
@click.option("--with-c4", is_flag=True, default=False)
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--reduction-tol", type=float, default=1e-9, show_default=True)
@common
@click.pass_context
def spectrum(ctx: click.Context, **params: Any) -> None:
    """Per-block C2 (and optionally C4) spectra of the field operators."""
    params = _apply_config(ctx, params)
    family, n = _family(params["preset"])
    noncompact = family != "C(n)"
    s = _fraction(params["s"], "s")
    cfg = _rep_config(s, _fraction(params["kappa"], "kappa"))
    label = _label(params["label"])
    if params["nmax"] < 0:
        raise click.UsageError("--nmax must be non-negative")
    if noncompact:
        if label is not None and any(label):
            raise click.UsageError("noncompact presets take --ladder-grade instead of --label")
        fock = fr.TruncatedFock(n, params["nmax"], True)
        internal = gt.LadderSpace(n, params["ladder_grade"], 3) if params["ladder_grade"] is not None else None
        space = cf.ProductSpace(fock, internal)
    else:
        label = label or (0,) * n
        if len(label) != n:
            raise click.UsageError(f"label {label} does not have {n} entries")
        space = cf.ProductSpace.compact(label, params["nmax"])
    orders = (2, 4) if params["with_c4"] else (2,)
    config = cf.spectrum_config(space, cfg, label)
    reports = {}
    for order in orders:
        depth = min(order, params["nmax"]) if noncompact else 0
        reports[f"C{order}"] = cf.spectrum(cf.build_C(order, space, cfg), depth=depth, config=config)
    ok = all(b.residual <= params["tol"] * 1e3 for r in reports.values() for b in r.blocks)
    fmt = params["fmt"]
    if fmt == "json":
        payload = {
            "schema": SCHEMA_VERSION,
            "command": "spectrum",
            "config": config,
            "tolerances": {"bracket": params["tol"], "reduction": params["reduction_tol"]},
            "ok": ok,
            "results": [{"check": f"{k} block residuals", "ok": all(b.residual <= params["tol"] * 1e3 for b in r.blocks)} for k, r in reports.items()],
            "spectra": {k: r.as_dict() for k, r in reports.items()},
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "md":
        text = "".join(f"## {k}\n\n{r.to_markdown()}\n" for k, r in reports.items())
    else:
        text = "".join(f"# {k}\n{r.to_csv()}" for k, r in reports.items())
    _write(text, params["output"])
    sys.exit(0 if ok else 1)


def _family(preset: str) -> tuple[str, int]:
    try:
        family, n = lc.parse_preset(preset)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    if family not in ("C(n)", "C(1,n)-complex", "C(1,n)-real-n", "C(1,n)-real-4"):
        raise click.UsageError("spectra need a quaplectic preset C(n) or C(1,n)")
    return family, n


@main.command()
@click.option("--preset", default=None)
@click.option("--gt", "gt_mode", is_flag=True, default=False, help="Dump GT matrices instead of a structure-constant table.")
@click.option("--label", default=None)
@common
@click.pass_context
def dump(ctx: click.Context, **params: Any) -> None:
    """Structure constants or GT matrices in a byte-stable text form."""
    params = _apply_config(ctx, params)
    fmt = params["fmt"]
    if params["gt_mode"]:
        label = _label(params["label"])
        if label is None:
            raise click.UsageError("--gt needs --label")
        text = _dump_gt(label, fmt)
    else:
        if not params["preset"]:
            raise click.UsageError("dump needs --preset or --gt")
        text = _dump_table(_load(params["preset"]), fmt)
    _write(text, params["output"])


def _dump_table(alg: lc.Algebra, fmt: str) -> str:
    data = alg.constants.to_json_dict()
    if fmt == "json":
        return json.dumps({"schema": SCHEMA_VERSION, "name": alg.constants.name, **data}, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "b", "coeff", "target"])
        w.writerows([e["a"], e["b"], e["coeff"], e["target"]] for e in data["entries"])
        return buf.getvalue()
    lines = [f"# {alg.constants.name}", "", "| [a, b] | coeff | target |", "|---|---|---|"]
    lines += [f"| [{e['a']}, {e['b']}] | {e['coeff']} | {e['target']} |" for e in data["entries"]]
    return "\n".join(lines) + "\n"


def _dump_gt(label: tuple[int, ...], fmt: str) -> str:
    space = gt.GTSpace(label)
    n = space.n
    pairs = [(k, k + 1) for k in range(1, n)] + [(k + 1, k) for k in range(1, n)]
    matrices = {}
    for a, b in pairs:
        entries = space.exact_entries(a, b)
        matrices[f"Z{a}{b}"] = [[r, c, str(sq)] for (r, c), sq in sorted(entries.items())]
    weights = [[space.weight(p, k) for k in range(1, n + 1)] for p in space.patterns]
    if fmt == "json":
        return json.dumps(
            {
                "schema": SCHEMA_VERSION,
                "label": list(label),
                "dim": space.dim,
                "patterns": space.as_rows(),
                "weights": weights,
                "entry_format": "row, col, signed square of the matrix element",
                "matrices": matrices,
            },
            indent=2,
            sort_keys=True,
        ) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["generator", "row", "col", "signed_square"])
        for name, rows in matrices.items():
            w.writerows([name, *row] for row in rows)
        return buf.getvalue()
    out = [f"# GT matrices for label ({','.join(map(str, label))})", ""]
    for name, rows in matrices.items():
        dense = space.sigma_Z(int(name[1]), int(name[2]))
        out += [f"## {name}", ""]
        out += ["    " + " ".join(f"{x: .6f}" for x in r) for r in dense]
        out.append("")
    return "\n".join(out)


if __name__ == "__main__":
    main()
