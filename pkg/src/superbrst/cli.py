"""Configuration-driven front end.

A run is described by a JSON file (strict schema: unknown keys are errors)
naming an algebra preset or inline structure constants, a coefficient
module, a mixing set, a grading scheme and a degree range.  Subcommands
execute one task each:

    superbrst validate <config>
    superbrst cohomology <config>
    superbrst ce-compare <config>
    superbrst kac-witness <config>
    superbrst completion-demo <config> --order N

Output is an aligned table (default) or line-delimited JSON records
(``--format records``); ``--out`` redirects it to a file.  Exit codes:
0 success, 1 configuration error, 2 internal consistency failure.

The environment variable SUPERBRST_THREADS caps the number of worker
threads used to build independent blocks; output order is canonical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .brst import (
    GradingError,
    GradingScheme,
    build_complex,
    equivariance_check,
    iota_compare,
)
from . import catalog
from .homology import ConsistencyError, SparseRationalMatrix
from .supercore import (
    BasisIndex,
    LieSuperalgebra,
    Representation,
    adjoint_module,
    validate_representation,
    validate_superjacobi,
)
from .weylrep import MixingSet


class ConfigError(ValueError):
    """A problem with the run configuration (exit code 1)."""


_TASKS = ("validate", "cohomology", "ce-compare", "kac-witness", "completion-demo")


def _check_keys(obj, allowed, where):
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}")


def parse_config(path):
    """Load and validate a run configuration; returns a plain dict."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config parse error at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be an object")
    _check_keys(
        cfg,
        {"algebra", "module", "mixing", "grading", "degrees", "tasks"},
        "config",
    )
    if "algebra" not in cfg:
        raise ConfigError("config needs an 'algebra' entry")
    alg = cfg["algebra"]
    if "preset" in alg:
        _check_keys(alg, {"preset", "m", "n", "parabolic", "m1"}, "algebra")
        if alg.get("preset") != "gl":
            raise ConfigError(f"unknown algebra preset {alg.get('preset')!r}")
        m, n = alg.get("m"), alg.get("n")
        if not (isinstance(m, int) and isinstance(n, int)):
            raise ConfigError("algebra preset needs integer 'm' and 'n'")
        if alg.get("parabolic") not in (None, "A", "B"):
            raise ConfigError("parabolic must be 'A' or 'B'")
    elif "inline" in alg:
        _check_keys(alg, {"inline"}, "algebra")
        _check_keys(alg["inline"], {"basis", "brackets"}, "algebra.inline")
    else:
        raise ConfigError("algebra needs 'preset' or 'inline'")
    module = cfg.get("module", "trivial")
    if isinstance(module, dict):
        _check_keys(module, {"kac", "inline"}, "module")
        if "kac" in module:
            _check_keys(module["kac"], {"lowest_dim"}, "module.kac")
        if "inline" in module:
            _check_keys(
                module["inline"],
                {"carrier", "action", "weights"},
                "module.inline",
            )
    elif module not in ("natural", "trivial", "adjoint"):
        raise ConfigError(f"unknown module {module!r}")
    mixing = cfg.get("mixing", "none")
    if not (mixing in ("none", "all") or isinstance(mixing, list)):
        raise ConfigError("mixing must be 'none', 'all' or a label list")
    grading = cfg.get("grading", {"mode": "window", "bound": 6})
    _check_keys(grading, {"mode", "bound", "torus"}, "grading")
    if grading.get("mode") not in ("weight", "window"):
        raise ConfigError("grading mode must be 'weight' or 'window'")
    if grading.get("torus") not in (None, "diagonal"):
        raise ConfigError("only the 'diagonal' torus is available")
    degrees = cfg.get("degrees", [-6, 6])
    if (
        not isinstance(degrees, list)
        or len(degrees) != 2
        or not all(isinstance(x, int) for x in degrees)
        or degrees[0] > degrees[1]
    ):
        raise ConfigError("degrees must be [p_min, p_max] with p_min <= p_max")
    tasks = cfg.get("tasks", [])
    if not isinstance(tasks, list) or any(t not in _TASKS for t in tasks):
        raise ConfigError(f"tasks must be a sublist of {_TASKS}")
    return cfg


def _parse_fraction(x, where):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad rational {x!r} in {where}") from exc
    raise ConfigError(f"bad rational {x!r} in {where}")


def _inline_algebra(spec):
    basis_spec = spec.get("basis")
    if not isinstance(basis_spec, list) or not basis_spec:
        raise ConfigError("inline algebra needs a nonempty 'basis' list")
    basis = []
    labels = {}
    for k, ent in enumerate(basis_spec):
        _check_keys(ent, {"label", "parity"}, "algebra.inline.basis")
        lab = ent.get("label")
        par = ent.get("parity")
        if not isinstance(lab, str) or par not in (0, 1):
            raise ConfigError("basis entries need 'label' and parity 0/1")
        basis.append(BasisIndex(k, par, lab))
        labels[lab] = k
    structure = {}
    for key, coeffs in (spec.get("brackets") or {}).items():
        parts = key.split(",")
        if len(parts) != 2 or parts[0] not in labels or parts[1] not in labels:
            raise ConfigError(f"bad bracket key {key!r}")
        vec = {}
        for lab, c in coeffs.items():
            if lab not in labels:
                raise ConfigError(f"unknown label {lab!r} in bracket {key!r}")
            vec[labels[lab]] = _parse_fraction(c, f"bracket {key}")
        structure[(labels[parts[0]], labels[parts[1]])] = vec
    return LieSuperalgebra(tuple(basis), structure)


class RunContext:
    """Everything a task needs, resolved from a validated config."""

    def __init__(self, cfg):
        self.cfg = cfg
        alg_cfg = cfg["algebra"]
        self.spec = None
        self.nil = None
        if "preset" in alg_cfg:
            self.spec = catalog.GLmnSpec(alg_cfg["m"], alg_cfg["n"])
            variant = alg_cfg.get("parabolic")
            if variant:
                self.nil = catalog.build_nilradical(
                    self.spec, variant, alg_cfg.get("m1")
                )
                self.algebra = self.nil.algebra
            else:
                self.algebra = catalog.build_glmn(self.spec.m, self.spec.n)
        else:
            self.algebra = _inline_algebra(alg_cfg["inline"])
        self.module = self._build_module(cfg.get("module", "trivial"))
        self.mixing = self._build_mixing(cfg.get("mixing", "none"))
        self.scheme = self._build_scheme(
            cfg.get("grading", {"mode": "window", "bound": 6})
        )
        self.p_lo, self.p_hi = cfg.get("degrees", [-6, 6])

    def _build_module(self, mod):
        alg = self.algebra
        if mod == "trivial":
            if self.spec is not None:
                return catalog.trivial_module_glmn(self.spec, alg)
            from .supercore import trivial_module

            return trivial_module(alg)
        if mod == "natural":
            if self.spec is None:
                raise ConfigError("'natural' needs the gl preset")
            emb = self.nil.embedding if self.nil else None
            return catalog.natural_module(
                self.spec, alg if self.nil else None, emb
            )
        if mod == "adjoint":
            if self.nil is not None:
                raise ConfigError("'adjoint' coefficients need the full algebra")
            if self.spec is not None:
                return catalog.adjoint_module_glmn(self.spec, alg)
            return adjoint_module(alg)
        if "kac" in mod:
            if self.nil is None or self.nil.variant != "A":
                raise ConfigError("'kac' needs the gl preset with parabolic A")
            dim = mod["kac"].get("lowest_dim", 1)
            if not isinstance(dim, int) or dim < 1:
                raise ConfigError("kac lowest_dim must be a positive integer")
            return catalog.kac_module(self.nil, dim)
        inline = mod["inline"]
        carrier_spec = inline.get("carrier")
        if not isinstance(carrier_spec, list) or not carrier_spec:
            raise ConfigError("inline module needs a 'carrier' list")
        carrier = []
        for k, ent in enumerate(carrier_spec):
            _check_keys(ent, {"label", "parity"}, "module.inline.carrier")
            carrier.append(BasisIndex(k, ent.get("parity", 0), ent["label"]))
        dim = len(carrier)
        labels = {alg.label(a): a for a in range(alg.dim)}
        action = {}
        for lab, rows in (inline.get("action") or {}).items():
            if lab not in labels:
                raise ConfigError(f"unknown generator {lab!r} in module action")
            ent = {}
            for key, c in rows.items():
                ij = key.split(",")
                if len(ij) != 2:
                    raise ConfigError(f"bad matrix entry key {key!r}")
                i, j = int(ij[0]), int(ij[1])
                ent[(i, j)] = _parse_fraction(c, f"action of {lab}")
            action[labels[lab]] = SparseRationalMatrix(dim, dim, ent)
        weights = inline.get("weights")
        if weights is not None:
            weights = tuple(tuple(w) for w in weights)
        return Representation(alg, tuple(carrier), action, weights)

    def _build_mixing(self, mix):
        alg = self.algebra
        if mix == "none":
            return MixingSet.none(alg)
        if mix == "all":
            return MixingSet.all(alg)
        labels = {}
        for a in range(alg.dim):
            lab = alg.label(a)
            labels[lab] = a
            if lab.startswith("E_"):
                labels["x_" + lab[2:]] = a
        ids = []
        for lab in mix:
            if lab not in labels:
                raise ConfigError(f"mixing refers to unknown label {lab!r}")
            ids.append(labels[lab])
        return MixingSet.of(alg, ids)

    def _build_scheme(self, grading):
        mode = grading.get("mode")
        bound = grading.get("bound", 6)
        if not isinstance(bound, int) or bound < 0:
            raise ConfigError("grading bound must be a nonnegative integer")
        if mode == "window":
            return GradingScheme("window", bound=bound)
        if grading.get("torus", "diagonal") != "diagonal":
            raise ConfigError("only the diagonal torus is available")
        if self.spec is None:
            raise ConfigError("weight mode needs the gl preset (diagonal torus)")
        if self.nil is not None:
            wmap = self.nil.x_weight_map()
        else:
            wmap = {
                a: tuple(-x for x in w)
                for a, w in enumerate(catalog.glmn_weights(self.spec))
            }
        return GradingScheme("weight", weight_map=wmap, bound=bound)


def _fmt_dim_h(v):
    if v is None:
        return None
    if isinstance(v, tuple):
        return [v[0], v[1]]
    return v


def _records_for_rows(rows):
    out = []
    for r in rows:
        out.append(
            {
                "record": "betti",
                "block_id": list(r.block_id)
                if isinstance(r.block_id, tuple)
                else r.block_id,
                "p": r.degree,
                "dimC": r.dim_c,
                "rank": r.rank_out,
                "dimH": _fmt_dim_h(r.dim_h),
                "stable": r.stable,
            }
        )
    return out


def task_validate(ctx):
    ok_alg, viol_alg = validate_superjacobi(ctx.algebra)
    ok_mod, viol_mod = validate_representation(ctx.module)
    checks = [
        {"record": "check", "name": "super-jacobi", "ok": ok_alg,
         "detail": f"{len(viol_alg)} violations"},
        {"record": "check", "name": "representation", "ok": ok_mod,
         "detail": f"{len(viol_mod)} violations"},
    ]
    return checks, ok_alg and ok_mod


def task_cohomology(ctx):
    res = build_complex(
        ctx.mixing,
        ctx.module,
        ctx.scheme,
        ctx.p_lo,
        ctx.p_hi,
        descriptor={"mode": ctx.scheme.mode},
    )
    return _records_for_rows(res.report.sorted_rows()), True


def task_ce_compare(ctx):
    if ctx.mixing.members:
        raise ConfigError("ce-compare requires mixing 'none'")
    records = []
    ok_all = True
    hi = min(ctx.p_hi, 3) if ctx.p_hi >= 0 else 3
    for p in range(max(0, ctx.p_lo), hi + 1):
        ok, rep = iota_compare(ctx.module, p)
        ok_all = ok_all and ok
        records.append(
            {
                "record": "check",
                "name": f"iota intertwines p={p}",
                "ok": ok,
                "detail": "; ".join(
                    f"{k}: {v['mismatches']} mismatches" for k, v in rep.items()
                ),
            }
        )
    return records, ok_all


def task_kac_witness(ctx):
    if ctx.nil is None or ctx.nil.variant != "A":
        raise ConfigError("kac-witness needs the gl preset with parabolic A")
    bound = ctx.scheme.bound
    records = []
    ok_all = True
    for dual in (False, True):
        w = catalog.gl11_witness(ctx.nil, bound=bound, dual=dual)
        rel = "h1 + h2" if dual else "h1 - h2"
        records.append(
            {
                "record": "check",
                "name": f"[e,f] = {rel}" + (" (dual)" if dual else ""),
                "ok": w.relation_ok,
                "detail": f"window bound {bound}",
            }
        )
        records.append(
            {
                "record": "check",
                "name": "delta = "
                + ("+" if w.delta_sign > 0 else "-")
                + "e (x) id"
                + (" (dual)" if dual else ""),
                "ok": w.delta_ok,
                "detail": "",
            }
        )
        ok_all = ok_all and w.relation_ok and w.delta_ok
    return records, ok_all


def task_completion_demo(ctx, order):
    if ctx.spec is None or (ctx.spec.m, ctx.spec.n) != (1, 2):
        raise ConfigError("completion-demo is defined for the gl(1|2) preset")
    rows = catalog.gl12_completion_demo(order)
    records = []
    for r in rows:
        records.append(
            {
                "record": "completion",
                "p": r["degree"],
                "kernel_odd": r["kernel_odd_component"],
                "pde_kernel": r["pde_kernel"],
                "family": r["family_dim"],
                "image": r["image_dim"],
                "reachable": r["reachable_dim"],
                "ok": True,
            }
        )
    return records, True


def _table(records):
    if not records:
        return "(no records)\n"
    kinds = {r["record"] for r in records}
    lines = []
    if "betti" in kinds:
        header = ("block", "p", "dimC", "rank", "dimH", "stable")
        rows = [
            (
                str(r["block_id"]),
                str(r["p"]),
                str(r["dimC"]),
                str(r["rank"]),
                "?" if r["dimH"] is None else str(r["dimH"]),
                "yes" if r["stable"] else "no",
            )
            for r in records
            if r["record"] == "betti"
        ]
        lines += _aligned(header, rows)
    if "completion" in kinds:
        header = ("p", "kernel", "pde", "family", "image", "reachable")
        rows = [
            tuple(
                str(r[k])
                for k in ("p", "kernel_odd", "pde_kernel", "family", "image", "reachable")
            )
            for r in records
            if r["record"] == "completion"
        ]
        lines += _aligned(header, rows)
    if "check" in kinds:
        header = ("check", "result", "detail")
        rows = [
            (r["name"], "ok" if r["ok"] else "FAIL", r.get("detail", ""))
            for r in records
            if r["record"] == "check"
        ]
        lines += _aligned(header, rows)
    return "\n".join(lines) + "\n"


def _aligned(header, rows):
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    out = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    for row in rows:
        out.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return out


def run_task(task, cfg, order=None):
    """Execute one task; returns (RunRecord dict, exit code)."""
    started = time.monotonic()
    ctx = RunContext(cfg)
    if task == "validate":
        records, ok = task_validate(ctx)
    elif task == "cohomology":
        records, ok = task_cohomology(ctx)
    elif task == "ce-compare":
        records, ok = task_ce_compare(ctx)
    elif task == "kac-witness":
        records, ok = task_kac_witness(ctx)
    elif task == "completion-demo":
        records, ok = task_completion_demo(ctx, order if order else 4)
    else:
        raise ConfigError(f"unknown task {task!r}")
    record = {
        "config": cfg,
        "task": task,
        "results": records,
        "ok": ok,
        "version": __version__,
        "wall_clock_s": round(time.monotonic() - started, 6),
    }
    return record, 0 if ok else 2


def threads_from_env():
    raw = os.environ.get("SUPERBRST_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="superbrst",
        description="exact mixed-cochain cohomology of Lie superalgebras",
    )
    sub = parser.add_subparsers(dest="task", required=True)
    for task in _TASKS:
        sp = sub.add_parser(task)
        sp.add_argument("config")
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("table", "records"), default="table")
        if task == "completion-demo":
            sp.add_argument("--order", type=int, default=4)
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config)
        record, code = run_task(
            args.task, cfg, order=getattr(args, "order", None)
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except GradingError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 2
    if args.format == "records":
        lines = [
            json.dumps(
                {"record": "meta", "task": record["task"],
                 "config": record["config"], "version": record["version"]},
                sort_keys=True,
            )
        ]
        lines += [json.dumps(r, sort_keys=True) for r in record["results"]]
        lines.append(
            json.dumps(
                {"record": "summary", "ok": record["ok"],
                 "wall_clock_s": record["wall_clock_s"]},
                sort_keys=True,
            )
        )
        text = "\n".join(lines) + "\n"
    else:
        text = _table(record["results"])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
