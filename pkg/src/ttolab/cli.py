"""Command-line entry point.

Every run validates its effective configuration (flags overridden by an
optional JSON config file; unknown keys rejected), executes one
experiment, and writes deterministic JSON or CSV: floats are formatted
%.12e in CSV, rows are emitted in a fixed order, and each output embeds
the config hash and library version.

Exit codes: 0 success, 2 validation error, 3 numerical non-convergence,
4 domain errors (missing angular derivative, degenerate recovery point,
and similar).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__
from .circle import FourierPolynomial
from .errors import (AtomAtPoint, BoundaryPointNotNormalizable, DegenerateMu,
                     DegenerateSchmidtPair, DivisibilityViolated,
                     InconsistentOracle, NoAngularDerivative, NoConvergence,
                     SymbolsDiffer, UndefinedBoundaryValue,
                     UnsupportedVariant)
from .inner import BoundaryPoint, cohn_sum, from_json
from .modelspace import ModelSpace
from .operators import (BoundarySymbol, MeasureSymbol, TTOperator, build,
                        measure_operator, operator_norm)
from .recovery import KernelActionOracle, rank_one_symbol, recover
from .boundedsym import (assemble_bounded_symbol, blaschke_transport,
                         fejer_split, minimal_analytic_extension)
from .counterex import (cls_ratio_scan, counterex_theorem_check,
                        gen_blaschke_counterexample,
                        gen_singular_counterexample, rkt_failure_scan)

DOMAIN_ERRORS = (AtomAtPoint, BoundaryPointNotNormalizable, DegenerateMu,
                 DegenerateSchmidtPair, DivisibilityViolated,
                 InconsistentOracle, NoAngularDerivative, SymbolsDiffer,
                 UndefinedBoundaryValue, UnsupportedVariant)

GLOBAL_KEYS = {"tol", "budget"}

ALLOWED_KEYS = {
    "kernels": {"inner", "lambda", "normalized", "grid"},
    "build": {"inner", "symbol", "grid"},
    "recover": {"inner", "table", "mu", "grid"},
    "rank-one": {"inner", "lambda", "zeta", "grid"},
    "fejer-split": {"N", "symbol"},
    "cf-extend": {"coeffs"},
    "assemble": {"matrix", "batch", "grid"},
    "transport": {"matrix", "alpha"},
    "cohn-growth": {"inner", "zeta", "p", "terms"},
    "cls-scan": {"inner", "radii", "angles", "tol"},
    "rkt-scan": {"inner", "s", "lambda", "grid"},
    "counterex": {"kind", "p", "count", "degrees"},
    "carleson": {"inner", "atoms", "density", "grid"},
}


class ValidationError(Exception):
    pass


# ---------------------------------------------------------------------------
# small codecs

def _cplx(text) -> complex:
    """Parse 're' or 're,im' into a complex number."""
    if isinstance(text, (int, float)):
        return complex(text)
    if isinstance(text, (list, tuple)):
        return complex(text[0], text[1])
    parts = str(text).split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValidationError(f"cannot parse complex number from {text!r}")


def _c2pair(z: complex):
    return [float(np.real(z)), float(np.imag(z))]


def _vec2pairs(v):
    return [_c2pair(z) for z in np.asarray(v, dtype=complex)]


def _mat2pairs(M):
    return [_vec2pairs(row) for row in np.asarray(M, dtype=complex)]


def _pairs2vec(rows):
    return np.array([complex(a, b) for a, b in rows], dtype=complex)


def _pairs2mat(rows):
    return np.array([[complex(a, b) for a, b in row] for row in rows],
                    dtype=complex)


def _load_json_arg(text):
    """Accept inline JSON (starts with '[', '{' or a digit) or a file path."""
    s = str(text).strip()
    if s and (s[0] in "[{" or s[0].isdigit() or s[0] in "+-."):
        return json.loads(s)
    with open(s, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _fourier_from_json(obj) -> FourierPolynomial:
    coeffs = {}
    for k, v in obj.items():
        coeffs[int(k)] = complex(v[0], v[1]) if isinstance(v, (list, tuple)) \
            else complex(v)
    return FourierPolynomial(coeffs)


def _fourier_to_json(poly: FourierPolynomial):
    return {str(k): _c2pair(complex(v)) for k, v in sorted(poly.coeffs.items())}


def _fmt(x: float) -> str:
    return "%.12e" % float(x)


# ---------------------------------------------------------------------------
# command implementations (each returns payload dict and optional csv rows)

def _cmd_kernels(cfg):
    space = ModelSpace(from_json(cfg["inner"]), n=cfg.get("grid"))
    lam = _cplx(cfg["lambda"])
    k = space.normalized_kernel(lam) if cfg.get("normalized") else space.kernel(lam)
    if k.coeffs is not None:
        return {"mode": "exact", "coefficients": _vec2pairs(k.coeffs)}
    return {"mode": "truncated", "samples": _vec2pairs(k.samples())}


def _cmd_build(cfg):
    space = ModelSpace(from_json(cfg["inner"]), n=cfg.get("grid"))
    poly = _fourier_from_json(_load_json_arg(cfg["symbol"]))
    op = build(space, BoundarySymbol(poly.to_circle(space.grid)))
    if op.matrix is None:
        raise ValidationError("build emits matrices only in exact mode")
    return {"dimension": space.dim, "matrix": _mat2pairs(op.matrix),
            "operator_norm": float(operator_norm(op))}


def _cmd_recover(cfg):
    space = ModelSpace(from_json(cfg["inner"]), n=cfg.get("grid"))
    rows = _load_json_arg(cfg["table"])
    table = [(_cplx(r["lambda"]), _pairs2vec(r["coefficients"])) for r in rows]
    oracle = KernelActionOracle.from_table(space, table)
    mu = _cplx(cfg["mu"]) if "mu" in cfg and cfg["mu"] is not None else None
    rec = recover(oracle, mu=mu)
    return {"mu": _c2pair(rec.mu),
            "phi_plus": _vec2pairs(rec.phi_plus.coeffs),
            "phi_minus": _vec2pairs(rec.phi_minus.coeffs),
            "residual": rec.residual,
            "rho_ratio": rec.rho_ratio}


def _cmd_rank_one(cfg):
    space = ModelSpace(from_json(cfg["inner"]), n=cfg.get("grid"))
    pt = BoundaryPoint(float(cfg["zeta"])) if "zeta" in cfg and cfg["zeta"] is not None \
        else _cplx(cfg["lambda"])
    sym = rank_one_symbol(space, pt)
    op = build(space, sym)
    from .operators import rank_one_operator
    direct = rank_one_operator(space, pt)
    resid = float(np.max(np.abs(op.matrix - direct.matrix)))
    return {"dimension": space.dim,
            "symbol_sup": float(np.max(np.abs(sym.f.samples))),
            "max_matrix_residual": resid,
            "matrix": _mat2pairs(direct.matrix)}


def _cmd_fejer_split(cfg):
    poly = _fourier_from_json(_load_json_arg(cfg["symbol"]))
    p1, p2, p3 = fejer_split(poly, int(cfg["N"]))
    return {"N": int(cfg["N"]),
            "phi1": _fourier_to_json(p1),
            "phi2": _fourier_to_json(p2),
            "phi3": _fourier_to_json(p3)}


def _cmd_cf_extend(cfg):
    data = _load_json_arg(cfg["coeffs"])
    coeffs = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
              for v in data]
    ext = minimal_analytic_extension(coeffs)
    return {"norm": ext.norm,
            "taylor": _vec2pairs(ext.taylor[:max(len(coeffs), 8)]),
            "taylor_defect": ext.taylor_defect,
            "modulus_defect": (None if np.isnan(ext.modulus_defect)
                               else ext.modulus_defect),
            "suboptimal": ext.suboptimal}


def _one_assembly(M):
    from .inner import Monomial
    space = ModelSpace(Monomial(M.shape[0]))
    return assemble_bounded_symbol(TTOperator(space, matrix=M))


def _cmd_assemble(cfg):
    if cfg.get("batch"):
        mats = [_pairs2mat(m) for m in _load_json_arg(cfg["batch"])]
        rows = [("index", "N", "sup_norm", "rho_hat", "measured_constant",
                 "build_residual", "suboptimal")]
        payload_rows = []
        for i, M in enumerate(mats):
            res = _one_assembly(M)
            rows.append((str(i), str(M.shape[0]), _fmt(res.sup_norm),
                         _fmt(res.rho_hat), _fmt(res.measured_constant),
                         _fmt(res.build_residual), str(int(res.suboptimal))))
            payload_rows.append({"index": i, "sup_norm": res.sup_norm,
                                 "rho_hat": res.rho_hat,
                                 "measured_constant": res.measured_constant,
                                 "build_residual": res.build_residual,
                                 "suboptimal": res.suboptimal})
        return {"batch": payload_rows}, rows
    if "matrix" not in cfg:
        raise ValidationError("assemble needs --matrix or --batch")
    M = _pairs2mat(_load_json_arg(cfg["matrix"]))
    res = _one_assembly(M)
    return {"sup_norm": res.sup_norm,
            "rho_hat": res.rho_hat,
            "measured_constant": res.measured_constant,
            "build_residual": res.build_residual,
            "suboptimal": res.suboptimal,
            "phi1": _fourier_to_json(res.phi1),
            "cf2_norm": res.cf2.norm,
            "cf3_norm": res.cf3.norm}


def _cmd_transport(cfg):
    M = _pairs2mat(_load_json_arg(cfg["matrix"]))
    from .inner import Monomial
    space = ModelSpace(Monomial(M.shape[0]))
    out = blaschke_transport(TTOperator(space, matrix=M), _cplx(cfg["alpha"]))
    return {"matrix": _mat2pairs(out.matrix)}


def _cmd_cohn_growth(cfg):
    theta = from_json(cfg["inner"])
    zeta = float(cfg["zeta"])
    p = float(cfg.get("p", 2.0))
    terms = int(cfg.get("terms", 32))
    rows = []
    for k in range(1, terms + 1):
        rows.append((k, cohn_sum(theta, zeta, p, k)))
    csv_rows = [f"# inner={json.dumps(cfg['inner'], sort_keys=True)} "
                f"zeta={zeta!r} p={p!r} terms={terms}",
                ("k", "partial_sum")] + [(str(k), _fmt(s)) for k, s in rows]
    return {"p": p, "zeta": zeta,
            "partial_sums": [s for _, s in rows]}, csv_rows


def _listify(val, cast=float):
    if val is None:
        return None
    if isinstance(val, str):
        return [cast(x) for x in val.split(",") if x.strip()]
    return [cast(x) for x in val]


def _cmd_cls_scan(cfg):
    theta = from_json(cfg["inner"])
    radii = _listify(cfg.get("radii")) or [0.0, 0.5, 0.75, 0.9]
    angles = int(cfg.get("angles", 8))
    tol = float(cfg.get("tol") or 1e-8)
    max_n = int(cfg.get("budget") or 2 ** 17)
    pts = [r * np.exp(2j * np.pi * j / angles)
           for r in radii for j in range(angles)]
    rep = cls_ratio_scan(theta, pts, tol=tol, max_n=max_n)
    csv_rows = [f"# inner={json.dumps(cfg['inner'], sort_keys=True)} tol={tol!r}",
                ("re_lambda", "im_lambda", "sup_norm", "l2_norm_sq", "ratio")]
    for lam, sup, two, ratio in rep.rows:
        csv_rows.append((_fmt(lam.real), _fmt(lam.imag), _fmt(sup),
                         _fmt(two), _fmt(ratio)))
    return {"max_ratio": rep.max_ratio,
            "rows": [[_c2pair(l), s, t, r] for l, s, t, r in rep.rows]}, csv_rows


def _cmd_rkt_scan(cfg):
    theta = from_json(cfg["inner"])
    s = float(cfg["s"])
    lams = cfg.get("lambda", [0.0])
    if not isinstance(lams, list):
        lams = [lams]
    lams = [_cplx(x) for x in lams]
    rep = rkt_failure_scan(theta, s, lams, grid_n=int(cfg.get("grid", 2 ** 13)))
    csv_rows = [f"# inner={json.dumps(cfg['inner'], sort_keys=True)} "
                f"s={s!r} grid={rep['grid']}",
                ("re_lambda", "im_lambda", "closed_form", "identity_err",
                 "identity_err_doubled", "norm_sq_grid", "norm_sq_err",
                 "isometry_ratio")]
    for r in rep["rows"]:
        csv_rows.append((_fmt(r["lambda"].real), _fmt(r["lambda"].imag),
                         _fmt(r["closed_form"]), _fmt(r["identity_err"]),
                         _fmt(r["identity_err_doubled"]),
                         _fmt(r["norm_sq_grid"]), _fmt(r["norm_sq_err"]),
                         _fmt(r["isometry_ratio"])))
    return {"s": rep["s"], "grid": rep["grid"],
            "sup_bound": rep["sup_bound"], "all_sup_ok": rep["all_sup_ok"],
            "rows": [{"lambda": _c2pair(r["lambda"]),
                      "closed_form": r["closed_form"],
                      "identity_err": r["identity_err"],
                      "identity_err_doubled": r["identity_err_doubled"],
                      "norm_sq_grid": r["norm_sq_grid"],
                      "norm_sq_err": r["norm_sq_err"],
                      "isometry_ratio": r["isometry_ratio"]}
                     for r in rep["rows"]]}, csv_rows


def _cmd_counterex(cfg):
    kind = cfg.get("kind", "blaschke")
    p = float(cfg.get("p", 3.0))
    count = int(cfg.get("count", 20))
    fam = (gen_blaschke_counterexample(p, count) if kind == "blaschke"
           else gen_singular_counterexample(p, count))
    out = {"kind": fam.kind, "p": p, "count": count,
           "theta": fam.theta.to_json(),
           "certificates": {name: {"value": c.value, "threshold": c.threshold,
                                   "passed": c.passed}
                            for name, c in sorted(fam.certificates.items())},
           "all_pass": fam.all_pass()}
    csv_rows = [f"# kind={kind} p={p!r} truncation={count}",
                ("certificate", "value", "threshold", "passed")]
    for name, c in sorted(fam.certificates.items()):
        csv_rows.append((name, _fmt(c.value), _fmt(c.threshold),
                         str(int(c.passed))))
    if cfg.get("degrees"):
        chk = counterex_theorem_check(fam, p,
                                      degrees=tuple(_listify(cfg["degrees"], int)))
        out["theorem_check"] = {k: (list(v) if isinstance(v, (list, tuple)) else v)
                                for k, v in chk.items()}
    return out, csv_rows


def _cmd_carleson(cfg):
    space = ModelSpace(from_json(cfg["inner"]), n=cfg.get("grid"))
    atoms = [(float(a["angle"]), float(a["mass"]))
             for a in cfg.get("atoms", [])]
    density = None
    if cfg.get("density") is not None:
        density = _fourier_from_json(_load_json_arg(cfg["density"])).to_circle(space.grid)
    op = measure_operator(space, MeasureSymbol(atoms=atoms, density=density))
    evals = np.linalg.eigvalsh(op.matrix)
    return {"carleson_constant": float(evals[-1]),
            "min_eigenvalue": float(evals[0]),
            "dimension": space.dim}


COMMANDS = {
    "kernels": _cmd_kernels,
    "build": _cmd_build,
    "recover": _cmd_recover,
    "rank-one": _cmd_rank_one,
    "fejer-split": _cmd_fejer_split,
    "cf-extend": _cmd_cf_extend,
    "assemble": _cmd_assemble,
    "transport": _cmd_transport,
    "cohn-growth": _cmd_cohn_growth,
    "cls-scan": _cmd_cls_scan,
    "rkt-scan": _cmd_rkt_scan,
    "counterex": _cmd_counterex,
    "carleson": _cmd_carleson,
}


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file overriding flags")
    common.add_argument("--output", help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=float, help="numerical tolerance override")
    common.add_argument("--budget", type=int, help="grid/iteration budget override")
    ap = argparse.ArgumentParser(prog="ttolab", parents=[common],
                                 description="truncated Toeplitz operator laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, *specs):
        p = sub.add_parser(name, parents=[common])
        for flag, kw in specs:
            p.add_argument(flag, **kw)
        return p

    add("kernels", ("--inner", {"required": True}), ("--lambda", {"dest": "lam"}),
        ("--normalized", {"action": "store_true"}), ("--grid", {"type": int}))
    add("build", ("--inner", {"required": True}), ("--symbol", {"required": True}),
        ("--grid", {"type": int}))
    add("recover", ("--inner", {"required": True}), ("--table", {"required": True}),
        ("--mu", {}), ("--grid", {"type": int}))
    add("rank-one", ("--inner", {"required": True}), ("--lambda", {"dest": "lam"}),
        ("--zeta", {"type": float}), ("--grid", {"type": int}))
    add("fejer-split", ("--N", {"type": int, "required": True}),
        ("--symbol", {"required": True}))
    add("cf-extend", ("--coeffs", {"required": True}))
    add("assemble", ("--matrix", {}), ("--batch", {}), ("--grid", {"type": int}))
    add("transport", ("--matrix", {"required": True}), ("--alpha", {"required": True}))
    add("cohn-growth", ("--inner", {"required": True}),
        ("--zeta", {"type": float, "required": True}),
        ("--p", {"type": float, "default": 2.0}),
        ("--terms", {"type": int, "default": 32}))
    add("cls-scan", ("--inner", {"required": True}),
        ("--radii", {}), ("--angles", {"type": int, "default": 8}))
    add("rkt-scan", ("--inner", {"required": True}),
        ("--s", {"type": float, "required": True}),
        ("--lambda", {"dest": "lam"}), ("--grid", {"type": int, "default": 2 ** 13}))
    add("counterex", ("gen", {"nargs": "?", "default": "gen"}),
        ("--kind", {"choices": ("blaschke", "singular"), "default": "blaschke"}),
        ("--p", {"type": float, "default": 3.0}),
        ("--count", {"type": int, "default": 20}),
        ("--degrees", {}))
    add("carleson", ("--inner", {"required": True}), ("--atoms", {}),
        ("--density", {}), ("--grid", {"type": int}))
    return ap


def _effective_config(args) -> dict:
    cfg = {}
    mapping = {"lam": "lambda", "N": "N"}
    skip = {"config", "output", "format", "command", "gen"}
    for key, val in vars(args).items():
        if key in skip or val is None:
            continue
        cfg[mapping.get(key, key)] = val
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        cfg.update(file_cfg)
    allowed = ALLOWED_KEYS[args.command] | GLOBAL_KEYS
    unknown = set(cfg) - allowed
    if unknown:
        raise ValidationError(
            f"unknown keys for {args.command}: {sorted(unknown)}")
    # parse JSON-valued string flags
    for key in ("inner", "atoms", "radii", "degrees", "lambda"):
        if key in cfg and isinstance(cfg[key], str) and cfg[key].strip()[:1] in "[{":
            cfg[key] = json.loads(cfg[key])
    return cfg


def _config_hash(command: str, cfg: dict) -> str:
    canon = json.dumps({"command": command, "config": cfg}, sort_keys=True,
                       default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _emit(payload, csv_rows, args, digest: str):
    if args.format == "csv":
        if csv_rows is None:
            raise ValidationError(f"{args.command} has no CSV representation")
        lines = [f"# config_hash={digest} version={__version__}"]
        lines += [row if isinstance(row, str) else ",".join(row)
                  for row in csv_rows]
        text = "\n".join(lines) + "\n"
    else:
        payload = {"config_hash": digest, "version": __version__, **payload}
        text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _effective_config(args)
        digest = _config_hash(args.command, cfg)
        result = COMMANDS[args.command](cfg)
        payload, csv_rows = result if isinstance(result, tuple) else (result, None)
        _emit(payload, csv_rows, args, digest)
        return 0
    except (ValidationError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return 3
    except DOMAIN_ERRORS as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
