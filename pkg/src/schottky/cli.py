"""Command-line entry point: ``schottky <subcommand> [--config FILE] [overrides]``.

Every subcommand writes one JSON document (``"schema": "1"``) holding the
echoed inputs, the results and provenance data. Exact rationals travel as
``"num/den"`` strings and complex numbers as ``[re, im]`` pairs.

Exit codes: 0 success, 2 configuration errors, 3 mathematical precondition
failures, 4 resource guardrails.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from . import __version__
from .algebra import EVALUATED, SYMBOLIC
from .algebra.serialize import qseries_to_json, rational_from_str, rational_to_str, series_to_json
from .moebius import DegenerateError
from .numeric import (
    SchottkyGroupNumeric,
    contour_integral,
    convergence_certificate,
    imaginary_part_eigenvalues,
    limit_set_sample,
    period_matrix,
    points_to_csv,
)
from .siegel import (
    DirectSumLattice,
    FourierExpansion,
    FractionalExponentError,
    HalfIntLattice,
    ResourceBudgetError,
    boundary_restrict,
    lattice_theta,
    schottky_J,
    theta_product,
    theta_product_frac,
)
from .universal import (
    TruncationError,
    UniversalPeriodTable,
    hyperelliptic_periods,
    lowest_term_check,
    minimal_diagonals,
    required_degree,
    substitute_periods,
    universal_periods,
)

SCHEMA = "1"


class ConfigError(ValueError):
    """Malformed configuration (exit status 2)."""


# -- parsing helpers -----------------------------------------------------------------------

def parse_complex(v) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        z = complex(float(v[0]), float(v[1]))
    elif isinstance(v, (int, float)) and not isinstance(v, bool):
        z = complex(v)
    else:
        raise ConfigError(f"complex numbers are [re, im] pairs, got {v!r}")
    if z != z or abs(z) == float("inf"):
        raise ConfigError(f"non-finite value {v!r}")
    return z


def enc_complex(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


def parse_rationals(v) -> List[Fraction]:
    if isinstance(v, str):
        v = [s for s in v.split(",") if s.strip()]
    try:
        return [rational_from_str(s) if isinstance(s, str) else Fraction(int(s)) for s in v]
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ConfigError(f"bad rational list {v!r}: {e}") from None


def load_group(cfg: dict) -> SchottkyGroupNumeric:
    gens = cfg.get("generators")
    if not gens:
        raise ConfigError("numeric subcommands need 'generators': [{t_plus, t_minus, s}, ...]")
    try:
        tp = [parse_complex(g["t_plus"]) for g in gens]
        tm = [parse_complex(g["t_minus"]) for g in gens]
        s = [parse_complex(g["s"]) for g in gens]
    except (KeyError, TypeError) as e:
        raise ConfigError(f"generator entries need t_plus, t_minus, s: {e}") from None
    circles = None
    if cfg.get("circles") is not None:
        try:
            circles = {int(k): (parse_complex(c), float(r)) for k, (c, r) in cfg["circles"].items()}
        except (TypeError, ValueError) as e:
            raise ConfigError(f"circles must map index to [[re, im], radius]: {e}") from None
    return SchottkyGroupNumeric.from_data(tp, tm, s, circles)


def load_json_file(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from None


def load_expansion(path_or_obj) -> FourierExpansion:
    d = load_json_file(path_or_obj) if isinstance(path_or_obj, str) else path_or_obj
    if isinstance(d, dict) and "results" in d and "expansion" in d["results"]:
        d = d["results"]["expansion"]
    try:
        return FourierExpansion.from_json(d)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"not a Fourier expansion: {e}") from None


def generic_points(g: int, count: int, seed: int, hyperelliptic: bool) -> List[List[Fraction]]:
    """Deterministic pseudo-random rational points meeting the unit conditions."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = g if hyperelliptic else 2 * g
        pt = [Fraction(rng.randint(-97, 97), rng.randint(1, 13)) for _ in range(n)]
        vals = pt + [-v for v in pt] if hyperelliptic else pt
        if len(set(vals)) == len(vals) and all(v != 0 for v in vals):
            out.append(pt)
    return out


# -- subcommands ---------------------------------------------------------------------------------

def cmd_periods_numeric(cfg):
    G = load_group(cfg)
    N = int(cfg.get("N", 4))
    pm = period_matrix(G, N)
    res = pm.to_json()
    res["im_Z_eigenvalues"] = [float(v) for v in imaginary_part_eigenvalues(pm.Z)]
    res["symmetry_defect"] = pm.symmetry_defect()
    return res, {"N": N, "certified": pm.certified, "tail_bound": res["metadata"]["tail_bound"]}


def cmd_differentials_check(cfg):
    G = load_group(cfg)
    N, M = int(cfg.get("N", 4)), int(cfg.get("M", 256))
    rows = []
    for i in range(1, G.g + 1):
        for k in range(1, G.g + 1):
            v = contour_integral(G, i, k, N, M)
            rows.append({"omega": i, "circle": k, "integral": enc_complex(v), "expected": 1 if i == k else 0,
                         "error": abs(v - (1 if i == k else 0))})
    worst = max(r["error"] for r in rows)
    return {"integrals": rows, "max_error": worst}, {"N": N, "M": M}


def cmd_convergence_cert(cfg):
    G = load_group(cfg)
    c = convergence_certificate(G)
    circles = G.disk_system()
    res = {
        "certified": c["certified"],
        "sum_L": c["sum_L"],
        "diagnostic": c["diagnostic"],
        "pairs": [{"i": a, "j": b, "K": c["K"][(a, b)], "L": c["L"][(a, b)]} for (a, b) in c["K"]],
        "circles": {str(k): [enc_complex(cr[0]), cr[1]] for k, cr in sorted(circles.items())},
    }
    return res, {"circles": "given" if G.circles is not None else "isometric"}


def cmd_limit_set(cfg):
    G = load_group(cfg)
    depth = int(cfg.get("depth", 4))
    pts = limit_set_sample(G, depth)
    fmt = cfg.get("format", "json")
    res = {"depth": depth, "count": len(pts)}
    if fmt == "csv":
        csv_path = cfg.get("csv_output")
        if csv_path:
            with open(csv_path, "w") as fh:
                fh.write(points_to_csv(pts))
            res["csv"] = csv_path
        else:
            res["csv_text"] = points_to_csv(pts)
    else:
        res["points"] = [enc_complex(p) for p in pts]
    return res, {"dedup_rel_tol": 1e-12}


def _mode(cfg) -> str:
    mode = cfg.get("mode", SYMBOLIC)
    if mode not in (SYMBOLIC, EVALUATED):
        raise ConfigError(f"mode must be {SYMBOLIC!r} or {EVALUATED!r}")
    return mode


def cmd_periods_universal(cfg):
    g, D, mode = int(cfg.get("g", 2)), int(cfg.get("D", 1)), _mode(cfg)
    point = parse_rationals(cfg["point"]) if cfg.get("point") is not None else None
    T = universal_periods(g, D, mode, point)
    return {"table": T.to_json(), "symmetric": T.is_symmetric()}, {"word_length_cutoff": D}


def cmd_periods_hyperelliptic(cfg):
    g, D, mode = int(cfg.get("g", 2)), int(cfg.get("D", 1)), _mode(cfg)
    xs = parse_rationals(cfg["x"]) if cfg.get("x") is not None else None
    T = hyperelliptic_periods(g, D, mode, xs)
    return {"table": T.to_json(), "symmetric": T.is_symmetric()}, {"word_length_cutoff": D}


def _points_for(cfg, g: int, hyper: bool):
    if cfg.get("point_list") is not None:
        return [parse_rationals(p) for p in cfg["point_list"]]
    count = int(cfg.get("points", 3))
    return generic_points(g, count, int(cfg.get("seed", 1)), hyper)


def cmd_schottky_check(cfg):
    if not cfg.get("form"):
        raise ConfigError("schottky-check needs --form")
    F = load_expansion(cfg["form"])
    Dt = int(cfg.get("degree", 1))
    hyper = bool(cfg.get("hyperelliptic", False))
    results = []
    if cfg.get("table"):
        tables = [UniversalPeriodTable.from_json(_unwrap_table(load_json_file(cfg["table"])))]
        labels = [None]
    else:
        pts = _points_for(cfg, F.g, hyper)
        need = required_degree(F, Dt)
        tables = []
        for p in pts:
            if hyper:
                tables.append(hyperelliptic_periods(F.g, need, EVALUATED, p))
            else:
                tables.append(universal_periods(F.g, need, EVALUATED, p))
        labels = [[rational_to_str(v) for v in p] for p in pts]
    for lab, T in zip(labels, tables):
        S = substitute_periods(F, T, Dt)
        results.append({"point": lab, "series": series_to_json(S), "zero": S.is_zero()})
    all_zero = all(r["zero"] for r in results)
    verdict = "zero at all points" if all_zero else "nonzero"
    return {"verdict": verdict, "all_zero": all_zero, "evaluations": results}, {
        "degree": Dt,
        "hyperelliptic": hyper,
        "form_max_trace": F.max_trace,
        "form_min_trace": F.min_trace(),
    }


def _unwrap_table(d):
    if isinstance(d, dict) and "results" in d and "table" in d["results"]:
        return d["results"]["table"]
    return d


def cmd_lowest_term(cfg):
    if not cfg.get("form"):
        raise ConfigError("lowest-term needs --form")
    F = load_expansion(cfg["form"])
    mode = _mode(cfg)
    hyper = bool(cfg.get("hyperelliptic", False))
    diags = [tuple(int(v) for v in parse_rationals(cfg["s"]))] if cfg.get("s") is not None else minimal_diagonals(F)
    pts = _points_for(cfg, F.g, hyper) if mode == EVALUATED else None
    out = []
    for s in diags:
        r = lowest_term_check(F, s, mode, pts, hyper)
        if mode == EVALUATED:
            out.append({"s": list(s), "values": [rational_to_str(v) for v in r["values"]], "is_zero": r["is_zero"]})
        else:
            out.append({"s": list(s), "value": repr(r["value"]), "is_zero": r["is_zero"]})
    return {"checks": out, "all_zero": all(c["is_zero"] for c in out)}, {"mode": mode, "hyperelliptic": hyper}


def cmd_tate_series(cfg):
    from .qforms import tate_a4, tate_a6

    N = int(cfg.get("order", 10))
    a4, a6 = tate_a4(N), tate_a6(N)
    ints = lambda s: [int(s[n]) for n in range(1, N + 1)]  # noqa: E731
    return {"a4": ints(a4), "a6": ints(a6), "a4_series": qseries_to_json(a4), "a6_series": qseries_to_json(a6)}, {"order": N}


def cmd_tate_verify(cfg):
    from .qforms import discriminant_identity_check, tate_equation_check

    N = int(cfg.get("order", 8))
    Nd = int(cfg.get("discriminant_order", max(N, 50)))
    checks = [
        {"name": "discriminant", "n_max": Nd, "pass": discriminant_identity_check(Nd)},
        {"name": "tate_equation", "n_max": N, "pass": tate_equation_check(N)},
    ]
    return {"checks": checks}, {}


def cmd_eisenstein(cfg):
    from .qforms import eisenstein_normalized

    k, N = int(cfg.get("k", 2)), int(cfg.get("order", 10))
    return qseries_to_json(eisenstein_normalized(k, N)), {"k": k, "order": N, "normalization": "E_2k / (2 zeta(2k))"}


def cmd_j_invariant(cfg):
    from .qforms import j_invariant

    N = int(cfg.get("order", 5))
    j = j_invariant(N)
    return {"j": qseries_to_json(j), "j_times_1728": qseries_to_json(j * 1728)}, {"order": N}


def cmd_identities(cfg):
    from .qforms import four_squares_bruteforce, four_squares_check, serre_trichotomy_check, sigma7_identity_check

    N = int(cfg.get("n_max", 200))
    P = int(cfg.get("prime_bound", 500))
    serre = serre_trichotomy_check(P)
    checks = [
        {"name": "sigma7", "n_max": N, "pass": sigma7_identity_check(N)},
        {"name": "four_squares", "n_max": N, "pass": four_squares_check(N)},
        {"name": "four_squares_bruteforce", "n_max": N, "pass": four_squares_check(N, four_squares_bruteforce(N))},
        {"name": "serre_trichotomy", "n_max": P, "pass": serre["pass"]},
    ]
    return {"checks": checks, "serre_primes": serre["primes"]}, {}


def cmd_theta_product(cfg):
    g, mt = int(cfg.get("g", 3)), int(cfg.get("max_trace", 6))
    try:
        F = theta_product(g, mt)
        return {"expansion": F.to_json(), "terms": len(F.terms)}, {"g": g, "max_trace": mt}
    except FractionalExponentError as e:
        fr = theta_product_frac(g, mt)
        return {"fractional_expansion": fr.to_json(), "terms": len(fr.terms), "note": str(e)}, {"g": g, "max_trace": mt}


LATTICES: Dict[str, Callable] = {
    "L8": lambda: HalfIntLattice(8),
    "L16": lambda: HalfIntLattice(16),
    "L8+L8": lambda: DirectSumLattice([HalfIntLattice(8), HalfIntLattice(8)]),
}


def cmd_lattice_theta(cfg):
    name = cfg.get("lattice", "L8")
    if name not in LATTICES:
        raise ConfigError(f"lattice must be one of {sorted(LATTICES)}")
    g, mt = int(cfg.get("g", 1)), int(cfg.get("max_trace", 2))
    F = lattice_theta(LATTICES[name](), g, mt)
    return {"expansion": F.to_json()}, {"lattice": name}


def cmd_schottky_J(cfg):
    mt = int(cfg.get("max_trace", 2))
    J = schottky_J(mt, bool(cfg.get("allow_large", False)))
    return {"expansion": J.to_json(), "nonzero_terms": len(J.terms)}, {"normalization": "4/315"}


def cmd_boundary_restrict(cfg):
    if not cfg.get("form"):
        raise ConfigError("boundary-restrict needs --form")
    F = load_expansion(cfg["form"])
    return {"expansion": boundary_restrict(F).to_json()}, {"from_degree": F.g}


COMMANDS: Dict[str, Callable] = {
    "periods-numeric": cmd_periods_numeric,
    "differentials-check": cmd_differentials_check,
    "convergence-cert": cmd_convergence_cert,
    "limit-set": cmd_limit_set,
    "periods-universal": cmd_periods_universal,
    "periods-hyperelliptic": cmd_periods_hyperelliptic,
    "schottky-check": cmd_schottky_check,
    "lowest-term": cmd_lowest_term,
    "tate-series": cmd_tate_series,
    "tate-verify": cmd_tate_verify,
    "eisenstein": cmd_eisenstein,
    "j-invariant": cmd_j_invariant,
    "identities": cmd_identities,
    "theta-product": cmd_theta_product,
    "lattice-theta": cmd_lattice_theta,
    "schottky-J": cmd_schottky_J,
    "boundary-restrict": cmd_boundary_restrict,
}

# per-subcommand override flags: (flag, config key, type)
_FLAGS = {
    "periods-numeric": [("--N", "N", int)],
    "differentials-check": [("--N", "N", int), ("--M", "M", int)],
    "convergence-cert": [],
    "limit-set": [("--depth", "depth", int), ("--format", "format", str), ("--csv-output", "csv_output", str)],
    "periods-universal": [("--g", "g", int), ("--D", "D", int), ("--mode", "mode", str), ("--point", "point", str)],
    "periods-hyperelliptic": [("--g", "g", int), ("--D", "D", int), ("--mode", "mode", str), ("--x", "x", str)],
    "schottky-check": [("--form", "form", str), ("--table", "table", str), ("--degree", "degree", int),
                       ("--points", "points", int), ("--seed", "seed", int), ("--hyperelliptic", "hyperelliptic", bool)],
    "lowest-term": [("--form", "form", str), ("--s", "s", str), ("--mode", "mode", str), ("--points", "points", int),
                    ("--seed", "seed", int), ("--hyperelliptic", "hyperelliptic", bool)],
    "tate-series": [("--order", "order", int)],
    "tate-verify": [("--order", "order", int), ("--discriminant-order", "discriminant_order", int)],
    "eisenstein": [("--k", "k", int), ("--order", "order", int)],
    "j-invariant": [("--order", "order", int)],
    "identities": [("--n-max", "n_max", int), ("--prime-bound", "prime_bound", int)],
    "theta-product": [("--g", "g", int), ("--max-trace", "max_trace", int)],
    "lattice-theta": [("--lattice", "lattice", str), ("--g", "g", int), ("--max-trace", "max_trace", int)],
    "schottky-J": [("--max-trace", "max_trace", int), ("--allow-large", "allow_large", bool)],
    "boundary-restrict": [("--form", "form", str)],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="schottky", description="Schottky uniformization toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, flags in _FLAGS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--output", "-o", help="write the JSON document here instead of stdout")
        for flag, key, typ in flags:
            if typ is bool:
                sp.add_argument(flag, dest=key, action="store_true", default=None)
            else:
                sp.add_argument(flag, dest=key, type=typ, default=None)
    return p


def _error_doc(command, kind, message, code):
    return {"schema": SCHEMA, "command": command, "error": {"kind": kind, "message": message, "exit_status": code}}


def run(argv: Optional[List[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    command, args = None, None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if not command:
            raise ConfigError("no subcommand given")
        cfg: Dict[str, Any] = {}
        if args.config:
            cfg = load_json_file(args.config)
            if not isinstance(cfg, dict):
                raise ConfigError("configuration must be a JSON object")
        for _flag, key, _typ in _FLAGS[command]:
            v = getattr(args, key)
            if v is not None:
                cfg[key] = v
        results, provenance = COMMANDS[command](cfg)
        doc = {
            "schema": SCHEMA,
            "command": command,
            "inputs": cfg,
            "results": results,
            "provenance": dict(provenance, version=__version__, threads=int(os.environ.get("SCHOTTKY_THREADS", "1"))),
        }
        code = 0
    except ConfigError as e:
        doc, code = _error_doc(command, "config", str(e), 2), 2
    except (ResourceBudgetError, MemoryError) as e:
        doc, code = _error_doc(command, "resource", str(e), 4), 4
    except (DegenerateError, TruncationError, ArithmeticError, ValueError) as e:
        doc, code = _error_doc(command, "precondition", str(e), 3), 3
    text = json.dumps(doc, indent=2, default=_default) + "\n"
    out_path = args.output if args is not None else None
    if out_path and code == 0:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        (stdout if code == 0 else sys.stderr).write(text)
    return code


def _default(o):
    if isinstance(o, Fraction):
        return rational_to_str(o)
    if isinstance(o, complex):
        return enc_complex(o)
    raise TypeError(f"cannot encode {type(o).__name__}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
