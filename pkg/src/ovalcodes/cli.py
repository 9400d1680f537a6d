"""Command-line front end.

Exit codes: 0 success or match, 1 parameter error, 2 verification mismatch,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .charsums import (CLOSED_FORM_TOL, QuadraticPoly, delta_sum_segre, gauss_norm_is_q,
                       gauss_sum_exhaustive, gauss_sum_quadratic_closed_form, weil_sum_quadratic)
from .codes import DEFAULT_BUDGET, BudgetExceeded, CodeError, sphere_packing_max_d, weight_distribution
from .families import FAMILIES, NoOracle, build_code, get_family, verify_family
from .formulas import BestKnownTable, OutsideTheoremScope, optimality_label
from .geometry import (GeometryError, OPolynomial, PointSet, conic_points, is_arc, is_o_polynomial,
                       line_intersection_profile, parse_polynomial)
from .gf import FieldError, FieldSpec, make_field
from .subfield import SubfieldBasis

EXIT_OK, EXIT_PARAM, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: int
    m: int
    family: str | None
    modulus_file: str | None
    basis: str | None
    budget: int
    format: str
    out: str | None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        return cls(args.command, args.p, args.m, getattr(args, "family", None), args.modulus_file,
                   getattr(args, "basis", None), args.budget, args.format, args.out)

    def field(self) -> FieldSpec:
        return make_field(self.p, self.m, config=self.modulus_file)


def _family_p(args: argparse.Namespace) -> None:
    """Fill in p = 2 for binary families when --p is omitted."""
    if args.p is None:
        fam = FAMILIES.get(getattr(args, "family", None) or "")
        if fam is not None and fam.characteristic == "even":
            args.p = 2
        else:
            raise ParameterError("--p is required")


def _parse_basis(text: str | None, field: FieldSpec) -> SubfieldBasis | None:
    if text is None:
        return None
    if text == "polynomial":
        return SubfieldBasis.polynomial(field)
    try:
        elems = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ParameterError(f"--basis expects 'polynomial' or packed integers, got {text!r}") from None
    return SubfieldBasis(field, elems)


def _header(cfg: RunConfig, field: FieldSpec, basis: SubfieldBasis | None) -> dict:
    return {
        "family": cfg.family,
        "p": field.p,
        "m": field.m,
        "modulus": list(field.modulus),
        "basis": list(basis.elements) if basis else "trace-representation",
    }


def _complex_text(z: complex) -> str:
    return f"{z.real:.6f}{z.imag:+.6f}i"


def _complex_json(z: complex) -> list[float]:
    return [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]


def _matrix_text(rows) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in rows)


# -- commands --------------------------------------------------------------------


def cmd_build(cfg: RunConfig) -> tuple[int, str]:
    field = cfg.field()
    basis = _parse_basis(cfg.basis, field)
    notes = []
    if cfg.family == "segre" and cfg.m % 2 == 0:
        notes.append("no closed-form oracle for even m")
        print(f"warning: {cfg.family} with m={cfg.m}: no closed-form oracle", file=sys.stderr)
    code = build_code(cfg.family, field, basis)
    header = _header(cfg, field, basis)
    if notes:
        header["notes"] = notes
    if cfg.format == "json":
        return EXIT_OK, json.dumps(code.to_json(header), indent=2)
    if cfg.format == "csv":
        return EXIT_OK, "\n".join(",".join(str(int(v)) for v in row) for row in code.generator)
    lines = [f"# {k}: {v}" for k, v in header.items()] + [f"# [{code.n},{code.k}] over GF({code.q})"]
    return EXIT_OK, "\n".join(lines) + "\n" + _matrix_text(code.generator)


def cmd_enumerate(cfg: RunConfig) -> tuple[int, str]:
    field = cfg.field()
    code = build_code(cfg.family, field, _parse_basis(cfg.basis, field))
    dist = weight_distribution(code, budget=cfg.budget)
    if cfg.format == "csv":
        return EXIT_OK, dist.to_csv().rstrip("\n")
    if cfg.format == "json":
        return EXIT_OK, dist.to_json()
    body = "\n".join(f"{w:>6} {c}" for w, c in dist.counts.items())
    return EXIT_OK, f"[{code.n},{code.k},{dist.min_distance}] over GF({code.q})\n{body}"


def cmd_predict(cfg: RunConfig) -> tuple[int, str]:
    fam = get_family(cfg.family)
    fam.check_params(cfg.p, cfg.m)
    pred = fam.predict(cfg.p, cfg.m)
    merged = pred.merged()
    if cfg.format == "json":
        return EXIT_OK, json.dumps({"family": cfg.family, "p": cfg.p, "m": cfg.m, "n": pred.n, "k": pred.k,
                                    "rows": [list(r) for r in pred.rows],
                                    "merged": {str(w): c for w, c in merged.items()}}, indent=2)
    if cfg.format == "csv":
        return EXIT_OK, "weight,count\n" + "\n".join(f"{w},{c}" for w, c in merged.items())
    body = "\n".join(f"{w:>6} {c}" for w, c in merged.items())
    return EXIT_OK, f"[{pred.n},{pred.k},{pred.min_distance}] predicted\n{body}"


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    field = cfg.field()
    basis = _parse_basis(cfg.basis, field)
    report = verify_family(cfg.family, cfg.p, cfg.m, field=field, budget=cfg.budget, basis=basis)
    code = EXIT_OK if report.match else EXIT_MISMATCH
    if cfg.format == "json":
        return code, report.to_json()
    if cfg.format == "csv":
        weights = sorted(set(report.predicted) | set(report.enumerated))
        rows = [f"{w},{report.predicted.get(w, 0)},{report.enumerated.get(w, 0)}" for w in weights]
        return code, "weight,predicted,enumerated\n" + "\n".join(rows)
    d = report.dual
    lines = [f"{report.family} p={report.p} m={report.m}: [{report.n},{report.k},{report.min_distance}]"
             f" {report.optimality}",
             f"dual [{d['n']},{d['k']},{d['d_macwilliams']}] (columns: {d['d_columns']}, claimed: {d['claimed_d']})",
             f"match={str(report.match).lower()}"]
    lines += [f"mismatch weight {r['weight']}: predicted {r['predicted']}, enumerated {r['enumerated']}"
              for r in report.mismatch_rows]
    return code, "\n".join(lines)


def cmd_charsum(cfg: RunConfig, args: argparse.Namespace) -> tuple[int, str]:
    field = cfg.field()
    if args.kind == "gauss":
        q = field.q
        j = args.j if args.j is not None else ((q - 1) // 2 if field.p != 2 else None)
        if j is None:
            raise ParameterError("--j is required in characteristic 2")
        g = gauss_sum_exhaustive(field, j)
        z = complex(g)
        out: dict = {"kind": "gauss", "p": field.p, "m": field.m, "j": j,
                     "exact": g.to_json(), "exhaustive": _complex_json(z),
                     "norm_squared_is_q": gauss_norm_is_q(g, q)}
        if field.p != 2 and j == (q - 1) // 2:
            closed = gauss_sum_quadratic_closed_form(field)
            out["closed"] = _complex_json(closed)
            out["match"] = abs(z - closed) <= CLOSED_FORM_TOL
        text = f"exhaustive={_complex_text(z)}"
        if "closed" in out:
            text += f", closed={_complex_text(closed)}, {'match' if out['match'] else 'MISMATCH'}"
    elif args.kind == "weil":
        f = QuadraticPoly(args.a2, args.a1, args.a0)
        s = weil_sum_quadratic(field, f, "exhaustive")
        z = complex(s)
        out = {"kind": "weil", "p": field.p, "m": field.m, "a2": f.a2, "a1": f.a1, "a0": f.a0,
               "exact": s.to_json(), "exhaustive": _complex_json(z)}
        text = f"exhaustive={_complex_text(z)}"
        if f.a2:
            closed = weil_sum_quadratic(field, f, "closed")
            out["closed"] = _complex_json(closed)
            out["match"] = abs(z - closed) <= CLOSED_FORM_TOL
            text += f", closed={_complex_text(closed)}, {'match' if out['match'] else 'MISMATCH'}"
    else:  # segre-delta
        d = delta_sum_segre(field, args.a, args.b)
        out = {"kind": "segre-delta", "p": field.p, "m": field.m, "a": args.a, "b": args.b,
               "exact": d.value.to_json(), "value": d.integer, "sign": d.sign}
        text = f"delta={d.integer} sign={d.sign:+d}"
    code = EXIT_MISMATCH if out.get("match") is False else EXIT_OK
    if cfg.format == "json":
        return code, json.dumps(out, indent=2)
    return code, text


def cmd_arc_check(cfg: RunConfig, args: argparse.Namespace) -> tuple[int, str]:
    field = cfg.field()
    out: dict = {"family": args.kind, "p": field.p, "m": field.m}
    if args.kind == "hyperoval":
        coeffs = parse_polynomial(args.opoly, field)
        check = is_o_polynomial(coeffs, field)
        out.update(opoly=args.opoly, o_polynomial=check.ok, reason=check.reason)
        # the point set is formed even for a failed candidate so a witness can be reported
        f = OPolynomial(field, coeffs)
        xs = field.elements
        cols = np.stack([f.values(xs), xs, np.ones_like(xs)], axis=1)
        pts = PointSet.from_triples(field, list(cols) + [(1, 0, 0), (0, 1, 0)])
    else:
        pts = conic_points(field)
    if len(set(pts.points)) != len(pts):
        out.update(is_arc=False, witness=None, reason=out.get("reason") or "repeated points")
    else:
        arc = is_arc(pts)
        out.update(is_arc=arc.is_arc,
                   witness=[[field.index_of(c) for c in pt] for pt in arc.witness] if arc.witness else None)
    out["n_points"] = len(pts)
    out["line_profile"] = {str(s): c for s, c in line_intersection_profile(pts).items()}
    ok = out["is_arc"] and out.get("o_polynomial", True)
    code = EXIT_OK if ok else EXIT_MISMATCH
    if cfg.format == "json":
        return code, json.dumps(out, indent=2)
    return code, " ".join(f"{k}={json.dumps(v)}" for k, v in out.items())


def cmd_optimality(args: argparse.Namespace) -> tuple[int, str]:
    table = BestKnownTable.bundled()
    if args.table:
        table = table.merge(BestKnownTable.from_csv(Path(args.table).read_text()))
    label = optimality_label(args.n, args.k, args.d, args.p, table)
    out = {"n": args.n, "k": args.k, "d": args.d, "p": args.p, "label": label.value,
           "best_known": table.lookup(args.p, args.n, args.k),
           "sphere_packing_max_d": sphere_packing_max_d(args.n, args.k, args.p)}
    if args.format == "json":
        return EXIT_OK, json.dumps(out, indent=2)
    return EXIT_OK, label.value


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="characteristic (defaults to 2 for binary families)")
    common.add_argument("--m", type=int, default=1, help="extension degree")
    common.add_argument("--modulus-file", help="file of 'p,m = c0,...,cm' modulus overrides")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="codeword enumeration budget (env OVALCODES_BUDGET)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", required=True, choices=sorted(FAMILIES))
    fam.add_argument("--basis", help="'polynomial' or comma-separated packed elements")

    parser = argparse.ArgumentParser(prog="ovalcodes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common, fam], help="construct a code and print its generator")
    sub.add_parser("enumerate", parents=[common, fam], help="brute-force weight distribution")
    sub.add_parser("predict", parents=[common, fam], help="closed-form weight distribution")
    sub.add_parser("verify", parents=[common, fam], help="compare closed form with enumeration")

    cs = sub.add_parser("charsum", parents=[common], help="Gauss and Weil sums")
    cs.add_argument("kind", choices=("gauss", "weil", "segre-delta"))
    cs.add_argument("--j", type=int, help="multiplicative character index (default: quadratic)")
    for name in ("a2", "a1", "a0", "a", "b"):
        cs.add_argument(f"--{name}", type=int, default=0, help="packed field element")

    arc = sub.add_parser("arc-check", parents=[common], help="check an oval or hyperoval")
    arc.add_argument("--family", dest="kind", choices=("hyperoval", "conic"), required=True)
    arc.add_argument("--opoly", default="x^2", help="o-polynomial, e.g. x^6 or 0,0,1")

    opt = sub.add_parser("optimality", help="label [n,k,d] against the best-known table")
    for name in ("n", "k", "d", "p"):
        opt.add_argument(f"--{name}", type=int, required=True)
    opt.add_argument("--table", help="extra CSV table p,n,k,d_best,source")
    opt.add_argument("--format", choices=("json", "text"), default="text")
    opt.add_argument("--out")
    return parser


def _dispatch(args: argparse.Namespace) -> tuple[int, str]:
    if args.command == "optimality":
        return cmd_optimality(args)
    if args.command == "arc-check" and args.kind == "hyperoval" and args.p is None:
        args.p = 2
    _family_p(args)
    cfg = RunConfig.from_args(args)
    if args.command == "build":
        return cmd_build(cfg)
    if args.command == "enumerate":
        return cmd_enumerate(cfg)
    if args.command == "predict":
        return cmd_predict(cfg)
    if args.command == "verify":
        return cmd_verify(cfg)
    if args.command == "charsum":
        return cmd_charsum(cfg, args)
    return cmd_arc_check(cfg, args)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, text = _dispatch(args)
    except NoOracle as exc:
        print(f"error: no closed-form oracle: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OutsideTheoremScope as exc:
        print(f"error: outside theorem scope: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FieldError, GeometryError, CodeError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
