"""Command-line interface: construct, verify, classify and example."""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from .construct import (ConstructionError, LocalData, ValidationError, build,
                        extract_and_verify_local_data, fuchs_sides, loop_images, rigid_shape,
                        validate_local_data)
from .golden import (closed_form_x1, closed_form_x2, display_omega0, display_x1, display_x2,
                     y522_data)
from .group import (DELTA, PresentationError, TurbineParams, TurbineRepresentation, WordError,
                    distinguished_words, evaluate_word, verify_presentation)
from .linalg import DimensionError, Matrix, SingularMatrixError, rank
from .rigidity import CertificateError, burnside_oracle, irreducibility_certificate, is_rigid
from .scalar import ApproxField, ScalarError, cyclotomic_field

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_CERTIFICATION = 0, 1, 2, 3

SCALAR_KEYS = ("epsilon", "b")
LIST_KEYS = ("lambdas", "xis")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- input ----------------------------------------------------------------

def _literals(doc: dict) -> list[str]:
    out = [doc.get(key) for key in SCALAR_KEYS if doc.get(key) is not None]
    for key in LIST_KEYS:
        if isinstance(doc.get(key), list):
            out.extend(doc[key])
    matrices = doc.get("matrices")
    if isinstance(matrices, dict):
        for mat in matrices.values():
            if isinstance(mat, list):
                out.extend(x for row in mat if isinstance(row, list) for x in row)
    return [str(x) for x in out]


def auto_conductor(literals) -> int:
    """lcm of every root-of-unity order named in the literals (i counts as 4)."""
    n = 1
    for text in literals:
        for order in re.findall(r"zeta\s*\(\s*(\d+)\s*\)", text):
            n = math.lcm(n, int(order))
        if re.search(r"(?<![a-z])i(?![a-z])", text):
            n = math.lcm(n, 4)
    return n


def make_field(doc: dict, args) -> object:
    field_spec = dict(doc.get("field") or {})
    if args is not None:
        if getattr(args, "precision", None) is not None:
            field_spec = {"mode": "approx", "precision": args.precision,
                    "tolerance": getattr(args, "tol", None) or field_spec.get("tolerance")}
        elif getattr(args, "tol", None) is not None and field_spec.get("mode") == "approx":
            field_spec["tolerance"] = args.tol
        if getattr(args, "conductor", None) is not None:
            field_spec = {"mode": "exact", "conductor": args.conductor}
    mode = field_spec.get("mode", "exact")
    if mode == "approx":
        precision = int(field_spec.get("precision", 128))
        tol = field_spec.get("tolerance")
        return ApproxField(precision, tol=float(tol) if tol is not None else None)
    if mode != "exact":
        raise UsageError(f"unknown field mode {mode!r}")
    conductor = field_spec.get("conductor", "auto")
    if conductor in (None, "auto"):
        conductor = auto_conductor(_literals(doc))
    try:
        conductor = int(conductor)
    except (TypeError, ValueError):
        raise UsageError(f"conductor must be an integer or 'auto', got {conductor!r}") from None
    if conductor < 1:
        raise UsageError("conductor must be positive")
    return cyclotomic_field(conductor)


def _int(doc, key, default=None):
    value = doc.get(key, default)
    if value is None:
        raise UsageError(f"missing required key {key!r}")
    if isinstance(value, bool) or not isinstance(value, int):
        raise UsageError(f"{key!r} must be an integer")
    return value


def local_data_from_doc(doc: dict, field) -> LocalData:
    if not isinstance(doc, dict):
        raise UsageError("input document must be an object")
    shaft = doc.get("shaft", False)
    if not isinstance(shaft, bool):
        raise UsageError("'shaft' must be a boolean")
    variant = doc.get("variant", "turbine")
    params = TurbineParams.create(_int(doc, "n"), _int(doc, "k"), _int(doc, "l"), shaft, variant,
                                  doc.get("r"), doc.get("s"))
    for key in LIST_KEYS:
        if not isinstance(doc.get(key), list):
            raise UsageError(f"{key!r} must be a list of scalar literals")
    mults = doc.get("mults", list(rigid_shape(params)))
    if not isinstance(mults, list) or not all(isinstance(x, int) and x > 0 for x in mults):
        raise UsageError("'mults' must be a list of positive integers")
    if len(mults) != len(doc["xis"]):
        raise UsageError("'mults' and 'xis' must have equal length")
    parse = field.parse
    if "epsilon" not in doc:
        raise UsageError("missing required key 'epsilon'")
    b = doc.get("b")
    if shaft and b is None:
        raise UsageError("shaft turbines need 'b'")
    return LocalData(params=params, field=field, epsilon=parse(str(doc["epsilon"])),
                     lambdas=tuple(parse(str(x)) for x in doc["lambdas"]),
                     xis=tuple(parse(str(x)) for x in doc["xis"]), mults=tuple(mults),
                     b=parse(str(b)) if (shaft and b is not None) else None)


def representation_from_doc(matrices: dict, params: TurbineParams, field) -> TurbineRepresentation:
    images = {}
    for gen in params.generators():
        if gen not in matrices:
            raise UsageError(f"missing matrix for generator {gen!r}")
        rows = matrices[gen]
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise UsageError(f"matrix {gen!r} must be a list of rows")
        images[gen] = Matrix(field, [[field.parse(str(x)) for x in row] for row in rows])
        if images[gen].nrows != images[gen].ncols:
            raise UsageError(f"matrix {gen!r} is not square")
    return TurbineRepresentation(params, field, images)


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


# -- reports --------------------------------------------------------------

def _params_dict(p: TurbineParams) -> dict:
    return {"n": p.n, "k": p.k, "l": p.l, "shaft": p.shaft, "variant": p.variant,
            "r": p.r, "s": p.s, "twist": p.twist, "m": p.rank}


def _field_dict(field) -> dict:
    if getattr(field, "exact", False):
        return {"mode": "exact", "conductor": field.conductor}
    return {"mode": "approx", "precision": field.precision, "tolerance": float(field.tol)}


def _data_doc(data: LocalData) -> dict:
    f = data.field
    p = data.params
    doc = {"n": p.n, "k": p.k, "l": p.l, "shaft": p.shaft, "variant": p.variant, "r": p.r, "s": p.s,
           "epsilon": f.render(data.epsilon),
           "lambdas": [f.render(x) for x in data.lambdas],
           "xis": [f.render(x) for x in data.xis], "mults": list(data.mults),
           "field": _field_dict(f)}
    if p.shaft:
        doc["b"] = f.render(data.b)
    return doc


def certify(rep: TurbineRepresentation, data: LocalData) -> dict:
    """Recognition, presentation, alpha_inf identity, certificate, rigidity."""
    f = rep.field
    out = {}
    recog = extract_and_verify_local_data(rep, data)
    out["recognition"] = recog.as_dict()
    out["presentation"] = verify_presentation(rep).as_dict()
    words = distinguished_words(rep.params)
    direct = evaluate_word(rep, words["alpha_inf"])
    factored = evaluate_word(rep, words["alpha_inf_factorized"])
    out["alpha_inf"] = {
        "word": str(words["alpha_inf"]),
        "factorized_word": str(words["alpha_inf_factorized"]),
        "agree": direct.equals(factored),
        "rank_minus_identity": rank(direct - Matrix.identity(f, rep.m)),
    }
    out["loops"] = [{"label": str(lbl), "word": str(w)} for lbl, w in words["loops"]]
    lhs, rhs = fuchs_sides(data)
    det_product = rep.image("w0").det()
    out["fuchs_residual"] = f.render(lhs - rhs)
    out["fuchs_determinant_residual"] = f.render(det_product - rhs)
    problems = [] if recog.ok else list(recog.failures())
    try:
        cert = irreducibility_certificate(rep)
        out["certificate"] = cert.as_dict()
        irreducible = cert.verdict
        if not irreducible:
            problems.append("irreducibility certificate")
    except (CertificateError, SingularMatrixError) as exc:
        out["certificate"] = {"error": str(exc), "verdict": False}
        irreducible = False
        problems.append("irreducibility certificate")
    if rep.m <= 10:
        try:
            out["burnside"] = burnside_oracle([M for _, M in loop_images(rep)])
        except SingularMatrixError:
            out["burnside"] = None
    if irreducible:
        verdict = is_rigid(rep, True)
        out["rigidity"] = verdict.as_dict()
        if verdict.status != "rigid":
            problems.append(f"rigidity ({verdict.status}, index {verdict.index})")
    else:
        out["rigidity"] = {"status": "not assessed (irreducibility not certified)"}
    if not out["alpha_inf"]["agree"] or out["alpha_inf"]["rank_minus_identity"] != rep.m:
        problems.append("alpha_inf identity")
    out["problems"] = problems
    return out


def cmd_construct(doc: dict, args) -> tuple[dict, int]:
    field = make_field(doc, args)
    data = local_data_from_doc(doc, field)
    validation = validate_local_data(data)
    report = {"command": "construct", "input": _data_doc(data), "params": _params_dict(data.params),
              "validation": validation.as_dict()}
    if not validation.ok:
        report["status"] = "invalid local data"
        report["failed_conditions"] = validation.failures()
        return report, EXIT_VALIDATION
    try:
        rep = build(data)
    except ConstructionError as exc:
        report["status"] = "construction failed verification"
        report["failed_conditions"] = exc.conditions
        return report, EXIT_CERTIFICATION
    report["representation"] = rep.to_literals()
    coeffs = getattr(rep, "coefficients", None)
    if coeffs is not None:
        report["coefficients"] = coeffs.as_dict(field)
    report.update(certify(rep, data))
    if report["problems"]:
        report["status"] = "certification failed"
        return report, EXIT_CERTIFICATION
    report["status"] = "ok"
    return report, EXIT_OK


def cmd_verify(doc: dict, args) -> tuple[dict, int]:
    if "representation" in doc and "input" in doc:
        data_doc, matrices = doc["input"], doc["representation"]
    else:
        data_doc, matrices = doc, doc.get("matrices")
    if not isinstance(matrices, dict):
        raise UsageError("verify needs 'matrices' (generator -> rows)")
    merged = dict(data_doc)
    merged["matrices"] = matrices
    field = make_field(merged, args)
    data = local_data_from_doc(data_doc, field)
    validation = validate_local_data(data)
    report = {"command": "verify", "input": _data_doc(data), "params": _params_dict(data.params),
              "validation": validation.as_dict()}
    if not validation.ok:
        report["status"] = "invalid local data"
        report["failed_conditions"] = validation.failures()
        return report, EXIT_VALIDATION
    rep = representation_from_doc(matrices, data.params, field)
    if rep.m != data.m:
        report["status"] = "certification failed"
        report["problems"] = [f"matrices have size {rep.m}, local data needs {data.m}"]
        return report, EXIT_CERTIFICATION
    try:
        report.update(certify(rep, data))
    except SingularMatrixError as exc:
        report["status"] = "certification failed"
        report["problems"] = [f"singular generator image: {exc}"]
        return report, EXIT_CERTIFICATION
    if report["problems"]:
        report["status"] = "certification failed"
        return report, EXIT_CERTIFICATION
    report["status"] = "ok"
    return report, EXIT_OK


def cmd_classify(doc: dict, args) -> tuple[dict, int]:
    field = make_field(doc, args)
    data = local_data_from_doc(doc, field)
    validation = validate_local_data(data)
    p = data.params
    if p.shaft:
        builder = "one branch with shaft" if p.l == 1 else "extension with shaft"
    else:
        builder = "one branch without shaft" if p.l == 1 else "extension without shaft"
    report = {"command": "classify", "input": _data_doc(data), "params": _params_dict(p),
              "rank": p.rank, "builder": builder, "rigid_shape": list(rigid_shape(p)),
              "validation": validation.as_dict()}
    if validation.ok:
        report["status"] = "rigid Pochhammer local data"
        return report, EXIT_OK
    report["status"] = "invalid local data"
    report["failed_conditions"] = validation.failures()
    return report, EXIT_VALIDATION


def cmd_example(doc, args) -> tuple[dict, int]:
    data = y522_data()
    f = data.field
    rep = build(data)
    e = data.epsilon
    l1, l2 = data.lambdas
    x1, x2, _ = data.xis
    built = {"w0": rep.images["w0"], "a1": rep.images["a1"], "a2": rep.images["a2"]}
    display = {"w0": display_omega0(f, e), "a1": display_x1(f, e, l1, l2, x1, x2),
               "a2": display_x2(f, e, l1, l2, x1, x2)}
    closed = {"w0": display_omega0(f, e), "a1": closed_form_x1(f, e, l1, l2, x1, x2),
              "a2": closed_form_x2(f, e, l1, l2, x1, x2)}

    def diff(A, B):
        return [[i, j] for i in range(A.nrows) for j in range(A.ncols) if not f.eq(A[i, j], B[i, j])]

    comparison = {g: {"matches_closed_form": built[g].equals(closed[g]),
                      "matches_reference_display": built[g].equals(display[g]),
                      "display_mismatch_entries": diff(built[g], display[g])} for g in built}
    report = {"command": "example", "input": _data_doc(data), "params": _params_dict(data.params),
              "representation": rep.to_literals(), "comparison": comparison,
              "reference_display": {g: M.to_literals() for g, M in display.items()}}
    report.update(certify(rep, data))
    w0_sq = rep.images["w0"] ** 2
    report["w0_squared_is_eps_identity"] = w0_sq.equals(Matrix.scalar(f, e, 4))
    ok = all(c["matches_closed_form"] for c in comparison.values()) and \
        comparison["w0"]["matches_reference_display"] and not report["problems"]
    report["status"] = "ok" if ok else "golden comparison failed"
    return report, EXIT_OK if ok else EXIT_CERTIFICATION


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify, "classify": cmd_classify,
            "example": cmd_example}


# -- output ---------------------------------------------------------------

def _human(report: dict) -> str:
    lines = [f"{report.get('command', '?')}: {report.get('status', '?')}"]
    p = report.get("params")
    if p:
        lines.append(f"  turbine n={p['n']} k={p['k']} l={p['l']} shaft={p['shaft']} "
                     f"variant={p['variant']} (r, s)=({p['r']}, {p['s']}) rank={p['m']}")
    for cond in report.get("validation", {}).get("conditions", []):
        mark = "ok  " if cond["ok"] else "FAIL"
        lines.append(f"  [{mark}] {cond['name']}")
    for name, rows in (report.get("representation") or {}).items():
        lines.append(f"  {name}:")
        width = max(len(x) for row in rows for x in row)
        for row in rows:
            lines.append("    [ " + "  ".join(x.rjust(width) for x in row) + " ]")
    for cond in report.get("recognition", {}).get("conditions", []):
        mark = "ok  " if cond["ok"] else "FAIL"
        lines.append(f"  [{mark}] {cond['name']}")
    cert = report.get("certificate")
    if cert and "verdict" in cert:
        lines.append(f"  certificate: strongly connected={cert.get('strongly_connected')} "
                     f"rank(I - product)={cert.get('rank_I_minus_product')} verdict={cert['verdict']}")
        if "arcs" in cert:
            lines.append("  arcs: " + ", ".join(f"{a}->{b}" for a, b in cert["arcs"]))
    if "burnside" in report:
        lines.append(f"  burnside: {report['burnside']}")
    rig = report.get("rigidity")
    if rig:
        lines.append(f"  rigidity: {rig.get('status')} index={rig.get('index')} "
                     f"centralizer dims={rig.get('centralizer_dims')}")
    if "fuchs_residual" in report:
        lines.append(f"  Fuchs residual: {report['fuchs_residual']}")
    for g, c in (report.get("comparison") or {}).items():
        lines.append(f"  {g}: closed form {'match' if c['matches_closed_form'] else 'MISMATCH'}; "
                     f"reference display {'match' if c['matches_reference_display'] else 'differs at ' + str(c['display_mismatch_entries'])}")
    for item in report.get("failed_conditions", []) + report.get("problems", []):
        lines.append(f"  failed: {item}")
    if "error" in report:
        lines.append(f"  error: {report['error']}")
    return "\n".join(lines)


def _emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, indent=2) + "\n")
    else:
        stream.write(_human(report) + "\n")


def run_job(command: str, doc, args) -> tuple[dict, int]:
    try:
        if command != "example" and not isinstance(doc, dict):
            raise UsageError("input document must be a JSON object")
        return COMMANDS[command](doc, args)
    except (UsageError, ScalarError, PresentationError, WordError, DimensionError) as exc:
        return {"command": command, "status": "usage or parse error", "error": str(exc)}, EXIT_USAGE
    except ValidationError as exc:
        return {"command": command, "status": "invalid local data",
                "failed_conditions": exc.report.failures()}, EXIT_VALIDATION
    except ConstructionError as exc:
        return {"command": command, "status": "construction failed verification",
                "failed_conditions": exc.conditions}, EXIT_CERTIFICATION


def _sweep_job(payload):
    command, line_no, line, args = payload
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        report, code = {"command": command, "status": "usage or parse error", "error": str(exc)}, EXIT_USAGE
    else:
        report, code = run_job(command, doc, args)
    report["job"] = line_no
    report["exit_code"] = code
    return report, code


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rigid-turbine",
                     description="Build and certify rigid Pochhammer representations of turbine groups.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--input", metavar="PATH", help="JSON local-data document")
    parser.add_argument("--format", choices=("human", "json"), default="human")
    parser.add_argument("--conductor", metavar="N|auto",
                        help="exact mode in Q(zeta_N); 'auto' uses the lcm of root orders")
    parser.add_argument("--precision", type=int, metavar="BITS", help="approximate mode with this precision")
    parser.add_argument("--tol", type=float, metavar="EPS", help="approximate equality tolerance")
    parser.add_argument("--sweep", metavar="PATH", help="run the command on each JSON line of PATH")
    parser.add_argument("--jobs", type=int, default=min(8, os.cpu_count() or 1),
                        help="worker processes for --sweep (default: CPU count, at most 8)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.conductor is not None and args.conductor != "auto":
        try:
            args.conductor = int(args.conductor)
        except ValueError:
            parser.error("--conductor takes an integer or 'auto'")
    if args.conductor == "auto":
        args.conductor = None
        args.force_auto = True
    if args.precision is not None and args.precision < 16:
        parser.error("--precision must be at least 16")
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    if args.tol is not None and args.tol <= 0:
        parser.error("--tol must be positive")
    job_args = argparse.Namespace(conductor=args.conductor, precision=args.precision, tol=args.tol,
                                  force_auto=getattr(args, "force_auto", False))

    if args.sweep:
        if args.command == "example":
            parser.error("--sweep does not apply to 'example'")
        try:
            with open(args.sweep, encoding="utf-8") as fh:
                lines = [(i, ln) for i, ln in enumerate(fh, start=1) if ln.strip()]
        except OSError as exc:
            sys.stderr.write(f"cannot read {args.sweep}: {exc}\n")
            return EXIT_USAGE
        payloads = [(args.command, i, ln, job_args) for i, ln in lines]
        worst = EXIT_OK
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = pool.map(_sweep_job, payloads)
                for report, code in results:
                    _emit_line(report, args.format)
                    worst = max(worst, code)
        else:
            for payload in payloads:
                report, code = _sweep_job(payload)
                _emit_line(report, args.format)
                worst = max(worst, code)
        return worst

    if args.command == "example":
        doc = None
    else:
        if not args.input:
            parser.error(f"'{args.command}' needs --input PATH")
        try:
            doc = _load(args.input)
        except UsageError as exc:
            _emit({"command": args.command, "status": "usage or parse error", "error": str(exc)}, args.format)
            return EXIT_USAGE
        if job_args.force_auto and isinstance(doc, dict):
            doc = dict(doc)
            doc["field"] = {"mode": "exact", "conductor": "auto"}
    report, code = run_job(args.command, doc, job_args)
    report["exit_code"] = code
    _emit(report, args.format)
    return code


def _emit_line(report: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report) + "\n")
    else:
        sys.stdout.write(f"[job {report.get('job')}] " + _human(report).replace("\n", "\n  ") + "\n")
    sys.stdout.flush()


if __name__ == "__main__":
    sys.exit(main())
