"""Model documents and the command-line surface.

One JSON document describes one model.  Rationals are serialized as
strings ("p/q" or "p"), never floats; serialization is canonical (sorted
keys, fixed field order) so parse . serialize is the identity.

Exit codes: 0 all checks pass, 1 verification failure, 2 parse error,
3 validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import gluing, kgroup, monodromy, theorems, weights
from .monodromy import (JordanStringModel, NilpotentModel, NotNilpotent,
                        graded_kernel, monodromy_filtration,
                        primitive_decomposition, verify_hard_lefschetz)
from .gluing import GluingDatum, psi_u, verify_prop_2_3, verify_sequence_2
from .qlinalg import QMatrix, Subspace
from .report import Report, ReportBuilder, merge
from .theorems import DiskModel, verify_local_invariant_cycles, verify_weight_mechanics
from .weights import (LabeledGrading, TwistedLabel, TwistedMap, WeightFiltration,
                      WeightedSpace)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3


class ParseError(ValueError):
    """Malformed document text or missing/ill-typed fields."""


class ValidationError(ValueError):
    """Well-formed document whose payload violates a model invariant."""


@dataclass(frozen=True)
class ModelDocument:
    kind: str
    model: object  # NilpotentModel | JordanStringModel | GluingDatum | DiskModel


# ---------------------------------------------------------------------------
# serialization helpers

def _rat_str(x: Fraction) -> str:
    return str(x)


def _parse_rat(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise ParseError(f"rationals must be strings or integers, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ParseError(f"bad rational {s!r}: {e}") from None


def _matrix_to_json(m: QMatrix) -> list:
    return [[_rat_str(x) for x in row] for row in m.entries]


def _matrix_from_json(data, rows=None, cols=None) -> QMatrix:
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        raise ParseError("matrix must be a list of rows")
    m = QMatrix.from_rows([[_parse_rat(x) for x in row] for row in data],
                          cols=cols if not data else None)
    if rows is not None and m.rows != rows:
        raise ParseError(f"expected {rows} rows, got {m.rows}")
    return m


def _filtration_to_json(f: WeightFiltration) -> dict:
    return {str(w): [[_rat_str(x) for x in row] for row in s.basis.entries]
            for w, s in f.steps}


def _filtration_from_json(data, dim: int) -> WeightFiltration:
    if not isinstance(data, dict):
        raise ParseError("filtration must be an object mapping weight to rows")
    steps = []
    for w_str, rows in data.items():
        try:
            w = int(w_str)
        except ValueError:
            raise ParseError(f"bad filtration weight {w_str!r}") from None
        vecs = [[_parse_rat(x) for x in row] for row in rows]
        try:
            steps.append((w, Subspace.from_vectors(dim, vecs)))
        except Exception as e:
            raise ParseError(f"bad filtration step at weight {w}: {e}") from None
    try:
        return WeightFiltration.from_spaces(dim, steps)
    except weights.FiltrationError as e:
        raise ValidationError(str(e)) from None


def _grading_to_json(g: LabeledGrading) -> dict:
    return {str(w): [[lbl.label, lbl.twist, m] for lbl, m in terms]
            for w, terms in g.entries}


def _grading_from_json(data) -> LabeledGrading:
    if not isinstance(data, dict):
        raise ParseError("grading must be an object mapping weight to entries")
    d = {}
    for w_str, terms in data.items():
        try:
            w = int(w_str)
        except ValueError:
            raise ParseError(f"bad grading weight {w_str!r}") from None
        entry = {}
        for t in terms:
            if not (isinstance(t, list) and len(t) == 3):
                raise ParseError("grading entries must be [label, twist, mult]")
            label, twist, mult = t
            entry[TwistedLabel(str(label), int(twist))] = int(mult)
        d[w] = entry
    try:
        return LabeledGrading.from_dict(d)
    except weights.InconsistentGrading as e:
        raise ValidationError(str(e)) from None


def _space_to_json(ws: WeightedSpace) -> dict:
    return {"dim": ws.dim,
            "filtration": _filtration_to_json(ws.filtration),
            "grading": _grading_to_json(ws.grading)}


def _space_from_json(data) -> WeightedSpace:
    if not isinstance(data, dict) or "dim" not in data:
        raise ParseError("space payload must be an object with a dim field")
    dim = int(data["dim"])
    if dim == 0:
        return WeightedSpace.zero()
    if "filtration" not in data:
        raise ParseError("space payload missing filtration")
    filt = _filtration_from_json(data["filtration"], dim)
    grading = (_grading_from_json(data["grading"]) if "grading" in data
               else weights.default_grading(filt))
    try:
        return WeightedSpace(dim, filt, grading)
    except (weights.InconsistentGrading, weights.FiltrationError) as e:
        raise ValidationError(str(e)) from None


def _nilpotent_to_json(m: NilpotentModel) -> dict:
    return {"n": m.n,
            "matrix": _matrix_to_json(m.N.matrix),
            "filtration": _filtration_to_json(m.space.filtration),
            "grading": _grading_to_json(m.space.grading)}


def _nilpotent_from_json(data) -> NilpotentModel:
    if "matrix" not in data or "n" not in data:
        raise ParseError("nilpotent payload needs matrix and n")
    mat = _matrix_from_json(data["matrix"])
    if mat.rows != mat.cols:
        raise ValidationError("nilpotent matrix must be square")
    n = int(data["n"])
    dim = mat.rows
    try:
        if "filtration" in data:
            filt = _filtration_from_json(data["filtration"], dim)
        elif dim:
            filt = monodromy_filtration(mat, n - 1)
        else:
            filt = WeightFiltration(0, ())
        grading = (_grading_from_json(data["grading"]) if "grading" in data
                   else weights.default_grading(filt))
        space = (WeightedSpace(dim, filt, grading) if dim else WeightedSpace.zero())
        return NilpotentModel(space, n, TwistedMap(mat, -1))
    except (NotNilpotent, weights.InconsistentGrading, ValueError) as e:
        if isinstance(e, (ParseError, ValidationError)):
            raise
        raise ValidationError(str(e)) from None


def _strings_from_json(data) -> JordanStringModel:
    if "strings" not in data or "n" not in data:
        raise ParseError("pure_strings payload needs strings and n")
    strings = []
    for s in data["strings"]:
        if not isinstance(s, dict) or "label" not in s or "length" not in s:
            raise ParseError("each string needs label and length")
        strings.append((str(s["label"]), int(s["length"])))
    try:
        return JordanStringModel(tuple(strings), int(data["n"]))
    except ValueError as e:
        raise ValidationError(str(e)) from None


def _strings_to_json(m: JordanStringModel) -> dict:
    return {"n": m.n,
            "strings": [{"label": lbl, "length": ln} for lbl, ln in m.strings]}


def _gluing_from_json(data) -> GluingDatum:
    for field in ("psi", "phi", "can", "var"):
        if field not in data:
            raise ParseError(f"gluing payload missing {field}")
    psi = _space_from_json(data["psi"])
    phi = _space_from_json(data["phi"])
    can = _matrix_from_json(data["can"], cols=psi.dim)
    var = _matrix_from_json(data["var"], cols=phi.dim)
    try:
        return GluingDatum(psi, phi, TwistedMap(can, 0), TwistedMap(var, -1))
    except (NotNilpotent, ValueError) as e:
        raise ValidationError(str(e)) from None


def _gluing_to_json(g: GluingDatum) -> dict:
    return {"psi": _space_to_json(g.psi), "phi": _space_to_json(g.phi),
            "can": _matrix_to_json(g.can.matrix),
            "var": _matrix_to_json(g.var.matrix)}


def _disk_from_json(data) -> DiskModel:
    if "open" not in data:
        raise ParseError("disk payload missing open part")
    open_data = data["open"]
    if not isinstance(open_data, dict):
        raise ParseError("open part must be an object")
    if "strings" in open_data:
        open_model = _strings_from_json(open_data).to_nilpotent()
    else:
        open_model = _nilpotent_from_json(open_data)
    point_data = data.get("point", {"weight": open_model.n, "labels": []})
    labels = point_data.get("labels", [])
    pw = int(point_data.get("weight", open_model.n))
    pdim = sum(int(m) for _, m in labels)
    if pdim:
        grading = LabeledGrading.from_dict(
            {pw: {TwistedLabel(str(lbl)): int(m) for lbl, m in labels}})
        point = WeightedSpace.pure(pdim, pw, grading=grading)
    else:
        point = WeightedSpace.zero()
    pure = bool(data.get("pure", True))
    extension = data.get("extension", "intermediate" if pure else "shriek")
    try:
        return DiskModel(open_model, point, pure, extension)
    except ValueError as e:
        raise ValidationError(str(e)) from None


def _disk_to_json(dm: DiskModel) -> dict:
    labels = []
    for w, terms in dm.point_part.grading.entries:
        labels.extend([lbl.label, m] for lbl, m in terms)
    return {"open": _nilpotent_to_json(dm.open_part),
            "point": {"weight": dm.n, "labels": labels},
            "pure": dm.pure,
            "extension": dm.extension}


_TO_JSON = {
    "nilpotent": _nilpotent_to_json,
    "pure_strings": _strings_to_json,
    "gluing": _gluing_to_json,
    "disk": _disk_to_json,
}
_FROM_JSON = {
    "nilpotent": _nilpotent_from_json,
    "pure_strings": _strings_from_json,
    "gluing": _gluing_from_json,
    "disk": _disk_from_json,
}


def serialize(doc: ModelDocument) -> str:
    payload = _TO_JSON[doc.kind](doc.model)
    payload["kind"] = doc.kind
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def parse(text: str) -> ModelDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") \
            from None
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object")
    kind = data.get("kind")
    if kind not in _FROM_JSON:
        raise ParseError(f"unknown or missing kind {kind!r}")
    return ModelDocument(kind, _FROM_JSON[kind](data))


# ---------------------------------------------------------------------------
# verifier dispatch

def _model_reports(model: NilpotentModel) -> list:
    reports = []
    V, N = model.space, model.N
    reports.append(gluing.verify_roundtrip(V, N))
    reports.append(verify_sequence_2(V, N))
    reports.append(verify_prop_2_3(V, N))
    if model.space.dim:
        reports.append(monodromy.check_monodromy_axioms(
            monodromy_filtration(N.matrix, model.center), N.matrix, model.center))
    hl = verify_hard_lefschetz(model)
    if hl.passed:
        reports.append(hl)
        pd = primitive_decomposition(model)
        reports.append(pd.report)
        gk = graded_kernel(model)
        rb = ReportBuilder("class identity from the kernel grading")
        ks = kgroup.kclass_of_space(model.space)
        kk = kgroup.kclass_psi_from_kernel(gk.grading, model.n)
        rb.check("class of the space equals class assembled from ker N",
                 ks == kk, f"{ks} vs {kk}")
        reports.append(rb.build())
    return reports


def _gluing_reports(g: GluingDatum) -> list:
    p = psi_u(g)
    rb = ReportBuilder("gluing datum invariants")
    rb.check("var.can is nilpotent", True)  # enforced at construction
    rb.check("can is filtered", weights.check_filtered(g.can, g.psi, g.phi, 0))
    rb.check("var is filtered", weights.check_filtered(g.var, g.phi, g.psi, -2))
    reports = [rb.build(),
               verify_sequence_2(p.space, p.N),
               verify_prop_2_3(p.space, p.N)]
    return reports


def _disk_reports(dm: DiskModel) -> list:
    reports = []
    for k in (-1, 0):
        reports.append(verify_local_invariant_cycles(dm, k))
        reports.append(verify_weight_mechanics(dm, k).to_report())
    return reports


def _reports_for(doc: ModelDocument) -> list:
    if doc.kind == "pure_strings":
        return _model_reports(doc.model.to_nilpotent())
    if doc.kind == "nilpotent":
        return _model_reports(doc.model)
    if doc.kind == "gluing":
        return _gluing_reports(doc.model)
    if doc.kind == "disk":
        return _disk_reports(doc.model)
    raise ValidationError(f"no verifiers for kind {doc.kind!r}")


# ---------------------------------------------------------------------------
# commands

def _emit(report: Report, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    else:
        out.write(report.to_text() + "\n")


def _load(path: str) -> ModelDocument:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    return parse(text)


def _doc_model(doc: ModelDocument) -> NilpotentModel:
    if doc.kind == "pure_strings":
        return doc.model.to_nilpotent()
    if doc.kind == "nilpotent":
        return doc.model
    raise ValidationError(f"command needs a nilpotent or pure_strings document, "
                          f"got {doc.kind!r}")


def cmd_check(args, out) -> int:
    doc = _load(args.file)
    reports = _reports_for(doc)
    combined = merge(f"check {doc.kind}", *reports)
    if args.format == "json":
        payload = {"title": combined.title,
                   "passed": combined.passed,
                   "reports": [r.to_dict() for r in reports]}
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        for r in reports:
            out.write(r.to_text() + "\n")
        out.write(("PASS" if combined.passed else "FAIL") + "\n")
    return EXIT_OK if combined.passed else EXIT_VERIFICATION


def cmd_monodromy(args, out) -> int:
    doc = _load(args.file)
    model = _doc_model(doc)
    center = args.center if args.center is not None else model.center
    filt = monodromy_filtration(model.N.matrix, center)
    out.write(f"monodromy filtration centered at {center}\n")
    for w, s in filt.steps:
        out.write(f"  W_{w}: dim {s.dim}, graded dim {filt.graded_dim(w)}\n")
        for row in s.basis.entries:
            out.write("    [" + ", ".join(str(x) for x in row) + "]\n")
    return EXIT_OK


def cmd_kclass(args, out) -> int:
    doc = _load(args.file)
    model = _doc_model(doc)
    cls = kgroup.kclass_of_space(model.space)
    out.write(str(cls) + "\n")
    return EXIT_OK


def cmd_gen(args, out) -> int:
    labels = args.labels.split(",") if args.labels else ["L"]
    model = theorems.generate_model(args.seed, args.strings, args.maxlen,
                                    args.weight, labels)
    if args.scramble:
        doc = ModelDocument("nilpotent",
                            theorems.generate_scrambled(model, args.seed + 1))
    else:
        doc = ModelDocument("pure_strings", model)
    out.write(serialize(doc))
    return EXIT_OK


def cmd_independence(args, out) -> int:
    a = _doc_model(_load(args.file_a))
    b = _doc_model(_load(args.file_b))
    report = theorems.verify_kclass_independence(a, b)
    _emit(report, args.format, out)
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def cmd_lic(args, out) -> int:
    doc = _load(args.file)
    if doc.kind != "disk":
        raise ValidationError("lic needs a disk document")
    dm = doc.model
    ks = [args.k] if args.k is not None else [-1, 0]
    reports = []
    for k in ks:
        reports.append(verify_local_invariant_cycles(dm, k))
        reports.append(verify_weight_mechanics(dm, k).to_report())
    for r in reports:
        _emit(r, args.format, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="monofilt",
        description="exact verification of monodromy-weight identities on disk models")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run every verifier applicable to a document")
    c.add_argument("file")
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("monodromy", help="print the monodromy filtration")
    c.add_argument("file")
    c.add_argument("--center", type=int, default=None)
    c.set_defaults(func=cmd_monodromy)

    c = sub.add_parser("kclass", help="print the Grothendieck class")
    c.add_argument("file")
    c.set_defaults(func=cmd_kclass)

    c = sub.add_parser("gen", help="emit a pseudorandom model document")
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--strings", type=int, default=3)
    c.add_argument("--maxlen", type=int, default=4)
    c.add_argument("--weight", type=int, default=1)
    c.add_argument("--labels", type=str, default="L")
    c.add_argument("--scramble", action="store_true")
    c.set_defaults(func=cmd_gen)

    c = sub.add_parser("independence", help="compare classes of two pure models")
    c.add_argument("file_a")
    c.add_argument("file_b")
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.set_defaults(func=cmd_independence)

    c = sub.add_parser("lic", help="local invariant cycles and weight mechanics")
    c.add_argument("file")
    c.add_argument("--k", type=int, default=None)
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.set_defaults(func=cmd_lic)
    return p


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(run())
