import io
import json

import pytest

from monofilt import cli
from monofilt.cli import (EXIT_OK, EXIT_PARSE, EXIT_VALIDATION,
                          EXIT_VERIFICATION, ModelDocument, ParseError,
                          ValidationError, parse, serialize)
from monofilt.monodromy import JordanStringModel
from monofilt.theorems import DiskModel, generate_model, generate_scrambled
from monofilt.weights import WeightedSpace


def run(argv):
    out = io.StringIO()
    rc = cli.run(argv, out)
    return rc, out.getvalue()


def write_doc(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(serialize(doc))
    return str(p)


class TestRoundTrip:
    def test_pure_strings(self):
        doc = ModelDocument("pure_strings", generate_model(1, 3, 4, 1, ["L"]))
        assert parse(serialize(doc)) == doc
        assert serialize(parse(serialize(doc))) == serialize(doc)

    def test_nilpotent(self):
        m = generate_scrambled(generate_model(2, 3, 3, 1, ["L", "P"]), 5)
        doc = ModelDocument("nilpotent", m)
        assert parse(serialize(doc)) == doc

    def test_gluing(self):
        from monofilt.gluing import j_intermediate
        m = JordanStringModel((("L", 2),), 1).to_nilpotent()
        doc = ModelDocument("gluing", j_intermediate(m.space, m.N))
        assert parse(serialize(doc)) == doc

    def test_disk(self):
        m = JordanStringModel((("L", 2),), 1).to_nilpotent()
        doc = ModelDocument("disk", DiskModel(m, WeightedSpace.pure(1, 1, "P")))
        assert parse(serialize(doc)) == doc

    def test_rational_entries(self):
        text = json.dumps({
            "kind": "nilpotent", "n": 1,
            "matrix": [["0", "1/2"], ["0", "0"]]})
        doc = parse(text)
        from fractions import Fraction
        assert doc.model.N.matrix.entries[0][1] == Fraction(1, 2)


class TestErrors:
    def test_invalid_json(self):
        with pytest.raises(ParseError):
            parse("{not json")

    def test_unknown_kind(self):
        with pytest.raises(ParseError):
            parse(json.dumps({"kind": "mystery"}))

    def test_float_rejected(self):
        with pytest.raises(ParseError):
            parse(json.dumps({"kind": "nilpotent", "n": 1,
                              "matrix": [[0.5, 0], [0, 0]]}))

    def test_non_nilpotent_rejected(self):
        with pytest.raises(ValidationError):
            parse(json.dumps({"kind": "nilpotent", "n": 1,
                              "matrix": [["1", "0"], ["0", "1"]]}))

    def test_non_nested_filtration_rejected(self):
        with pytest.raises(ValidationError):
            parse(json.dumps({
                "kind": "nilpotent", "n": 1,
                "matrix": [["0", "1"], ["0", "0"]],
                "filtration": {"-1": [["0", "1"]],
                               "1": [["1", "0"], ["0", "1"]]}}))


class TestCommands:
    def test_check_pure_model(self, tmp_path):
        doc = ModelDocument("pure_strings", generate_model(7, 3, 3, 1, ["L"]))
        rc, out = run(["check", write_doc(tmp_path, "m.json", doc)])
        assert rc == EXIT_OK
        assert out.strip().endswith("PASS")

    def test_check_json_format(self, tmp_path):
        doc = ModelDocument("pure_strings", generate_model(7, 3, 3, 1, ["L"]))
        rc, out = run(["check", write_doc(tmp_path, "m.json", doc),
                       "--format", "json"])
        assert rc == EXIT_OK
        payload = json.loads(out)
        assert payload["passed"] is True
        assert all(r["passed"] for r in payload["reports"])

    def test_check_parse_error_exit(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{broken")
        rc, _ = run(["check", str(p)])
        assert rc == EXIT_PARSE

    def test_check_validation_error_exit(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"kind": "nilpotent", "n": 1,
                                 "matrix": [["1"]]}))
        rc, _ = run(["check", str(p)])
        assert rc == EXIT_VALIDATION

    def test_kclass_j2(self, tmp_path):
        doc = ModelDocument("pure_strings", JordanStringModel((("L", 2),), 1))
        rc, out = run(["kclass", write_doc(tmp_path, "m.json", doc)])
        assert rc == EXIT_OK
        assert out.strip() == "L(0) + L(-1)"

    def test_monodromy_output(self, tmp_path):
        doc = ModelDocument("pure_strings", JordanStringModel((("L", 3),), 1))
        rc, out = run(["monodromy", write_doc(tmp_path, "m.json", doc),
                       "--center", "0"])
        assert rc == EXIT_OK
        assert "W_-2: dim 1" in out and "W_2: dim 3" in out

    def test_gen_deterministic(self):
        rc1, out1 = run(["gen", "--seed", "9", "--strings", "3",
                         "--maxlen", "4", "--weight", "1"])
        rc2, out2 = run(["gen", "--seed", "9", "--strings", "3",
                         "--maxlen", "4", "--weight", "1"])
        assert rc1 == rc2 == EXIT_OK and out1 == out2

    def test_independence_pair(self, tmp_path):
        m = generate_model(11, 3, 3, 1, ["L", "P"])
        a = write_doc(tmp_path, "a.json", ModelDocument("pure_strings", m))
        b = write_doc(tmp_path, "b.json",
                      ModelDocument("nilpotent", generate_scrambled(m, 12)))
        rc, out = run(["independence", a, b])
        assert rc == EXIT_OK
        assert "kernel gradings agree" in out

    def test_lic_pure(self, tmp_path):
        m = JordanStringModel((("L", 2),), 1).to_nilpotent()
        doc = ModelDocument("disk", DiskModel(m, WeightedSpace.zero()))
        rc, out = run(["lic", write_doc(tmp_path, "d.json", doc)])
        assert rc == EXIT_OK

    def test_lic_impure_counterexample(self, tmp_path):
        m = JordanStringModel((("L", 1),), 1).to_nilpotent()
        doc = ModelDocument("disk", DiskModel(m, WeightedSpace.zero(),
                                              pure=False, extension="shriek"))
        rc, out = run(["lic", write_doc(tmp_path, "d.json", doc)])
        assert rc == EXIT_VERIFICATION
        assert "surjective_on_low_weights" in out

    def test_check_disk_exit_matches_reports(self, tmp_path):
        m = JordanStringModel((("L", 2),), 1).to_nilpotent()
        good = ModelDocument("disk", DiskModel(m, WeightedSpace.zero()))
        rc, _ = run(["check", write_doc(tmp_path, "g.json", good)])
        assert rc == EXIT_OK
        bad = ModelDocument("disk", DiskModel(m, WeightedSpace.zero(),
                                              pure=False, extension="shriek"))
        rc, _ = run(["check", write_doc(tmp_path, "b.json", bad)])
        assert rc == EXIT_VERIFICATION
