"""End-to-end checks of the command-line tool: exit codes, golden values, CSV shape, round trips."""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile
import unittest

CLI = sys.argv.pop(1)
PRESETS = sys.argv.pop(1)


def run(*args, stdin=None):
    p = subprocess.run([CLI, *args], capture_output=True, text=True, input=stdin)
    return p.returncode, p.stdout, p.stderr


def ok_json(*args):
    code, out, err = run(*args)
    if code != 0:
        raise AssertionError(f"{args}: exit {code}: {err}")
    return json.loads(out)


class Commands(unittest.TestCase):
    def test_rmf_of_s1(self):
        d = ok_json("rmf", "--preset", "s1")
        self.assertEqual(d["kind"], "filtration")
        self.assertEqual(d["jumps"], {"0": 1, "2": 2})

    def test_rmf_nonexistence_exits_1(self):
        code, out, err = run("rmf", "--preset", "rmf-nonexistence")
        self.assertEqual(code, 1)
        self.assertIn("DoesNotExist", err)

    def test_rmf_flag(self):
        self.assertEqual(ok_json("rmf", "--preset", "rmf-flag")["jumps"], {"0": 1, "2": 3})

    def test_check_membership(self):
        d = ok_json("check", "--preset", "s1")
        self.assertTrue(d["member"])
        self.assertEqual(len(d["family"]), 2)

    def test_admissibility_depends_on_embedding(self):
        self.assertTrue(ok_json("check-admissible", "--preset", "depend-sqrt2")["admissible"])
        code, out, err = run("check-admissible", "--preset", "depend-sqrt2-minus")
        self.assertEqual(code, 1)
        self.assertFalse(json.loads(out)["admissible"])
        self.assertIn("NotAdmissible", err)

    def test_asymptote_tate_nn_csv(self):
        code, out, err = run("asymptote", "--preset", "tate-nn", "--schedule", "geometric:10", "--decades", "8", "--format", "csv")
        self.assertEqual(code, 0, err)
        rows = list(csv.reader(io.StringIO(out)))
        self.assertEqual(rows[0], ["y1", "y2", "r1", "distance"])
        body = rows[1:]
        self.assertEqual(len(body), 8)
        dist = [float(r[3]) for r in body]
        self.assertTrue(all(b < a for a, b in zip(dist, dist[1:])))
        self.assertLess(dist[-1], 1e-6)
        for r in body:
            for field in r:
                self.assertEqual(field, format(float(field), ".17g"))
        for k, r in enumerate(body):
            self.assertEqual(float(r[0]), 10.0 ** (k + 1))
            exact = 1 / (10.0 ** (k + 1) + 1)
            self.assertLess(abs(float(r[3]) - exact), 1e-15 * exact)

    def test_asymptote_tolerance_and_setup_alias(self):
        with tempfile.TemporaryDirectory() as t:
            out = os.path.join(t, "table.csv")
            code, _, _ = run("asymptote", "--setup", os.path.join(PRESETS, "tate-nn.json"), "--format", "csv", "--out", out, "--tolerance", "1e-6")
            self.assertEqual(code, 0)
            with open(out) as f:
                self.assertEqual(len(f.read().splitlines()), 9)
        code, _, err = run("asymptote", "--preset", "tate-nn", "--decades", "3", "--tolerance", "1e-6")
        self.assertEqual(code, 1)
        self.assertIn("NotConverged", err)

    def test_asymptote_json_limit(self):
        d = ok_json("asymptote", "--preset", "tate-nn", "--decades", "2")
        self.assertEqual(d["limit"], ok_json("sl2-data", "--preset", "tate-nn")["limit"])
        self.assertEqual(d["rows"][0]["ratios"], ["1/11"])

    def test_pushforward_constant(self):
        with tempfile.TemporaryDirectory() as t:
            report = os.path.join(t, "out.json")
            code, _, err = run("pushforward", "--rep", os.path.join(PRESETS, "constant.json"), "--report", report)
            self.assertEqual(code, 0, err)
            with open(report) as f:
                d = json.load(f)
        self.assertEqual(d["dims"], [1, 2, 1])
        self.assertTrue(all(c["member"] for c in d["cohomology"]))
        self.assertEqual(d["cohomology"][2]["frobenius_weights"], {"2": 1})
        self.assertTrue(d["lefschetz"]["iso_in_category"])

    def test_pushforward_unipotent_block(self):
        d = ok_json("pushforward", "--preset", "example-615")
        h1 = d["cohomology"][1]
        self.assertEqual(h1["dimension"], 2)
        self.assertEqual(h1["frobenius_weights"], {"0": 1, "2": 1})
        self.assertTrue(h1["monodromy_trivial"])
        self.assertFalse(h1["member"])

    def test_pushforward_character_is_acyclic(self):
        self.assertEqual(ok_json("pushforward", "--preset", "character-2")["dims"], [0, 0, 0])

    def test_classify_s1(self):
        d = ok_json("classify", "--preset", "s1")
        self.assertEqual(d["pieces"], [{"weight": 1, "parts": [{"r": 1, "weight": 0, "frobenius": [["1"]]}]}])

    def test_deligne_split_and_sl2(self):
        d = ok_json("deligne-split", "--preset", "s1-split")
        self.assertEqual(d["kind"], "splitting")
        s = ok_json("sl2-data", "--preset", "tate-nn-system")
        self.assertEqual(len(s["splittings"]), 3)

    def test_ratios_modes(self):
        doc = {"format": "monodromy-lab/1", "kind": "ratio-point", "monoid": {"ambient_rank": 2, "generators": [[1, 0], [0, 1], [1, 1]]},
               "chain": {"faces": [[0], [0, 1]], "witnesses": [["3", "0"], ["1", "2"]]}}
        text = json.dumps(doc)
        v = json.loads(run("ratios", "--in", "-", stdin=text)[1])
        self.assertFalse(v["rank_one"])
        self.assertEqual(v["point"]["chain"]["witnesses"], [["1", "0"], ["1/2", "1"]])
        e = json.loads(run("ratios", "--in", "-", "--mode", "evaluate", stdin=text)[1])
        self.assertEqual(e["values"][1], ["0", "1", "0"])
        self.assertEqual(e["values"][0][1], "inf")
        s = json.loads(run("ratios", "--in", "-", "--mode", "sample", "--decades", "3", stdin=text)[1])
        self.assertEqual(len(s["samples"]), 3)
        doc["chain"]["witnesses"][0] = ["3", "1"]
        code, _, err = run("ratios", "--in", "-", stdin=json.dumps(doc))
        self.assertEqual(code, 1)
        self.assertIn("NotInterior", err)


class InputErrors(unittest.TestCase):
    def test_exit_2(self):
        cases = [
            (["rmf"], None),
            (["rmf", "--preset", "no-such-preset"], None),
            (["rmf", "--in", "-"], "{ not json"),
            (["rmf", "--in", "-"], json.dumps({"format": "monodromy-lab/1", "kind": "rmf", "dimension": 2})),
            (["check", "--preset", "s1", "--format", "csv"], None),
            (["asymptote", "--preset", "tate-nn", "--schedule", "linear"], None),
            (["frobnicate"], None),
        ]
        for args, stdin in cases:
            code, _, err = run(*args, stdin=stdin)
            self.assertEqual(code, 2, f"{args}: {err}")

    def test_diagnostics_name_line_and_field(self):
        _, _, err = run("rmf", "--in", "-", stdin='{\n"format": "monodromy-lab/1",\n"kind": }')
        self.assertIn("line 3", err)
        bad = {"format": "monodromy-lab/1", "kind": "rmf", "dimension": 2, "weight_filtration": [{"weight": 1, "basis": [["1", "0"], ["0", "1"]]}],
               "nilpotent": [["0", "1"], ["0", 0.5]]}
        _, _, err = run("rmf", "--in", "-", stdin=json.dumps(bad))
        self.assertIn("nilpotent[1][1]", err)


class RoundTrip(unittest.TestCase):
    def normalize(self, text):
        code, out, err = run("normalize", "--in", "-", stdin=text)
        self.assertEqual(code, 0, err)
        return out

    def test_presets_are_canonical(self):
        for name in sorted(os.listdir(PRESETS)):
            with open(os.path.join(PRESETS, name)) as f:
                text = f.read()
            self.assertEqual(self.normalize(text), text, name)

    def test_emitted_documents_reingest(self):
        emitted = [
            run("rmf", "--preset", "s1")[1],
            run("deligne-split", "--preset", "s1-split")[1],
            run("sl2-data", "--preset", "tate-nn")[1],
        ]
        for name in ("constant", "example-615"):
            for c in ok_json("pushforward", "--preset", name)["cohomology"]:
                emitted.append(json.dumps(c["object"], indent=2) + "\n")
        emitted.append(json.dumps(ok_json("classify", "--preset", "s1")["model"], indent=2) + "\n")
        point = {"format": "monodromy-lab/1", "kind": "ratio-point", "monoid": {"ambient_rank": 2, "generators": [[1, 0], [0, 1]]},
                 "chain": {"faces": [[0, 1]], "witnesses": [["2", "6"]]}}
        code, out, _ = run("ratios", "--in", "-", stdin=json.dumps(point))
        emitted.append(json.dumps(json.loads(out)["point"], indent=2) + "\n")
        for text in emitted:
            self.assertEqual(self.normalize(text), text)

    def test_deterministic(self):
        a = run("pushforward", "--preset", "example-615")[1]
        b = run("pushforward", "--preset", "example-615")[1]
        self.assertEqual(a, b)


if __name__ == "__main__":
    unittest.main(verbosity=2)
