import json

import pytest

from resorbit.cli import EXIT_OK, EXIT_VALIDATION, main


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def read_report(path):
    return json.loads(path.read_text())


class TestValidation:
    def test_missing_input(self, capsys):
        assert main(["analyze-sr"]) == EXIT_VALIDATION

    def test_bad_json(self, tmp_path, capsys):
        p = tmp_path / "in.json"
        p.write_text("{not json")
        assert main(["analyze-sr", "--input", str(p)]) == EXIT_VALIDATION

    def test_unknown_coefficient_name(self, tmp_path):
        p = write_json(tmp_path / "in.json", {"kind": "SR", "reduced": {"q": 1.0}})
        assert main(["analyze-sr", "--input", p]) == EXIT_VALIDATION

    def test_bad_kind(self, tmp_path):
        p = write_json(tmp_path / "in.json", {"kind": "XX", "reduced": {"n": 1.0}})
        assert main(["analyze-sr", "--input", p]) == EXIT_VALIDATION


class TestAnalyzeSR:
    def test_elliptic_run(self, tmp_path):
        inp = write_json(tmp_path / "in.json", {"kind": "SR", "reduced": {"n": 1.0}})
        out = tmp_path / "report.json"
        assert main(["analyze-sr", "--input", inp, "--output", str(out)]) == EXIT_OK
        rep = read_report(out)
        assert rep["results"]["geometry"] == "Elliptic"
        assert rep["results"]["n_branches"] == 2
        assert (tmp_path / "report_cone.csv").exists()
        assert (tmp_path / "report_branches.csv").exists()
        assert (tmp_path / "report_overview.png").exists()

    def test_hyperbolic_run(self, tmp_path):
        inp = write_json(tmp_path / "in.json", {"kind": "SR", "reduced": {"c": 1.0}})
        out = tmp_path / "report.json"
        assert main(["analyze-sr", "--input", inp, "--output", str(out)]) == EXIT_OK
        rep = read_report(out)
        assert rep["results"]["geometry"] == "Hyperbolic"
        assert rep["results"]["n_branches"] == 0


class TestAnalyzeAE:
    def test_example_62(self, tmp_path):
        inp = write_json(
            tmp_path / "in.json",
            {"kind": "AE", "reduced": {"a1": 1, "a2": 5, "b2": 1, "c1": 2, "c2": 2}},
        )
        out = tmp_path / "ae.json"
        assert main(["analyze-ae", "--input", inp, "--output", str(out)]) == EXIT_OK
        rep = read_report(out)
        assert rep["results"]["n_real_v1"] == 2
        assert rep["results"]["bezout_account"]["complete"] is True
        assert rep["results"]["nonexistence"]["liapunov_coefficient"] == 3.0
        assert (tmp_path / "ae_roots.csv").exists()
        assert (tmp_path / "ae_roots.png").exists()

    def test_roots_table_has_echo_columns(self, tmp_path):
        inp = write_json(
            tmp_path / "in.json",
            {"kind": "AE", "reduced": {"a1": 1, "a2": 5, "b2": 1, "c1": 2, "c2": 2}},
        )
        out = tmp_path / "ae.json"
        main(["roots", "--input", inp, "--output", str(out)])
        table = (tmp_path / "ae_roots.csv").read_text().splitlines()
        assert "t_re_4dp" in table[0]
        reals = [ln for ln in table[1:] if ln.startswith("v1,1")]
        assert any("-4.0000" in ln for ln in reals)

    def test_roots_lists_twelve_chart_roots_with_listed_values(self, tmp_path):
        inp = write_json(
            tmp_path / "in.json",
            {"kind": "AE", "reduced": {"a1": 1, "a2": 5, "b2": -2, "c1": 2, "c2": 2}},
        )
        out = tmp_path / "roots63.json"
        assert main(["roots", "--input", inp, "--output", str(out)]) == EXIT_OK
        rep = read_report(out)
        v1 = [s for s in rep["results"]["solutions"] if s["chart"] == "v1"]
        assert len(v1) == 12
        reals = [s for s in v1 if s["is_real"]]
        assert len(reals) == 4
        listed = (1.5602, -0.9681, 0.0855, 0.2354)
        hit = any(
            max(
                abs(s["point"]["t"]["re"] - listed[0]),
                abs(s["point"]["u"]["re"] - listed[1]),
                abs(s["point"]["w"]["re"] - listed[2]),
                abs(s["point"]["x"]["re"] - listed[3]),
            )
            <= 5e-4
            for s in reals
        )
        assert hit

    def test_table_format_writes_primary_table(self, tmp_path):
        inp = write_json(
            tmp_path / "in.json",
            {"kind": "AE", "reduced": {"a1": 1, "a2": 5, "b2": 1, "c1": 2, "c2": 2}},
        )
        out = tmp_path / "roots.csv"
        assert main(["roots", "--input", inp, "--output", str(out), "--format", "table"]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].startswith("chart,")
        assert len([ln for ln in lines[1:] if ln.startswith("v1,")]) == 12


class TestAnalyzeCombined:
    def test_torus_outputs(self, tmp_path):
        inp = write_json(tmp_path / "in.json", {"kind": "COMBINED", "reduced": {"n": 1.0}})
        out = tmp_path / "cmb.json"
        assert main(["analyze-combined", "--input", inp, "--output", str(out)]) == EXIT_OK
        rows = (tmp_path / "cmb_torus.csv").read_text().splitlines()
        fixsr = [r for r in rows if r.endswith(",FixSR")]
        assert len(fixsr) == 2
        fixr = [r for r in rows if r.endswith(",FixR")]
        for row in fixr:
            t1, _, t2, _, _ = row.split(",")
            assert float(t1) == pytest.approx(float(t2))
        # line loci carry exactly the sampling density
        assert len(fixr) == 256
        assert len([r for r in rows if r.endswith(",FixS")]) == 256
        assert len([r for r in rows if r.endswith(",FixSpi")]) == 256
        assert (tmp_path / "cmb_torus.png").exists()


class TestDerive:
    def test_round_trip_through_cli(self, tmp_path):
        from resorbit.normalform import realize_sr

        spec = realize_sr(1.25, -0.5, 0.75)
        terms = [
            {"exps": list(e), "coeff": c.real}
            for e, c in sorted(spec.H.terms.items())
        ]
        inp = write_json(tmp_path / "h.json", {"kind": "SR", "hamiltonian": {"terms": terms}})
        out = tmp_path / "derived.json"
        assert main(["derive", "--input", inp, "--output", str(out)]) == EXIT_OK
        rep = read_report(out)
        co = rep["results"]["coefficients"]
        assert co["n"] == pytest.approx(1.25, abs=1e-12)
        assert co["c"] == pytest.approx(-0.5, abs=1e-12)
        assert co["d"] == pytest.approx(0.75, abs=1e-12)

    def test_wrong_quadratic_part_rejected(self, tmp_path):
        inp = write_json(
            tmp_path / "h.json",
            {"kind": "SR", "hamiltonian": {"terms": [{"exps": [2, 0, 0, 0], "coeff": 1.0}]}},
        )
        assert main(["derive", "--input", inp]) == EXIT_VALIDATION


class TestReproduce:
    def test_single_case(self, tmp_path, capsys):
        out = tmp_path / "rep.json"
        assert main(["reproduce", "--case", "sr-dichotomy", "--output", str(out)]) == EXIT_OK
        rep = read_report(out)
        assert rep["results"]["cases"][0]["status"] == "PASS"

    def test_fast_corpus_cases_pass(self, tmp_path):
        for case in ("combined-torus", "derive-ae", "continuation-curvature"):
            assert main(["reproduce", "--case", case]) == EXIT_OK


class TestDeterminism:
    def test_identical_request_and_seed(self, tmp_path):
        inp = write_json(
            tmp_path / "in.json",
            {"kind": "AE", "reduced": {"a1": 1, "a2": 5, "b2": 1, "c1": 2, "c2": 2}},
        )
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        main(["analyze-ae", "--input", inp, "--output", str(out1), "--seed", "7"])
        main(["analyze-ae", "--input", inp, "--output", str(out2), "--seed", "7"])
        r1, r2 = read_report(out1), read_report(out2)
        r1.pop("generated_at")
        r2.pop("generated_at")
        assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)

    def test_request_echoed(self, tmp_path):
        doc = {"kind": "AE", "reduced": {"a1": 1, "a2": 5, "b2": 1, "c1": 2, "c2": 2}}
        inp = write_json(tmp_path / "in.json", doc)
        out = tmp_path / "r.json"
        main(["analyze-ae", "--input", inp, "--output", str(out)])
        assert read_report(out)["request"] == doc


class TestVerifyCommand:
    def test_verify_sr_axis(self, tmp_path):
        inp = write_json(tmp_path / "in.json", {"kind": "SR", "reduced": {"n": 1.0}})
        out = tmp_path / "v.json"
        code = main([
            "verify", "--input", inp, "--output", str(out),
            "--sweep-radii", "0.01,0.005",
        ])
        assert code == EXIT_OK
        rep = read_report(out)
        assert rep["results"]["n_converged"] > 0
        assert rep["results"]["n_failed"] == 0
        orbits = rep["results"]["orbits"]
        assert any(o["symmetry"] == "NonSymmetric_paired" for o in orbits)
        assert all(o["residual"] <= 1e-9 for o in orbits)
