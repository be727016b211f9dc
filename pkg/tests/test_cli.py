import contextlib
import io
import json

from defifix.cli import OUTPUT_SCHEMA_VERSION, build_parser, main, render, run


def invoke(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def payload(*argv):
    code, out = invoke(*argv)
    return code, json.loads(out)


def test_fixed_field_f4_bytes():
    code, out = invoke("fixed-field", "--field", "F2^2")
    assert code == 0
    assert out == '{"fixed": ["[0]","[1]"]}\n'


def test_nbhd_check_yes():
    code, data = payload("nbhd", "check", "--field", "F7",
                         "--elements", "1,2", "--target", "2")
    assert code == 0
    assert data["neighbourhood"] is True
    assert data["elements"] == ["[1]", "[2]"]


def test_nbhd_check_no_carries_witness():
    code, data = payload("nbhd", "check", "--field", "F7",
                         "--elements", "1,5", "--target", "5")
    assert code == 1
    assert data["neighbourhood"] is False
    w = data["witness"]
    assert ["[5]", "[0]"] in w["pairs"]
    assert w["moves_target_to"] != "[5]"


def test_normalize_counts():
    code, data = payload("normalize", "--formula", "exists y. ~(y=0) & x*y=1")
    assert code == 0
    assert data["negations_eliminated"] == 1
    assert data["fresh_variables"] == 1
    assert data["free_variable"] == "x"
    assert len(data["systems"]) == 1


def test_parse_reports_free_variables():
    code, data = payload("parse", "--formula", "exists y. x = y + z")
    assert code == 0
    assert data["free_variables"] == ["x", "z"]


def test_parse_syntax_error_exit_2():
    code, data = payload("parse", "--formula", "exists y. x = +")
    assert code == 2
    assert data["error"]["code"] == "syntax"


def test_eval_true_and_false():
    code, data = payload("eval", "--formula", "x = 1", "--field", "F5",
                         "--assign", "x=1")
    assert code == 0
    assert data["value"] is True
    code, data = payload("eval", "--formula", "x = 1", "--field", "F5",
                         "--assign", "x=2")
    assert code == 1
    assert data["value"] is False
    assert data["reason"]


def test_eval_with_predicate_table():
    code, data = payload("eval", "--formula", "U(x)", "--field", "F5",
                         "--assign", "x=3", "--pred", "U=1;3")
    assert code == 0
    assert data["value"] is True


def test_nbhd_maps_f4():
    code, data = payload("nbhd", "maps", "--field", "F2^2",
                         "--elements", "[0],[1],[0,1],[1,1]")
    assert code == 0
    assert data["count"] == 2
    identities = [m["identity"] for m in data["maps"]]
    assert identities.count(True) == 1


def test_nbhd_certify_rationals():
    code, data = payload("nbhd", "certify", "--field", "Q",
                         "--elements", "1,2", "--target", "2")
    assert code == 0
    assert data["certified"] is True


def test_nbhd_rational_defaults_to_q():
    code, data = payload("nbhd", "rational", "--q", "5/3")
    assert code == 0
    assert data["field"] == "Q"
    assert data["target"] == "5/3"
    assert data["certified"] is True


def test_nbhd_rational_vanishing_denominator_exit_2():
    code, data = payload("nbhd", "rational", "--q", "1/7", "--field", "F7")
    assert code == 2
    assert data["error"]["code"] == "input"


def test_compile_to_formula():
    code, data = payload("compile", "to-formula", "--field", "F7",
                         "--elements", "1,2", "--target", "2")
    assert code == 0
    assert data["formula"] == "exists x2. (x2 = 1 & 2*x2 = x1)"
    assert data["free_variable"] == "x1"


def test_compile_to_formula_not_defining_exit_1():
    code, data = payload("compile", "to-formula", "--field", "F7",
                         "--elements", "1,5", "--target", "5")
    assert code == 1
    assert data["error"]["code"] == "not-defining"
    assert data["reason"]


def test_compile_from_formula_round_trip():
    code, data = payload("compile", "from-formula", "--field", "F7",
                         "--formula", "exists y. (x = y + y & y = 1)")
    assert code == 0
    assert data["neighbourhood"]["elements"] == ["[1]", "[2]"]
    assert data["neighbourhood"]["target_index"] == 1


def test_compile_from_formula_not_singleton_lists_set():
    code, data = payload("compile", "from-formula", "--field", "F5",
                         "--formula", "exists y. x = y*y")
    assert code == 1
    assert data["error"]["code"] == "not-singleton"
    assert data["definable"] == ["[0]", "[1]", "[4]"]


def test_compile_single_eq_prefer_linear():
    code, data = payload("compile", "single-eq", "--field", "F7",
                         "--elements", "0,1,2", "--target", "2",
                         "--prefer-linear")
    assert code == 0
    assert data["formula"] == "x + 5 = 0"


def test_curve_lab_all_claims_hold():
    code, data = payload("curve-lab", "--field", "F5",
                         "--poly", "y^2 - x^3 - x")
    assert code == 0
    rep = data["report"]
    assert rep["identity_on_w_image"] is True
    assert all(row["is_neighbourhood"] for row in rep["per_k"])


def test_schema_emit_with_polynomials():
    code, data = payload("schema", "emit", "--name", "robinson",
                         "--U", "y^2 - 2", "--V", "y")
    assert code == 0
    assert data["formula"] == "exists y. (y^2 - 2 = 0 & x = y)"


def test_schema_emit_missing_param_exit_2():
    code, data = payload("schema", "emit", "--name", "robinson")
    assert code == 2
    assert data["error"]["code"] == "schema"


def test_fixed_field_infinite_exit_2():
    code, data = payload("fixed-field", "--field", "Q")
    assert code == 2
    assert data["error"]["code"] == "infinite-field"


def test_identical_invocations_byte_identical():
    argv = ("curve-lab", "--field", "F5", "--poly", "y^2 - x^3 - x")
    assert invoke(*argv) == invoke(*argv)
    argv = ("nbhd", "rational", "--q", "5/3", "--seed", "9")
    assert invoke(*argv) == invoke(*argv)


def test_cap_env_override(monkeypatch):
    # 5 is unconstrained by the facts on {1,5}, so there are 7 maps
    monkeypatch.setenv("DEFIFIX_CAP", "1")
    code, data = payload("nbhd", "maps", "--field", "F7", "--elements", "1,5")
    assert code == 1
    assert data["error"]["code"] == "cap-exceeded"
    # explicit --cap beats the env var
    code, data = payload("nbhd", "maps", "--field", "F7",
                         "--elements", "1,5", "--cap", "1000")
    assert code == 0
    assert data["count"] == 7


def test_formula_from_file(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("x = 1\n")
    code, data = payload("parse", "--in", str(p))
    assert code == 0
    assert data["formula"] == "x = 1"


def test_bracketed_element_parsing():
    code, data = payload("nbhd", "check", "--field", "F3^2",
                         "--elements", "[0,1],[1],[2,2]", "--target", "[0,1]")
    assert code in (0, 1)
    assert data["elements"] == ["[0,1]", "[1]", "[2,2]"]


def test_text_format_renders_nested_report():
    code, out = invoke("eval", "--formula", "x = 1", "--field", "F5",
                       "--assign", "x=1", "--format", "text")
    assert code == 0
    assert "value: true" in out


def test_render_json_separators():
    assert render({"a": [1, 2]}, "json") == '{"a": [1,2]}'


def test_usage_error_exit_2():
    # argparse failures must not escape as SystemExit tracebacks
    code, out = invoke("nbhd", "check", "--field", "F7", "--target", "2")
    assert code == 2


def test_run_returns_schema_version_constant():
    assert OUTPUT_SCHEMA_VERSION == 1
    parser = build_parser()
    args = parser.parse_args(["fixed-field", "--field", "F2"])
    code, data = run(args)
    assert code == 0
    assert data == {"fixed": ["[0]", "[1]"]}
