import json

from click.testing import CliRunner

from hermdens.cli import main

runner = CliRunner()


def run(*args, **kwargs):
    return runner.invoke(main, list(args), **kwargs)


def all_text(result):
    try:
        return result.output + result.stderr
    except ValueError:
        return result.output


def test_cy_lam():
    result = run("cy", "--n", "4", "--h", "2", "--lam", "2,1,1")
    assert result.exit_code == 0
    assert "D(4,2; lam=2,1,1) = (-q^2 + 1)/(1)" in result.output
    assert "at q=3: -8" in result.output


def test_cy_profile():
    result = run("cy", "--n", "3", "--h", "1", "--profile", "3,0,0")
    assert result.exit_code == 0
    assert "at q=3: -224" in result.output


def test_cy_requires_one_input():
    assert run("cy", "--n", "3", "--h", "1").exit_code == 2
    both = run("cy", "--n", "3", "--h", "1", "--profile", "3,0,0",
               "--lam", "2,1,1")
    assert both.exit_code == 2


def test_cy_domain_error_named():
    result = run("cy", "--n", "2", "--h", "2", "--lam", "0,0")
    assert result.exit_code == 2
    assert "ERROR InvalidProfile:" in all_text(result)


def test_lam_must_be_nonincreasing():
    result = run("cy", "--n", "3", "--h", "1", "--lam", "1,2")
    assert result.exit_code == 2


def test_pden_rank1():
    result = run("pden", "--lam", "3", "--h", "0")
    assert result.exit_code == 0
    assert "at q=3: 2" in result.output


def test_pden_parity_error():
    result = run("pden", "--lam", "2", "--h", "0")
    assert result.exit_code == 2
    assert "ERROR ParityMismatch:" in all_text(result)


def test_pden_prim_value():
    result = run("pden-prim", "--lam", "2,1,0", "--n", "4", "--h", "2",
                 "--xval", "2")
    assert result.exit_code == 0
    assert result.output.strip().endswith("at q=3: 25")


def test_pden_prim_rank_guard():
    result = run("pden-prim", "--lam", "2,1", "--n", "4", "--h", "2",
                 "--xval", "2")
    assert result.exit_code == 2


def test_fourier_all_routes_agree():
    result = run("fourier", "--lam", "3,1,0", "--n", "4", "--h", "2",
                 "--xval", "-1", "--route", "all")
    assert result.exit_code == 0
    assert "agree: true" in result.output


def test_fourier_closed_zero():
    result = run("fourier", "--lam", "9,9,9", "--n", "4", "--h", "2",
                 "--xval", "-2")
    assert result.exit_code == 0
    assert "closed-form: (0)/(1)" in result.output


def test_mu_enumerate():
    result = run("mu", "--lam", "2,1", "--enumerate")
    assert result.exit_code == 0
    assert "mu(2,1) = (q^2)/(1)" in result.output
    assert "enumerated: 9" in result.output


def test_mu_window_guard():
    result = run("mu", "--lam", "1,0", "--which", "mu_plus")
    assert result.exit_code == 2
    assert "ERROR InvalidInvariants:" in all_text(result)


def test_ratio_checked():
    result = run("ratio", "--n", "2", "--lam", "3")
    assert result.exit_code == 0
    assert "counted: 9" in result.output


def test_oracle_json():
    result = run("oracle", "--m", "0", "--l", "0")
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["schema"] == 1
    assert data["stabilized"] is True
    assert data["count"] == 12
    assert data["d"] == 2
    assert data["normalized"] == "4/3"


def test_oracle_poly_json():
    result = run("oracle", "--m", "1", "--l", "1", "--poly", "2")
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["coeffs"] == ["1", "2", "1"]
    assert data["derivative"] == "-4"


def test_verify_single_suite():
    result = run("verify", "--suite", "T-TABLE")
    assert result.exit_code == 0
    assert "PASS T-TABLE" in result.output
    assert "all suites passed" in result.output


def test_verify_unknown_suite():
    assert run("verify", "--suite", "T-NOPE").exit_code == 2


def test_table_json_group():
    result = run("table", "--group", "rank3", "--output", "json")
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["schema"] == 1
    assert data["q0"] == 3
    rows = data["groups"]["rank3"]
    assert len(rows) == 4
    assert rows[0]["D"]


def test_table_csv_sections():
    result = run("table", "--group", "all")
    assert result.exit_code == 0
    assert "# group=rank3" in result.output
    assert "# group=dden" in result.output
    assert "n,h,a,b,c,parity,D,D_at_q0" in result.output
    assert "n,h,lam,x,value_at_q0" in result.output


def test_config_file_defaults_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("q0=5  # evaluation prime\noutput=json\n")
    result = run("--config", str(cfg), "table", "--group", "rank3")
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["q0"] == 5
    assert any(row["D_at_q0"] == "-3024" for row in data["groups"]["rank3"])
    flag_wins = run("--config", str(cfg), "table", "--group", "rank3",
                    "--q0", "3")
    assert json.loads(flag_wins.output)["q0"] == 3


def test_table_deterministic():
    first = run("table", "--group", "fourier")
    second = run("table", "--group", "fourier")
    assert first.output == second.output


def test_suites_listing():
    result = run("suites")
    assert result.exit_code == 0
    assert "T-ORACLE" in result.output
    assert "T-TABLE" in result.output
