import json
import subprocess
import sys

import pytest

from monadext.cli import JobConfig, ConfigError, emit_report, main, parse_table, run_job, table_to_json
from monadext.errors import ParseError, PreconditionError, ResourceGuardError
from monadext.finset import cyclic_group

Z2_JSON = '{"elements": ["0", "1"], "table": [["0", "1"], ["1", "0"]]}'
BAD_JSON = '{"elements": ["a", "b"], "table": [["b", "a"], ["a", "a"]]}'


@pytest.fixture
def z2_file(tmp_path):
    p = tmp_path / "z2.json"
    p.write_text(Z2_JSON)
    return p


@pytest.fixture
def bad_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(BAD_JSON)
    return p


def test_parse_round_trip():
    op = parse_table(Z2_JSON)
    assert op.table == cyclic_group(2).table
    assert json.loads(table_to_json(op)) == json.loads(Z2_JSON)


@pytest.mark.parametrize("text,msg", [
    ("{", "invalid JSON"),
    ('{"elements": []}', "elements"),
    ('{"elements": ["a", "a"], "table": [["a","a"],["a","a"]]}', "duplicate"),
    ('{"elements": ["a,b"], "table": [["a,b"]]}', "reserved"),
    ('{"elements": ["a", "b"], "table": [["a", "b"]]}', "2 rows"),
    ('{"elements": ["a", "b"], "table": [["a", "b"], ["a"]]}', "row 1"),
    ('{"elements": ["a", "b"], "table": [["a", "b"], ["a", "c"]]}', "row 1, column 1"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        parse_table(text)


def test_run_job_exp_z2():
    report = run_job(JobConfig("exp"), parse_table(Z2_JSON))
    assert report.exit_code == 0
    assert report.table["rows"][2] == ["{0,1}", "{0,1}", "{0,1}"]
    idem = next(c for c in report.checks if c.name == "idempotents")
    assert idem.details["idempotents"] == ["{0}", "{0,1}"]
    assert report.to_dict()["timing"] is None


def test_run_job_refuses_nonassociative():
    with pytest.raises(PreconditionError, match="allow-nonassociative"):
        run_job(JobConfig("exp", checks=("associativity",)), parse_table(BAD_JSON))


def test_run_job_nonassociative_allowed_fails():
    report = run_job(JobConfig("exp", checks=("associativity",), allow_nonassociative=True),
                     parse_table(BAD_JSON))
    assert report.exit_code == 1


def test_config_validation():
    with pytest.raises(ConfigError):
        JobConfig("nope").validate()
    with pytest.raises(ConfigError):
        JobConfig("exp", checks=("laws", "magic")).validate()
    with pytest.raises(ConfigError):
        JobConfig("prob", checks=("idempotents",)).validate()


def test_max_carrier_guard():
    with pytest.raises(ResourceGuardError):
        run_job(JobConfig("exp", checks=("laws",), max_carrier=2), parse_table(Z2_JSON))


def test_prob_sampled_job():
    report = run_job(JobConfig("prob", checks=("laws", "uniqueness", "oracles"), mode="sampled",
                               samples=200), parse_table(Z2_JSON))
    assert report.exit_code == 0 and report.table is None


def test_exit_codes(z2_file, bad_file, tmp_path, capsys):
    assert main(["--monad", "exp", "--input", str(z2_file)]) == 0
    assert main(["--monad", "exp", "--input", str(bad_file)]) == 2
    assert main(["--monad", "exp", "--input", str(bad_file), "--check", "associativity",
                 "--allow-nonassociative"]) == 1
    assert main(["--monad", "exp", "--input", str(z2_file), "--max-carrier", "1"]) == 3
    assert main(["--monad", "exp", "--input", str(tmp_path / "missing.json")]) == 2
    err = capsys.readouterr().err
    assert "resource guard" in err


def test_text_format(z2_file, capsys):
    assert main(["--monad", "exp", "--input", str(z2_file), "--format", "text",
                 "--check", "laws,idempotents"]) == 0
    out = capsys.readouterr().out
    assert "extended table:" in out and "{0}, {0,1}" in out


def test_json_is_byte_identical(z2_file, tmp_path):
    outs = []
    for k in range(2):
        dest = tmp_path / f"r{k}.json"
        assert main(["--monad", "lambda", "--input", str(z2_file), "--mode", "sampled",
                     "--samples", "300", "--seed", "5", "--output", str(dest)]) == 0
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["schema"] == "monadext.report/1" and doc["job"]["seed"] == 5


def test_module_entry_point(z2_file):
    run = subprocess.run([sys.executable, "-m", "monadext", "--monad", "id", "--input", str(z2_file),
                          "--check", "laws"], capture_output=True, text=True)
    assert run.returncode == 0
    assert json.loads(run.stdout)["checks"][0]["status"] == "pass"


def test_emit_report_rejects_format():
    report = run_job(JobConfig("id", checks=("laws",)), parse_table(Z2_JSON))
    with pytest.raises(ValueError):
        emit_report(report, "xml")
