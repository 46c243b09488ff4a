from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest

from invariant_quartics import cli
from invariant_quartics.registry import DATA_DIR_ENV, _groups_from_dir

DATA = Path(__file__).resolve().parents[1] / "src" / "invariant_quartics" / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def canonical(text: str) -> str:
    return json.dumps(json.loads(text), indent=2, sort_keys=True, ensure_ascii=False)


def test_groups_list_table(capsys):
    code, out, _ = run(capsys, "groups", "list")
    assert code == 0
    lines = [l for l in out.splitlines() if l and not l.startswith(("name", "-"))]
    assert len(lines) == 19
    assert any("Z2^4 . S5" in l and "1920" in l for l in lines)
    assert any(l.startswith("P ") and "168" in l and "PSL(2,7)" in l for l in lines)


def test_groups_list_json_round_trip(capsys):
    code, out, _ = run(capsys, "groups", "list", "--json")
    assert code == 0
    assert out == canonical(out) + "\n"
    rows = json.loads(out)["groups"]
    orders = {r["name"]: r["order"] for r in rows}
    assert orders["19deg"] == 1920
    assert orders["1deg"] == 144
    assert orders["16deg"] == orders["17deg"] == 960
    assert not json.loads(out)["groups"][0].get("missing")


def test_invariants_table_and_json(capsys):
    code, out, _ = run(capsys, "invariants", "--group", "13deg", "--degree", "4")
    assert code == 0
    assert "5 invariant subspace(s)" in out

    code, out, _ = run(
        capsys, "invariants", "--group", "Q5", "--degree", "4", "--json"
    )
    assert code == 0
    assert out == canonical(out) + "\n"
    payload = json.loads(out)
    assert payload["subspaces"] == []

    code, out, _ = run(capsys, "invariants", "--group", "H", "--degree", "4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert [s["dimension"] for s in payload["subspaces"]] == [2]


def test_invariants_classify(capsys):
    code, out, _ = run(
        capsys,
        "invariants", "--group", "Q4", "--degree", "4", "--classify", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    verdicts = [v["verdict"] for s in payload["subspaces"] for v in s["verdicts"]]
    assert verdicts == ["singular"]


def test_invariants_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["invariants", "--degree", "4"])
    assert exc.value.code == 2
    capsys.readouterr()

    code, _, err = run(capsys, "invariants", "--group", "nope", "--degree", "4")
    assert code == 3
    assert "nope" in err


def test_smooth_json(capsys):
    code, out, _ = run(
        capsys,
        "smooth", "--form", "x0^4 + x1^4 + x2^4 + x3^4", "--conductor", "1", "--json",
    )
    assert code == 0
    assert out == canonical(out) + "\n"
    payload = json.loads(out)
    assert payload["verdict"] == "smooth"
    assert payload["certificate"]["kind"] == "discriminant_nonzero"


def test_smooth_parse_error(capsys):
    code, _, err = run(capsys, "smooth", "--form", "x0^4 + nope", "--conductor", "1")
    assert code == 3
    assert "parse error" in err


def test_smooth_non_homogeneous(capsys):
    code, _, err = run(capsys, "smooth", "--form", "x0^4 + x1^3", "--conductor", "1")
    assert code == 3


def test_pencil_explicit_members(capsys):
    code, out, _ = run(
        capsys,
        "pencil",
        "--f0", "x0^4",
        "--f1", "x2*x1^3 + x3^3*x1 + x2^3*x3",
        "--conductor", "1",
        "--json",
    )
    assert code == 0
    payload = json.loads(out)
    rec = payload["primes"][0]
    assert rec["roots"] == [0]
    assert rec["top_coefficient"] == 0
    assert payload["match"] is None


def test_pencil_not_a_pencil(capsys):
    code, _, err = run(
        capsys, "pencil", "--f0", "x0^4", "--f1", "2*x0^4", "--conductor", "1"
    )
    assert code == 3


def test_pencil_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["pencil", "--f0", "x0^4"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_pencil_curated_group(capsys):
    code, out, _ = run(capsys, "pencil", "--group", "P", "--primes", "1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["match"] is True
    fibers = payload["primes"][0]["fibers"]
    assert all(f["confirmed"] for f in fibers)


def test_verify_equivalence_cli(tmp_path, capsys):
    wit = tmp_path / "w.json"
    wit.write_text(
        json.dumps(
            {
                "conductor": 1,
                "rows": [
                    ["1", "0", "0", "0"],
                    ["0", "1", "0", "0"],
                    ["0", "0", "1", "0"],
                    ["0", "0", "0", "-1"],
                ],
            }
        ),
        encoding="utf-8",
    )
    h12 = "x0^4 + x1^4 + x2^4 + x3^4 + 12*x0*x1*x2*x3"
    h12n = "x0^4 + x1^4 + x2^4 + x3^4 - 12*x0*x1*x2*x3"
    code, out, _ = run(
        capsys,
        "verify-equivalence", "--witness", str(wit),
        "--from", h12, "--to", h12n, "--conductor", "1",
    )
    assert code == 0
    assert "verified" in out

    code, out, _ = run(
        capsys,
        "verify-equivalence", "--witness", str(wit),
        "--from", h12, "--to", "x0^4", "--conductor", "1",
    )
    assert code == 1

    code, _, err = run(
        capsys,
        "verify-equivalence", "--witness", str(tmp_path / "missing.json"),
        "--from", h12, "--to", h12n, "--conductor", "1",
    )
    assert code == 3


def test_reproduce_single_group(capsys):
    code, out, _ = run(capsys, "reproduce-paper", "--only", "Q4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["match"] is True
    assert [g["group"] for g in payload["groups"]] == ["Q4"]
    assert payload["pencils"] == []


def _clear_registry_caches():
    _groups_from_dir.cache_clear()


def test_reproduce_detects_corrupted_group(tmp_path, monkeypatch, capsys):
    """Swap in wrong generators for 19deg and check the diff goes red."""
    for grp in DATA.glob("*.grp"):
        shutil.copy(grp, tmp_path / grp.name)
    fake = (DATA / "13deg.grp").read_text(encoding="utf-8")
    (tmp_path / "19deg.grp").write_text(
        fake.replace("group 13deg", "group 19deg", 1), encoding="utf-8"
    )
    monkeypatch.setenv(DATA_DIR_ENV, str(tmp_path))
    _clear_registry_caches()
    try:
        code, out, _ = run(capsys, "reproduce-paper", "--only", "19deg", "--json")
        assert code == 1
        payload = json.loads(out)
        assert payload["match"] is False
        rec = payload["groups"][0]
        assert rec["match"] is False
    finally:
        monkeypatch.delenv(DATA_DIR_ENV)
        _clear_registry_caches()


def test_unknown_subcommand_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["fly"])
    assert exc.value.code == 2
    capsys.readouterr()
