from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from toda_topo import cli
from toda_topo.snf import IntMatrix


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_homology_a2_json():
    code, out, _ = run("homology", "--type", "A2", "--json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "1"
    assert data["betti"] == [1, 3, 0] and data["torsion"] == [[], [2], []]
    assert data["dims"] == [4, 12, 6] and data["euler"] == -2


def test_homology_a1_json():
    data = json.loads(run("homology", "--type", "A1", "--json")[1])
    assert data["betti"] == [1, 1]


def test_homology_text_and_export(tmp_path):
    code, out, _ = run("homology", "--type", "A2", "--export-dir", str(tmp_path))
    assert code == 0 and "H_1 = Z^3 + Z/2" in out
    text = (tmp_path / "boundary_2.txt").read_text()
    header, body = text.split("\n", 1)
    nrows, ncols = map(int, header[1:].split())
    m = IntMatrix.from_triplet_text(body, nrows, ncols)
    assert (nrows, ncols) == (12, 6) and m.nnz() > 0


def test_rootsys_info():
    data = json.loads(run("rootsys", "info", "--type", "g2", "--json")[1])
    assert data["weyl_order"] == 12 and data["type"] == "G2"


def test_cells_and_classify():
    data = json.loads(run("cells", "--type", "A2", "--list", "--json")[1])
    assert data["counts"] == [4, 12, 6] and len(data["cells"]) == 22
    code, out, _ = run("classify", "--type", "A2", "--chamber", "s1", "--point", "-1,0.5")
    assert code == 0 and out.strip() == "(R+,s1) = (R-,e)"


def test_toda_simulate_outputs():
    args = ["toda", "simulate", "--type", "A1", "--signs", "-", "--a", "-2", "--b", "-3",
            "--t-end", "2"]
    data = json.loads(run(*args, "--json")[1])
    assert data["events"][0]["index"] == 1
    assert abs(data["events"][0]["t_star"] - 0.5493061443340549) < 1e-6
    code, out, _ = run(*args, "--csv", "--samples", "11")
    lines = out.strip().split("\n")
    assert code == 0 and lines[0] == "t,a1,b1" and len(lines) == 12


def test_toda_from_f():
    data = json.loads(run("toda", "simulate", "--type", "A2", "--signs", "+-", "--a", "0,0",
                          "--f", "0,0", "--t-end", "0.1", "--json")[1])
    assert data["samples"][0]["b"] == [1.0, -1.0]


def test_verify_small():
    code, out, _ = run("verify", "--type", "B2", "--all")
    assert code == 0 and "all checks passed" in out


def test_exit_codes():
    assert run("bogus")[0] == 2
    assert run("homology")[0] == 2
    assert run("homology", "--type", "H3")[0] == 1
    assert run("classify", "--type", "A2", "--chamber", "s1", "--point", "2,0")[0] == 1
    assert run("classify", "--type", "A2", "--chamber", "s5", "--point", "0,0")[0] == 1
    assert run("toda", "simulate", "--type", "A1", "--signs", "+", "--a", "0", "--b", "-1",
               "--t-end", "1")[0] == 1
    assert run("rootsys", "info", "--type", "A5", "--size-cap", "10")[0] == 1


def test_byte_identical_output():
    a = run("cells", "--type", "B2", "--list", "--json")[1]
    assert a == run("cells", "--type", "B2", "--list", "--json")[1]


@given(st.sampled_from(cli.COMMANDS), st.sampled_from(["a2", "B3", "g2", "F4", "D5"]),
       st.sampled_from(["text", "json"]))
def test_config_round_trip(command, label, output):
    base = command.split() + ["--type", label] + (["--json"] if output == "json" else [])
    extra = {"classify": ["--chamber", "e", "--point", "0,0"],
             "toda simulate": ["--a", "0", "--b", "1", "--t-end", "1"]}.get(command, [])
    cfg = cli.Config.parse(base + extra)
    again = cli.Config.parse(cfg.to_argv() + extra)
    assert again == cfg
    assert cfg.type_name == label.upper()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "toda_topo", "homology", "--type", "A1",
                           "--json"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["betti"] == [1, 1]
