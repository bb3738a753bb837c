import io
import json
import subprocess
import sys

import numpy as np
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rationals
from rmatrix.algebra import TensorOperator
from rmatrix.cli import EmitRecord, main
from rmatrix.families import constant_vertex


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_emit_eleven_vertex_corner_entry():
    code, text = run("emit", "--family", "eleven-vertex", "--N", "2", "--hbar", "1", "--z", "1")
    assert code == 0
    rec = json.loads(text)
    assert list(rec) == ["family", "N", "slots", "params", "entries"]
    # row |2,2>, column |1,1>
    assert rec["entries"][3][0] == "-6"
    assert rec["params"] == {"hbar": "1", "z": "1"}


def test_emit_yang_diagonal():
    code, text = run("emit", "--family", "yang", "--N", "3", "--hbar", "1/2", "--z", "1/3")
    entries = json.loads(text)["entries"]
    assert code == 0
    assert entries[0][0] == entries[4][4] == entries[8][8] == "5"


def test_emit_round_trip():
    _, text = run("emit", "--family", "semi-dynamical", "--N", "2", "--hbar", "2/3",
                  "--z1", "1/5", "--z2", "-4", "--q", "1,-1/2")
    rec = EmitRecord.from_json(text)
    assert rec.to_json() + "\n" == text
    assert rec.params["q"] == ["1", "-1/2"]
    assert rec.operator().slots == 2


@settings(max_examples=25)
@given(st.lists(rationals(40), min_size=16, max_size=16))
def test_record_round_trip_property(values):
    op = TensorOperator(2, 2, np.array(values, dtype=object).reshape(4, 4))
    rec = EmitRecord.from_operator("yang", 2, {"hbar": mpq(1, 3)}, op)
    back = EmitRecord.from_json(rec.to_json())
    assert back == rec
    assert back.operator() == op


def test_identical_invocations_are_byte_identical():
    args = ("check", "--suite", "unitarity", "--N", "2", "--trials", "3", "--seed", "9")
    assert run(*args) == run(*args)


def test_emit_default_q_is_canonical():
    _, text = run("emit", "--family", "dynamical", "--N", "3", "--hbar", "1", "--z", "2")
    assert json.loads(text)["params"]["q"] == ["1", "2", "3"]


def test_gauge_and_lax_objects():
    code, text = run("emit", "--family", "lax-top", "--N", "2", "--eta", "1/2", "--z", "3",
                     "--lambda", "1,1")
    assert code == 0 and json.loads(text)["slots"] == 1


def test_exit_codes():
    assert run("check", "--suite", "qybe", "--N", "0")[0] == 2
    assert run("check", "--suite", "nonexistent", "--N", "2")[0] == 2
    assert run("emit", "--family", "yang", "--N", "2", "--hbar", "1")[0] == 2
    assert run("emit", "--family", "nope", "--N", "2")[0] == 2
    assert run("emit", "--family", "eleven-vertex", "--N", "3", "--hbar", "1", "--z", "1")[0] == 2
    assert run("emit", "--family", "yang", "--N", "2", "--hbar", "1", "--z", "x")[0] == 2
    # pole: named error, nonzero exit
    assert run("emit", "--family", "yang", "--N", "2", "--hbar", "1", "--z", "0")[0] == 1


def test_check_stream_and_summary():
    code, text = run("check", "--suite", "coincidence", "--N", "2..3", "--trials", "2", "--seed", "1")
    lines = [json.loads(x) for x in text.splitlines()]
    assert code == 0
    assert lines[-1]["summary"]["failed"] == 0
    assert all("anchor" in x and x["passed"] for x in lines[:-1])


def test_expand_hbar_residue_is_identity():
    code, text = run("expand", "--family", "closed-form", "--N", "2", "--var", "hbar",
                     "--order", "1", "--z", "1")
    coeffs = json.loads(text)
    assert code == 0
    assert [c["degree"] for c in coeffs] == [-1, 0, 1]
    assert coeffs[0]["entries"] == [[str(int(i == j)) for j in range(4)] for i in range(4)]


def test_expand_classical_r_residue_is_permutation():
    _, text = run("expand", "--family", "classical-explicit", "--N", "2", "--var", "z", "--order", "0")
    first = json.loads(text)[0]
    assert first["degree"] == -1
    assert first["entries"] == [["1", "0", "0", "0"], ["0", "0", "1", "0"], ["0", "1", "0", "0"], ["0", "0", "0", "1"]]


def test_expand_epsilon_scaling_gives_yang():
    _, text = run("expand", "--family", "eleven-vertex", "--N", "2", "--var", "epsilon",
                  "--order", "0", "--hbar", "2", "--z", "3")
    degree0 = EmitRecord.from_dict(json.loads(text)[-1]).operator()
    assert degree0 == constant_vertex("yang", 2, mpq(2), mpq(3))


def test_expand_refuses_to_truncate_poles():
    assert run("expand", "--family", "closed-form", "--N", "2", "--var", "z",
               "--order", "0", "--hbar", "1", "--min-degree", "0")[0] == 1
    assert run("expand", "--family", "m-zero", "--N", "2", "--var", "z", "--order", "0")[0] == 2


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "rmatrix", "check", "--suite", "qybe", "--N", "0"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert "usage error" in proc.stderr
    assert proc.stdout == ""


def test_full_suite_small_n_exits_zero():
    code, text = run("check", "--suite", "all", "--N", "2..3", "--trials", "10", "--seed", "42")
    summary = json.loads(text.splitlines()[-1])["summary"]
    assert code == 0
    assert summary["failed"] == 0 and summary["checks"] > 90
