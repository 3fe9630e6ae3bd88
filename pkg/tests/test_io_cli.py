import io
import json
import shutil
import subprocess
from pathlib import Path

import numpy as np
import pytest

from conftest import group
from vaobstruction import io as vio
from vaobstruction.cli import COMMANDS, run
from vaobstruction.cohomology import AbelianCochain3, Cochain2, IntertwinerCocycle, ModuleCocycle, d2, twist
from vaobstruction.forms import QuadraticForm
from vaobstruction.groups import ASet
from vaobstruction.scalar import Scalar, ScalarArray
from vaobstruction.testbed import FIXTURES, derive_cocycle

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run([str(a) for a in argv], out, err)
    return status, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------------------
# file formats


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_algebra_round_trip(name):
    a = FIXTURES[name]()
    data = vio.algebra_to_json(a)
    b = vio.algebra_from_json(json.loads(vio.dump_json(data)))
    assert vio.algebra_to_json(b) == data
    assert derive_cocycle(b) == derive_cocycle(a)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_files_match_builders(name):
    assert vio.load_json(FIX / f"{name}.json") == json.loads(vio.dump_json(vio.algebra_to_json(FIXTURES[name]())))


def test_cochain_form_and_lambda_round_trips():
    A = group((4, 2))
    lam = Cochain2.from_function(A, lambda i, j: Scalar(1 + i[0], (i[0] * j[1]) / 8))
    c = d2(lam)
    assert vio.cochain_from_json(vio.cochain_to_json(c)) == c
    assert vio.cochain2_from_json(vio.cochain2_to_json(lam)) == lam
    Q = QuadraticForm.from_function(A, lambda x: Scalar(1, (x[0] * x[0]) / 8))
    assert vio.form_from_json(vio.form_to_json(Q)) == Q


def test_module_and_intertwiner_round_trips():
    A = group((4,))
    S = ASet(A, ["even", "odd"], lambda x, s: s if x[0] % 2 == 0 else ("odd" if s == "even" else "even"))
    n, m = A.order, S.size
    vals = np.empty((n, n, m), dtype=object)
    for k, idx in enumerate(np.ndindex(*vals.shape)):
        vals[idx] = Scalar(1, (k % 5) / 10)
    phi = ModuleCocycle(S, ScalarArray.from_scalars(vals))
    back = vio.module_cocycle_from_json(vio.module_cocycle_to_json(phi))
    assert back.table == phi.table and back.aset.carrier == S.carrier
    T = ["p", "q", "r"]
    vals = np.empty((n, m, 3), dtype=object)
    for k, idx in enumerate(np.ndindex(*vals.shape)):
        vals[idx] = Scalar(2, (k % 3) / 3)
    psi = IntertwinerCocycle(S, T, ScalarArray.from_scalars(vals))
    back = vio.psi_cocycle_from_json(vio.psi_cocycle_to_json(psi))
    assert back.table == psi.table and list(back.labels2) == T


def test_input_diagnostics(tmp_path):
    with pytest.raises(vio.InputError, match="line"):
        vio.load_json(FIX / "malformed.json")
    with pytest.raises(vio.InputError, match=r"file says \[2\], command line says \[4\]"):
        vio.cochain_from_json(vio.load_json(FIX / "super.json"), group((4,)))
    with pytest.raises(vio.InputError):
        vio.cochain_from_json({"group": [2], "F": {}, "Omega": {}, "extra": 1})
    data = vio.algebra_to_json(FIXTURES["exterior_z2"]())
    key = next(iter(data["mult"]["(1|1)"]))
    data["mult"]["(1|1)"][key][0]["vec"] = ["1"]
    with pytest.raises(vio.InputError, match=r"mult\.\(1\|1\)\..*vec: expected 4 rationals"):
        vio.algebra_from_json(data)
    (tmp_path / "list.json").write_text("[1, 2]")
    with pytest.raises(vio.InputError):
        vio.load_json(tmp_path / "list.json")


def test_scalars_display_as_rationals_where_possible():
    assert vio.show_scalar(Scalar.from_rational(-1)) == "-1"
    assert vio.show_scalar(Scalar(1, "1/4")) == "1/1@1/4"


# ---------------------------------------------------------------------------
# exit-code contract over the fixture corpus


CASES = [
    (("trivialize", "--group", "2", "--cocycle", FIX / "super.json"), 1, "obstructed at i=1, Q(1)=-1"),
    (("from-form", "--group", "2", "--form", FIX / "trivial.json"), 0, "cocycle is identically 1"),
    (("algebra", "analyze", FIX / "z3_twisted.json"), 0, "lambda"),
    (("cocycle-check", "--group", "2", "--cocycle", FIX / "semion.json"), 0, "pentagon"),
    (("cocycle-check", "--group", "2", "--cocycle", FIX / "bad_hexagon.json"), 1, "hexagon-1 fails at (1,1,1)"),
    (("cocycle-trace", "--group", "2", "--cocycle", FIX / "semion.json"), 0, "Q(1)"),
    (("from-form", "--group", "4", "--form", FIX / "z4_form.json"), 0, ""),
    (("from-form", "--group", "4", "--form", FIX / "not_a_form.json"), 1, ""),
    (("cocycle-check", "--group", "2", "--cocycle", FIX / "malformed.json"), 2, None),
    (("trivialize", "--group", "4", "--cocycle", FIX / "super.json"), 2, None),
    (("series-verify", "--exponents", "0,0,0,-1,0,0"), 0, ""),
    (("series", "verify", "--exponents", "1,-1,0,-1,1,-2", "--diagram", "star"), 0, "star"),
    (("forms-enumerate", "--group", "2,2"), 0, "8"),
    (("forms-enumerate", "--group", "64"), 2, None),
    (("algebra-analyze", FIX / "exterior_z2.json"), 1, "Q(1)=-1"),
    (("algebra-verify", FIX / "exterior_z2.json"), 1, "skew-symmetry fails at ('1', '1')"),
    (("algebra-verify", FIX / "z3_twisted.json"), 1, "associativity"),
    (("algebra-verify", FIX / "z2_group_algebra.json"), 0, ""),
    (("algebra-analyze", FIX / "super_z4.json", "--subgroup", "0,2"), 0, ""),
    (("algebra-analyze", FIX / "super_z4.json", "--subgroup", "0,1,2,3"), 1, ""),
    (("algebra-analyze", FIX / "super_z4.json", "--subgroup", "0,1"), 2, None),
    (("algebra-analyze", FIX / "klein_group_algebra.json", "--subgroup", "(0,0);(1,1)"), 0, ""),
    (("bogus",), 2, None),
    (("series-verify", "--exponents", "1,2"), 2, None),
]


@pytest.mark.parametrize("argv,status,needle", CASES, ids=lambda v: None)
def test_exit_codes(argv, status, needle):
    got, out, err = cli(*argv)
    assert got == status, (out, err)
    if needle is None:
        return
    assert needle in out


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_algebra_commands_on_every_fixture(name, tmp_path):
    path = FIX / f"{name}.json"
    status, out, _ = cli("algebra-analyze", path, "--json")
    report = json.loads(out)
    assert status == (0 if report["extendable"] else 1)
    target = tmp_path / "ext.json"
    status, _, _ = cli("algebra-extend", path, "-o", target)
    if report["extendable"]:
        assert status == 0
        assert cli("algebra-verify", target)[0] == 0
    else:
        assert status == 1 and not target.exists()


def test_every_command_is_exercised():
    used = {a[0] if a[0] in COMMANDS else f"{a[0]}-{a[1]}" for a, _, _ in CASES if a[0] != "bogus"}
    assert used | {"algebra-extend"} == set(COMMANDS)


def test_reports_re_parse(tmp_path):
    status, out, _ = cli("algebra-analyze", FIX / "z3_twisted.json", "--json")
    report = json.loads(out)
    a = vio.algebra_from_json(vio.load_json(FIX / "z3_twisted.json"))
    assert vio.cochain_from_json(report["cocycle"]) == derive_cocycle(a)
    lam = vio.cochain2_from_json(report["lambda"])
    # the emitted lambda is the correcting twist
    assert twist(derive_cocycle(a), lam).is_one()
    status, out, _ = cli("from-form", "--group", "4", "--form", FIX / "z4_form.json", "-o", tmp_path / "c.json")
    c = vio.cochain_from_json(vio.load_json(tmp_path / "c.json"))
    assert isinstance(c, AbelianCochain3) and c.Omega_at(1, 1) == Scalar.from_rational(-1)


def test_output_is_deterministic(tmp_path):
    for argv in [("algebra-analyze", FIX / "super_z4.json", "--subgroup", "0,2", "--json"),
                 ("forms-enumerate", "--group", "4,2", "--json"),
                 ("series-verify", "--exponents", "1,0,-2,-1,0,1", "--json")]:
        assert cli(*argv)[1] == cli(*argv)[1]
    cli("algebra-extend", FIX / "z5_twisted.json", "-o", tmp_path / "a.json")
    cli("algebra-extend", FIX / "z5_twisted.json", "-o", tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


@pytest.mark.skipif(shutil.which("vaobstruction") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["vaobstruction", "trivialize", "--group", "2", "--cocycle", str(FIX / "super.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "obstructed at i=1, Q(1)=-1" in proc.stdout
