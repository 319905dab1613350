from fractions import Fraction

import pytest

from src.algebra.errors import NotASubsetError
from src.cli.commands import COMMANDS, arity_ok, read_input
from src.models.invocation import Invocation

UNIT = "P{dim=1; ineq [1] >= 0; ineq [-1] >= -1}"
WIDE = "P{dim=1; ineq [1] >= -1; ineq [-1] >= -1}"
FAR = "P{dim=1; ineq [1] >= 2; ineq [-1] >= -3}"

STAR_COVER = """base P{dim=1; ineq [1] >= 0; ineq [-1] >= -2}
piece a P{dim=1; ineq [1] >= 0; ineq [-1] >= -3/2}
piece b P{dim=1; ineq [1] >= 1/2; ineq [-1] >= -2}
piece ab P{dim=1; ineq [1] >= 1/2; ineq [-1] >= -3/2}
a <= ab
b <= ab
"""


def run(group, action, *arguments, **options):
    fields = dict(precision=Fraction(8), seed=0, window=6)
    fields.update(options)
    inv = Invocation(command=group, action=action, arguments=list(arguments), **fields)
    return COMMANDS[group][action].handler(inv)


def test_every_group_is_registered():
    assert set(COMMANDS) == {"nov", "poly", "aff", "op", "cech", "cat"}


def test_nov_val():
    assert run("nov", "val", "1*T^(1/2) + 2*T^(2)").text == "1/2"


def test_nov_val_of_zero():
    assert run("nov", "val", "0").text == "inf"


def test_nov_inv_respects_precision():
    assert run("nov", "inv", "1 + T", precision=Fraction(3)).text == "1 + -1*T^(1) + 1*T^(2)"


def test_poly_vertices():
    assert run("poly", "vertices", WIDE).text == "[-1]\n[1]"


def test_poly_split_normalizes_hyperplane():
    text = run("poly", "split", WIDE, "[2]", "1").text
    assert text.splitlines()[0] == "hyperplane: [1] = 1/2"


def test_aff_val():
    assert run("aff", "val", UNIT, "(1)*z[1] + (1*T^(1))*z[-1]").text == "0"


def test_aff_restrict_needs_subset():
    with pytest.raises(NotASubsetError):
        run("aff", "restrict", UNIT, WIDE, "(1)*z[1]")


def test_aff_cert():
    lines = run("aff", "cert", "1", "1/4", "2:1", "0:3").text.splitlines()
    assert lines == ["converges: yes", "constant: 3", "limit: 1/2", "bounds: [-1/2,-3/2]"]


def test_op_classify_hf():
    assert run("op", "classify-hf", WIDE, UNIT).text == "InclusionIso deg=0 ring=Gamma^[0,1] from=[-1,1] to=[0,1] form=staircase"


def test_op_disjoint_h_passes():
    result = run("op", "disjoint-h", "(1)*e[0][0] ^ b{1}", UNIT, FAR, precision=Fraction(6))
    assert result.exit_code == 0
    assert result.text.splitlines()[-1] == "RESULT: PASS"


def test_op_trace():
    assert run("op", "trace", "(2)*e[1][1] + (1)*e[1][0]").text == "b{}: 2"


def test_cech_tate_split():
    assert run("cech", "tate-split", "(1)*z[2] + (1)*z[-1]").text == "+: (1)*z[2]\n-: (1)*z[-1]"


def test_cover_read_from_file(tmp_path):
    path = tmp_path / "star.cover"
    path.write_text(STAR_COVER, encoding="utf-8")
    assert read_input(str(path)) == STAR_COVER
    text = run("cat", "build", str(path)).text
    assert "hom a -> ab: Gamma^[1/2,3/2]" in text.splitlines()


def test_cat_locality_passes(tmp_path):
    path = tmp_path / "star.cover"
    path.write_text(STAR_COVER, encoding="utf-8")
    result = run("cat", "locality", str(path), "a")
    assert result.exit_code == 0
    assert result.text.endswith("RESULT: PASS")


def test_read_input_falls_back_to_literal():
    assert read_input("1*T^(1/2)") == "1*T^(1/2)"
    assert read_input("x" * 5000) == "x" * 5000


def test_arity():
    assert arity_ok(COMMANDS["nov"]["add"], ["1", "2"])
    assert not arity_ok(COMMANDS["nov"]["add"], ["1"])
    assert arity_ok(COMMANDS["aff"]["cert"], ["1", "1/4"])
    assert arity_ok(COMMANDS["cech"]["laurent-h"], ["P", "c", "[1]@1", "[0]@2"])
