import pytest

import cartier


def test_tau_twisted_line():
    r = cartier.tau(3, "x", "x", "1/2", twist="x")
    assert r["generators"] == ["x"]
    assert r["certified"]
    assert r["stabilized_at_e"] == 1


def test_jumps_and_fpt():
    assert cartier.jumps(3, "x,y", "x^2*y", "0..1", 12) == ["1/2", "1"]
    assert cartier.fpt(5, "x,y", "x^2+y^3") == "4/5"


def test_rank_two():
    r = cartier.tau(3, "x", "x", "1", twist="0,1;1,0")
    assert len(r["generators"]) == 2
    assert all(len(g) == 2 for g in r["generators"])


def test_vfilt():
    v = cartier.vfilt(3, "x", "x", "0..2", 6, twist="x")
    assert v["axioms_ok"]
    assert [j["t"] for j in v["jumps"]] == ["1/2", "3/2"]


def test_repro_and_check():
    assert "ex621" in cartier.repro_targets()
    r = cartier.repro("ex621")
    assert r["passed"]
    assert r["items"][0]["name"] == "f^! R not F-pure"
    c = cartier.check("skoda", seed=3, cases=2)
    assert c["passed"] and len(c["items"]) == 2


def test_errors_carry_a_code():
    with pytest.raises(cartier.CartierError) as e:
        cartier.tau(3, "x,y", "x^2*z", "1")
    assert e.value.code == "invalid_input"
    with pytest.raises(cartier.CartierError) as e:
        cartier.tau(2, "x", "x", "1/83")
    assert e.value.code == "cap_exceeded"
    with pytest.raises(cartier.CartierError) as e:
        cartier.vfilt(3, "x", "x", twist="x^2")
    assert e.value.code == "not_f_regular"
    with pytest.raises(ValueError):
        cartier.repro("ex999")
