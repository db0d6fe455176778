from __future__ import annotations

import json
from fractions import Fraction

import pytest

from sblob.algebra import (
    PI_NAMES,
    PiParams,
    _I_J,
    corner_generators,
    corner_relations_check,
    first_witness,
    heredity_elements,
    pi_from_sigma,
    relation_instances,
    sigma_L,
    sigma_R,
    verify_relations,
    x_elements,
)
from sblob.r_operators import GeneratorOp, representation
from sblob.scalars import SigmaParams, specialize

F = Fraction
ONES = SigmaParams(*[1] * 8)


def test_pi_all_ones():
    assert pi_from_sigma(ONES, "odd").as_tuple() == (16, 4, 4, 4, 4, 4)
    assert pi_from_sigma(ONES, 2).as_tuple() == (16, 4, 4, 4, 4, 4)


def test_pi_canonical_delta(sigma0):
    assert pi_from_sigma(sigma0, 1).delta == F(6500, 21)
    assert pi_from_sigma(sigma0, 1).all_nonzero()


def test_parity_branch(sigma0):
    a, b, c, d, x, y, z, w = sigma0.as_tuple()
    t = lambda q: q + 2 + 1 / q  # noqa: E731
    assert pi_from_sigma(sigma0, 3).kappa == t(x * y / (z * w))
    assert pi_from_sigma(sigma0, 4).kappa == t(a * b * c * d / (x * y * z * w))
    with pytest.raises(ValueError):
        pi_from_sigma(sigma0, "sideways")


def test_sigma_twists(sigma0):
    assert sigma_L(ONES) == ONES and sigma_R(ONES) == ONES
    sl = sigma_L(sigma0)
    assert (sl.x, sl.y) == (F(6, 11), F(35, 13))
    assert sl.as_tuple()[:4] == sigma0.as_tuple()[:4] and (sl.z, sl.w) == (sigma0.z, sigma0.w)
    sr = sigma_R(sigma0)
    assert (sr.z, sr.w) == (sigma0.b * sigma0.c / sigma0.z, sigma0.a * sigma0.d / sigma0.w)


@pytest.mark.parametrize("seed", [0, 2, 5])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_twisted_parameters(seed, n):
    s = specialize(seed)
    pi = pi_from_sigma(s, n)
    assert pi_from_sigma(sigma_L(s), n - 1) == pi.left()
    assert pi_from_sigma(sigma_R(s), n - 1) == pi.right()


def test_pi_swaps():
    pi = PiParams(*map(F, (1, 2, 3, 4, 5, 6)))
    assert pi.left().as_tuple() == (1, 4, 3, 2, 5, 6)
    assert pi.right().as_tuple() == (1, 2, 5, 4, 3, 6)
    assert pi.perturbed("kappa").kappa == 7
    with pytest.raises(ValueError):
        pi.perturbed("nope")


def test_I_J_words():
    assert _I_J(1) == (("f",), ("e",))
    assert _I_J(2) == (("U1",), ("e", "f"))
    assert _I_J(3) == (("U1", "f"), ("e", "U2"))
    assert _I_J(4) == (("U1", "U3"), ("e", "U2", "f"))


def test_relation_instances_n1():
    pi = pi_from_sigma(ONES, 1)
    live = [name for name, lhs, _ in relation_instances(1, pi) if lhs is not None]
    assert live == ["rel2", "rel3", "rel6", "rel7"]


def test_rel8_reads_far_commutation():
    names = [name for name, *_ in relation_instances(4, pi_from_sigma(ONES, 4))]
    assert "rel8[U1,U3]" in names and not any(n.startswith("rel8[U1,U2]") for n in names)


@pytest.mark.parametrize("seed", [0, 1])
@pytest.mark.parametrize("n", [1, 2])
def test_relations_hold(n, seed):
    rep = verify_relations(n, specialize(seed))
    assert rep.ok, rep.failures()
    if n == 1:
        st = rep.statuses()
        assert st["rel4"] == st["rel5"] == "vacuous"
    else:
        assert "vacuous" not in {st for k, st in rep.statuses().items() if k in ("rel4", "rel5", "rel12")}


def test_wrong_rhs_has_witness(sigma0):
    pi = pi_from_sigma(sigma0, 2)
    R = representation(2, sigma0)
    w = first_witness(R, (F(1), ("U1", "U1")), (pi.delta + 1, ("U1",)))
    assert w is not None
    assert R.apply_word("U1", w)


@pytest.mark.parametrize("name", PI_NAMES)
def test_single_perturbation_fails(name, sigma0):
    rep = verify_relations(2, sigma0, pi_from_sigma(sigma0, 2).perturbed(name))
    assert not rep.ok
    expected = {
        "delta": "rel1[U1]",
        "delta_L": "rel2",
        "delta_R": "rel3",
        "kappa_L": "rel4",
        "kappa_R": "rel5",
        "kappa": "rel6",
    }[name]
    assert expected in {r.relation for r in rep.failures()}


def test_cross_parity_kappa_fails(sigma0):
    pi = pi_from_sigma(sigma0, 2)
    wrong = PiParams(*pi.as_tuple()[:5], pi_from_sigma(sigma0, 1).kappa)
    failed = {r.relation for r in verify_relations(2, sigma0, wrong).failures()}
    assert {"rel6", "rel7"} <= failed


def test_report_json(sigma0):
    rows = json.loads(verify_relations(1, sigma0).to_json())
    assert all(set(r) == {"relation", "status", "witness"} for r in rows)
    assert {r["status"] for r in rows} == {"holds", "vacuous"}


def test_x_elements():
    assert [str(x) for x in x_elements(1)] == ["e", "f e"]
    assert [str(x) for x in x_elements(2)] == ["e", "U1 e", "f U1 e"]
    assert [str(x) for x in x_elements(3)] == ["e", "U1 e", "U2 U1 e", "f U2 U1 e"]


def test_heredity_elements():
    for n in (1, 2, 3, 4):
        h = heredity_elements(n)
        assert sorted(h) == list(range(-n, n))
        assert h[-n].word == GeneratorOp.identity(n)
    for n in (3, 4):
        h = heredity_elements(n)
        assert str(h[n - 1].word) == "e"
        assert str(h[-(n - 1)].word) == "f"
        assert str(h[n - 2].word) == "e f"
    h = heredity_elements(3)
    assert h[-1].word is None and "U5" in h[-1].note
    assert h[0].word == GeneratorOp(_I_J(3)[0], 3)


def test_corner_generators_shape(sigma0):
    pi = pi_from_sigma(sigma0, 3)
    unit, gens = corner_generators(3, pi, "e")
    assert unit == (1 / pi.delta_L, ("e",))
    assert gens["U1"] == (1 / pi.delta_L**2, ("e", "U2", "e"))
    with pytest.raises(ValueError):
        corner_generators(1, pi)


def test_corner_n2(sigma0):
    rep = corner_relations_check(2, sigma0)
    assert rep.ok, rep.failures()
    st = rep.statuses()
    # (eU1e/dL)^2 = kappa_L eU1e/dL is the level-1 rel2 with twisted parameters
    assert st["e-corner:rel2"] == "holds"
    assert st["e-corner:unit"] == "holds" and st["f-corner:unit"] == "holds"


def test_corner_example_n2_direct(sigma0):
    pi = pi_from_sigma(sigma0, 2)
    R = representation(2, sigma0)
    k = 1 / pi.delta_L
    lhs = (k * k, ("e", "U1", "e", "e", "U1", "e"))
    assert first_witness(R, lhs, (pi.kappa_L * k, ("e", "U1", "e"))) is None


def test_corner_wrong_normalisation_fails(sigma0):
    # dividing U'_i by delta_L only once breaks the level-(n-1) relations
    from sblob import algebra

    pi = pi_from_sigma(sigma0, 3)
    unit, gens = corner_generators(3, pi, "e")
    gens = dict(gens, U1=(1 / pi.delta_L, ("e", "U2", "e")))
    rep = algebra._check_instances(representation(3, sigma0), 2, pi.left(), gens)
    assert not rep.ok
