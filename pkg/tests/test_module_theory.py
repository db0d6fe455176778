from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from math import comb

import oracles
import pytest
from golden import MULT_TABLE

from sblob.algebra import pi_from_sigma
from sblob.combinatorics import AB, d_expected, dim_delta, labels, v
from sblob.module_theory import (
    GenericityError,
    MultiplicityError,
    MultTable,
    PermModule,
    action_table_check,
    action_table_identities,
    c_closed_form,
    certify_E,
    check_perm_invariance,
    construct_E,
    counit_image,
    domain_dim,
    full_tilting_bookkeeping,
    idempotent_image,
    localize_basis,
    multiplicities,
    theta_embed,
    verify_theta_intertwines,
)
from sblob.r_operators import representation
from sblob.scalars import quantum_integer, specialize
from sblob.tensor_space import (
    SparseVector,
    bracket_vectors,
    class_words,
    encode,
    perm_class,
    u_of,
    word_str,
)

F = Fraction


def test_perm_module():
    M = PermModule(2, 1)
    assert M.dim == comb(8, 5) == len(M.words())
    assert all(perm_class(w, 2) == 1 for w in M.words())
    with pytest.raises(ValueError):
        PermModule(1, 3)


@pytest.mark.parametrize("n", [1, 2])
def test_perm_invariance(n, sigma0):
    assert check_perm_invariance(n, sigma0)


def test_single_word_stays_in_class(sigma0):
    R = representation(2, sigma0)
    assert not R.apply_word("U1", encode("11112222"))
    w = encode("12121212")
    assert {perm_class(k, 2) for k in R.apply_word("U1", w).support()} == {0}


def test_idempotent_is_projection(sigma0):
    # the normalised e fixes its own image
    R = representation(2, sigma0)
    dl = pi_from_sigma(sigma0, 2).delta_L
    for vec in list(idempotent_image(2, sigma0, "e", R.field))[:40]:
        assert R.apply("e", vec).scale(1 / dl) == vec


@pytest.mark.parametrize("side", ["e", "f"])
def test_localize_ranks(side, sigma0):
    assert localize_basis(1, sigma0, side).rank == 1
    assert localize_basis(2, sigma0, side).rank == 16


def test_theta_examples(sigma0):
    a = SparseVector.basis(1, "1111")
    img = theta_embed(2, sigma0, a)
    assert sorted(word_str(w, 2) for w in img.support()) == ["11211121", "11211211", "12111121", "12111211"]
    images = [theta_embed(2, sigma0, SparseVector.basis(1, w)) for w in range(16)]
    leads = {u_of(vec) for vec in images}
    assert len(leads) == 16
    loc = localize_basis(2, sigma0, "e")
    assert all(loc.in_span(vec) for vec in images)
    with pytest.raises(ValueError):
        theta_embed(2, sigma0, SparseVector.basis(2, 0))


def test_theta_n2(sigma0):
    rep = verify_theta_intertwines(2, sigma0)
    assert rep.ok, rep.failures()
    # b'_1 has generators e and f only; U_1 of V(2) enters through the image of e
    assert set(rep.statuses()) == {"theta[e]", "theta[f]"}


@pytest.mark.parametrize("n", [1, 2])
def test_counit_rank_matches_oracle(n, sigma1):
    cert = counit_image(n, sigma1)
    assert cert.d_observed == oracles.counit_rank(n, sigma1.as_tuple())


def test_counit_n2(sigma0):
    cert = counit_image(2, sigma0, "both")
    assert cert.d_observed == 18 == cert.d_expected and cert.injective and cert.agreement
    assert cert.d_domain == 18


def test_domain_dims():
    assert domain_dim(1) == dim_delta(1, 0) == 2
    for n in range(2, 7):
        assert domain_dim(n) == d_expected(n)


def test_certificate_json(sigma0):
    cert = certify_E(2, sigma0)
    d = json.loads(cert.to_json())
    assert d["certified"] and d["d_observed"] == 18
    assert d["E_stats"]["sizes"] == [16, 1, 1]
    assert "elapsed" not in cert.to_json()


def test_E1(sigma0):
    EA, EB, EC = construct_E(1, sigma0)
    assert (len(EA), len(EB), len(EC)) == (1, 0, 1)
    z, w = sigma0.z, sigma0.w
    eig = bracket_vectors(z / w, z).scale(w / (quantum_integer(2, z) * quantum_integer(2, w)))
    R = representation(1, sigma0)
    dr = pi_from_sigma(sigma0, 1).delta_R
    assert R.apply("f", eig).scale(1 / dr) == eig
    c = EC[0]
    k = c.leading()[1] / eig.leading()[1]
    assert c == eig.scale(k)


def test_E2_sizes(sigma0):
    assert tuple(map(len, construct_E(2, sigma0))) == (16, 1, 1) == (*AB(2), AB(2)[1])


def test_E3_excluded_middle(sigma0):
    EA, EB, EC = construct_E(3, sigma0)
    assert (len(EA), len(EB), len(EC)) == (272, 15, 15)
    # the middle letters of every B vector avoid 1212 = u(E_1^A)
    EA1 = construct_E(1, sigma0)[0]
    assert word_str(u_of(EA1[0]), 1) == "1212"
    for vec in EB:
        lets = word_str(u_of(vec), 3)
        assert lets[2:4] + lets[8:10] != "1212"


def test_C_closed_form(sigma0):
    EB, EC = construct_E(2, sigma0)[1:]
    c = EC[0]
    want = c_closed_form(2, sigma0, (), ())
    k = c.leading()[1] / want[c.leading()[0]]
    assert c == want.scale(k)


def test_E_members_are_in_the_counit_image(sigma0):
    from sblob.module_theory import counit_basis

    b = counit_basis(2, sigma0)
    assert all(b.in_span(vec) for part in construct_E(2, sigma0) for vec in part)


def test_action_table_examples(sigma0):
    names = [name for name, *_ in action_table_identities(3, pi_from_sigma(sigma0, 3))]
    assert {"U1.x1", "U2.x2", "f.x2", "U2.x0"} <= set(names)
    rep = action_table_check(2, sigma0)
    assert rep.ok and len(rep.results) == 7


def test_base_multiplicities_from_dense_ranks(sigma0):
    # m[0][r] is the rank of e on class r, computed here with the oracle
    t = multiplicities(1, sigma0)
    s = sigma0.as_tuple()
    for r in range(-2, 3):
        basis = [tuple(int(ch) for ch in word_str(w, 1)) for w in class_words(1, r)]
        M = oracles.matrix(("e",), 1, s, basis)
        assert t.get(0, r) == oracles.rank(M)
        assert t.get(-1, r) == comb(4, 2 + r) - 2 * t.get(0, r)


def test_table_examples(sigma0):
    t2, t4 = multiplicities(2, sigma0), multiplicities(4, sigma0)
    assert t2.by_abs(2, 0) == 58
    assert multiplicities(1, sigma0).get(-1, 2) == 1
    assert t4.by_abs(4, 0) == 10906 and t4.by_abs(4, 7) == 16


def test_table_layout_n1(sigma0):
    t = multiplicities(1, sigma0)
    assert t.rows() == [[1, 4], [None, 4], [None, 1]]
    rows = list(csv.reader(io.StringIO(t.to_csv())))
    assert rows == [["r", "|lambda|=0", "|lambda|=1"], ["0", "1", "4"], ["1", "", "4"], ["2", "", "1"]]


def test_table_matches_reference(sigma0):
    t = multiplicities(4, sigma0)
    assert t.rows() == MULT_TABLE


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_table_invariants(n, sigma0):
    t = multiplicities(n, sigma0)
    assert all(val >= 0 for val in t.m.values())
    prev = multiplicities(n - 1, sigma0) if n > 1 else None
    rep = full_tilting_bookkeeping(t, prev)
    assert rep.ok, rep.failures()
    for r in range(-2 * n, 2 * n + 1):
        assert sum(t.get(lam, r) * dim_delta(n, lam) for lam in labels(n)) == comb(4 * n, 2 * n + r)
    if n >= 2:
        assert t.route_checks > 0


def test_table_column_sums(sigma0):
    t = multiplicities(4, sigma0)
    for k, want in ((2, 224), (3, 3570), (4, 56896)):
        assert sum(t.by_abs(k, r) for r in range(-8, 9)) == want == v(k)
    assert 58 + 2 * (48 + 26 + 8 + 1) == 224
    assert 780 + 2 * (676 + 438 + 204 + 64 + 12 + 1) == 3570
    assert 10906 + 2 * (9760 + 6966 + 3912 + 1686 + 536 + 118 + 16 + 1) == 56896


def test_table_same_at_other_point():
    assert multiplicities(3, specialize(1)).m == multiplicities(3, specialize(0)).m


def test_bookkeeping_detects_bad_table(sigma0):
    t = multiplicities(2, sigma0)
    bad = MultTable(2, dict(t.m))
    bad.m[(0, 0)] += 1
    rep = full_tilting_bookkeeping(bad)
    failed = {r.relation for r in rep.failures()}
    assert "column-sum[0]" in failed and "row-dim[0]" in failed


def test_table_json(sigma0):
    rows = json.loads(multiplicities(1, sigma0).to_json())
    assert {"n": 1, "lambda": -1, "r": 2, "m": 1} in rows


def test_multiplicity_error_is_genericity_error():
    assert issubclass(MultiplicityError, GenericityError)
