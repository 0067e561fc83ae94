"""Symmetric bilinear form classification and isometries."""

import pytest

from kirby import forms, intmat

from conftest import random_unimodular


def congruent(q: forms.BilinearForm, e, e_inv):
    rows = intmat.matmul(intmat.matmul(intmat.transpose(e), q.rows), e)
    return forms.BilinearForm.from_rows(rows)


def test_classify_basics():
    c = forms.diagonal_form(1, 1, -1).classify()
    assert (c.rank, c.signature, c.parity) == (3, 1, "odd")
    assert c.definiteness == "indefinite"
    assert c.canonical_diagonal == (2, 1)
    h = forms.hyperbolic_form().classify()
    assert (h.rank, h.signature, h.parity) == (2, 0, "even")
    e8 = forms.e8_form().classify()
    assert (e8.rank, e8.signature, e8.parity, e8.definiteness) == (
        8,
        8,
        "even",
        "positive",
    )


def test_parity_is_congruence_invariant(rng):
    for trial in range(30):
        n = rng.randint(1, 5)
        entries = [rng.choice([1, -1]) for _ in range(n)]
        q = forms.diagonal_form(*entries)
        e, e_inv = random_unimodular(n, rng)
        q2 = congruent(q, e, e_inv)
        assert q2.parity == q.parity == "odd"
    h = forms.hyperbolic_form()
    for trial in range(20):
        e, e_inv = random_unimodular(2, rng)
        assert congruent(h, e, e_inv).parity == "even"


def test_elliptic_form_rank_signature_parity():
    for n in range(1, 5):
        q = forms.elliptic_form(n)
        c = q.classify()
        assert c.rank == 12 * n - 2
        assert c.signature == -8 * n
        assert c.parity == ("even" if n % 2 == 0 else "odd")


def test_stabilize_and_stable_equivalence():
    q = forms.diagonal_form(1, -1)
    assert forms.stabilize(q, "H").rank == 4
    with pytest.raises(forms.FormError):
        forms.stabilize(q, "<2>")
    a = forms.decomposable_form(2, 3)
    b = forms.decomposable_form(1, 2)
    res = forms.stably_equivalent(a, b)
    assert res.equivalent
    # even vs odd with only H allowed is obstructed
    res2 = forms.stably_equivalent(
        forms.hyperbolic_form(), forms.diagonal_form(1, -1), allowed=("H",)
    )
    assert res2.status == "inequivalent"


def test_reflect_is_involutive_isometry(rng):
    count = 0
    while count < 60:
        n = rng.randint(1, 5)
        entries = [rng.choice([1, -1]) for _ in range(n)]
        base = forms.diagonal_form(*entries)
        e, e_inv = random_unimodular(n, rng)
        q = congruent(base, e, e_inv)
        # image of a basis vector under E^-1 has the same self-pairing +-1
        i = rng.randrange(n)
        sigma = [row[i] for row in e_inv]
        iso = forms.reflect(q, sigma)
        assert iso.is_involution()
        assert iso.apply(sigma) == [-x for x in sigma]
        count += 1


def test_reflect_rejects_bad_self_pairing():
    q = forms.diagonal_form(3)
    with pytest.raises(forms.FormError):
        forms.reflect(q, [1])


def test_fs_action_det_one_and_class_dependence(rng):
    q = forms.diagonal_form(1, -1, -1, 1)
    s, e1, e2 = [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]
    iso = forms.fs_action(q, s, e1, e2)
    assert iso.determinant() == 1
    again = forms.fs_action(q, list(s), list(e1), list(e2))
    assert iso.matrix == again.matrix


def test_blowdown_class_drops_rank_and_signature():
    q = forms.diagonal_form(1, 1, -1)
    out = forms.blowdown_class(q, [0, 1, 0])
    c = out.classify()
    assert c.rank == 2
    assert c.signature == 0
    with pytest.raises(forms.FormError):
        forms.blowdown_class(q, [1, 1, 0])  # self-pairing 2


def test_blowdown_inverts_stabilization(rng):
    for trial in range(20):
        n = rng.randint(1, 4)
        entries = [rng.choice([1, -1]) for _ in range(n)]
        q = forms.diagonal_form(*entries)
        stab = forms.stabilize(q, "<1>")
        v = [0] * n + [1]
        back = forms.blowdown_class(stab, v)
        assert back.classify() == q.classify()
