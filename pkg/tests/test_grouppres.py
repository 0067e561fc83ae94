"""Group presentations: words, Tietze moves, quotient counting, and
presentations read off diagrams."""

import itertools

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from kirby import grouppres, pdcode
from kirby.grouppres import GroupPresentation

from test_pdcode import clasp, hopf, unknot


# -- independent S_n oracle (permutations as tuples, composed directly) ----


def perms(n):
    return list(itertools.permutations(range(n)))


def compose(p, q):  # (p q)(i) = p[q[i]]
    return tuple(p[q[i]] for i in range(len(p)))


def invert(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def eval_word_oracle(word, images, n):
    acc = tuple(range(n))
    for x in word:
        g = images[abs(x) - 1]
        if x < 0:
            g = invert(g)
        acc = compose(acc, g)
    return acc


def count_homs_oracle(g: GroupPresentation, n: int) -> int:
    idp = tuple(range(n))
    total = 0
    for images in itertools.product(perms(n), repeat=g.rank):
        if all(eval_word_oracle(r, images, n) == idp for r in g.relators):
            total += 1
    return total


# -- words ------------------------------------------------------------------


def test_free_and_cyclic_reduce():
    assert grouppres.free_reduce((1, -1, 2)) == (2,)
    assert grouppres.free_reduce((1, 2, -2, -1)) == ()
    assert grouppres.cyclic_reduce((1, 2, -1)) == (2,)
    assert grouppres.invert_word((1, -2, 3)) == (-3, 2, -1)


def test_parse_and_format_roundtrip():
    gens = ("x", "y")
    for text in ("x y x^-1 y^-1", "x^3 y^-2", "x"):
        w = grouppres.parse_word(text, gens)
        assert grouppres.parse_word(grouppres.format_word(w, gens), gens) == w


def test_parse_word_parenthesized_powers():
    gens = ("x", "y")
    w = grouppres.parse_word("x y (y x)^-2", gens)
    assert w == grouppres.free_reduce((1, 2, -1, -2, -1, -2))


def test_abelianization_against_sympy(rng):
    for trial in range(20):
        n_gens = rng.randint(1, 3)
        relators = []
        for _ in range(rng.randint(0, 3)):
            w = tuple(
                rng.choice([i, -i])
                for i in [rng.randint(1, n_gens) for _ in range(rng.randint(1, 5))]
            )
            relators.append(w)
        g = GroupPresentation(
            tuple(f"g{i}" for i in range(n_gens)), tuple(map(grouppres.free_reduce, relators))
        )
        ab = g.abelianization()
        # oracle: cokernel of the exponent matrix via sympy SNF
        mat = [[0] * max(len(g.relators), 1) for _ in range(n_gens)]
        for j, r in enumerate(g.relators):
            for x in r:
                mat[abs(x) - 1][j] += 1 if x > 0 else -1
        d = sympy_snf(sympy.Matrix(mat))
        divs = [
            abs(d[i, i])
            for i in range(min(d.shape))
            if d[i, i] != 0
        ]
        assert ab.rank == n_gens - len(divs)
        assert list(ab.torsion) == [x for x in divs if x > 1]


# -- Tietze -----------------------------------------------------------------


def test_simplify_log_replays_exactly():
    g = GroupPresentation.make(
        ("a", "b", "c"), ("a b^-1", "b c", "a c a^-1 c^-1")
    )
    simp = grouppres.tietze_simplify(g, 500)
    replay = grouppres.apply_tietze(g, simp.log)
    assert replay == simp.presentation


def test_simplify_trivializes_obvious_presentations():
    g = GroupPresentation.make(("a", "b"), ("a b", "a b^2"))
    simp = grouppres.tietze_simplify(g, 500)
    assert simp.presentation.is_obviously_trivial()


def test_tietze_equivalent_up_to_renaming_and_inversion():
    g1 = GroupPresentation.make(("x", "y"), ("x y x^-1 y^-1 x^-1 y^-1",))
    g2 = GroupPresentation.make(("u", "v"), ("u v u^-1 v^-1 u^-1 v^-1",))
    cert = grouppres.tietze_equivalent(g1, g2)
    assert cert is not None
    # the certificate logs must replay to presentations related by its map
    assert grouppres.apply_tietze(g1, cert.log1).rank == grouppres.apply_tietze(
        g2, cert.log2
    ).rank
    g3 = GroupPresentation.make(("x", "y"), ("x y^-1",))
    g4 = GroupPresentation.make(("x", "y"), ("x y",))
    assert grouppres.tietze_equivalent(g3, g4) is not None
    g5 = GroupPresentation.make(("x", "y"), ("x y x y",))
    assert grouppres.tietze_equivalent(g1, g5) is None


def test_apply_tietze_rejects_illegal_steps():
    g = GroupPresentation.make(("a",), ("a a",))
    with pytest.raises(grouppres.GroupError):
        grouppres.apply_tietze(g, (("remove", 5),))


# -- quotient counting ------------------------------------------------------


def test_enumerate_homs_matches_independent_oracle(rng):
    samples = [
        GroupPresentation.make(("x",), ()),  # Z
        GroupPresentation.make(("x",), ("x^3",)),  # Z/3
        GroupPresentation.make(("x", "y"), ("x y x^-1 y^-1",)),  # Z^2
        GroupPresentation.make(("x", "y"), ("x y x y^-1",)),
    ]
    for g in samples:
        for n in (2, 3):
            assert grouppres.enumerate_homs(g, n).total == count_homs_oracle(g, n)


def test_evaluate_word_composition_order():
    elems, index, table, inverse = grouppres._perm_table(3)
    x = index[(1, 0, 2)]  # transposition (1 2)
    y = index[(0, 2, 1)]  # transposition (2 3)
    identity = index[(0, 1, 2)]
    prod = grouppres.evaluate_word((1, 2), (x, y), table, inverse, identity)
    assert elems[prod] == (1, 2, 0)  # the 3-cycle x(y(.))


def test_enumerate_homs_range_check():
    g = GroupPresentation.make(("x",), ())
    with pytest.raises(grouppres.GroupError):
        grouppres.enumerate_homs(g, 7)


# -- presentations from diagrams -------------------------------------------


def test_wirtinger_unknot_and_hopf():
    g = grouppres.wirtinger(unknot())
    assert str(g.abelianization()) == "Z"
    h = grouppres.wirtinger(hopf())
    assert str(h.abelianization()) == "Z^2"


def test_wirtinger_trefoil_vs_unknot_quotients():
    trefoil = pdcode.Diagram(
        "trefoil",
        components=(
            pdcode.Component("k", pdcode.FRAMED, 0, edges=("k1", "k2", "k3", "k4")),
        ),
        boxes=(
            pdcode.TwistBox(
                "T", 3, strands=(pdcode.BoxStrand("k1", "k2"), pdcode.BoxStrand("k3", "k4"))
            ),
        ),
    )
    assert pdcode.validate(trefoil) == []
    g = grouppres.wirtinger(trefoil)
    qc = grouppres.enumerate_homs(g, 3)
    assert (qc.total, qc.surjective) == (12, 6)
    u = grouppres.wirtinger(unknot())
    qu = grouppres.enumerate_homs(u, 3)
    assert (qu.total, qu.surjective) == (6, 0)


def test_wirtinger_clasp_diagram_is_unknotted():
    # the plat closure of a two-strand twist region is an unknot for any
    # twist count, so its group has only abelian S3 quotients
    g = grouppres.wirtinger(clasp(5))
    qc = grouppres.enumerate_homs(g, 3)
    assert (qc.total, qc.surjective) == (6, 0)


def test_handlebody_pi1_dotted_generators():
    d = pdcode.Diagram(
        "dot",
        (
            pdcode.Component("a", pdcode.FRAMED, 0, edges=("a1",)),
            pdcode.Component(
                "m",
                pdcode.DOTTED,
                None,
                through=(pdcode.Pass("a1", 1, 0),),
            ),
        ),
    )
    g = grouppres.handlebody_pi1(d)
    assert g.generators == ("m",)
    assert g.relators == ((1,),)
