"""End-to-end acceptance checks for the calculus, the bundled corpus, and
the verification machinery.  Each test is one externally checkable claim:
contractible corks, quotient counts with explicit witnesses, replayable
move scripts, form arithmetic at scale, and tamper detection."""

import itertools
from dataclasses import replace

import pytest
import sympy

from kirby import corpus, dsl, forms, grouppres, intmat, pdcode, script
from kirby import handlebody as hb
from kirby import surface as sf
from kirby.handlebody import Handlebody
from kirby.pdcode import Component, Crossing, Diagram, FRAMED

from conftest import random_unimodular


@pytest.fixture(scope="module")
def doc():
    return corpus.load_document()


# -- small independent S3 oracle -------------------------------------------


S3 = list(itertools.permutations(range(3)))
ID3 = (0, 1, 2)


def _compose(p, q):
    return tuple(p[q[i]] for i in range(3))


def _invert(p):
    out = [0] * 3
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _eval(word, images):
    acc = ID3
    for x in word:
        g = images[abs(x) - 1]
        if x < 0:
            g = _invert(g)
        acc = _compose(acc, g)
    return acc


# -- 1: the cork diagrams are contractible with 3-sphere-like boundary -----


def test_cork_family_contractible_with_trivial_boundary_h1(doc):
    names = ["W", "P"]
    for tag in corpus.TAGS:
        names += [f"C_{tag}", f"Cbar_{tag}"]
    for name in names:
        d = doc.diagrams[name]
        assert pdcode.validate(d) == []
        h = Handlebody(d)
        assert hb.homology(h).contractible, name
        assert str(hb.boundary_H1(h)) == "0", name
    # W carries the marked boundary involution, and conjugating a move by
    # the marking is mechanically checkable
    w = Handlebody(doc.diagrams["W"])
    marking = pdcode.SymmetryMarking(component_map=(("m", "a"), ("a", "m")))
    hb.CorkPresentation(w, marking)
    assert hb.check_equivariant(
        w, marking, ("slide", "a", "m", 1), ("slide", "m", "a", 1)
    )
    assert not hb.check_equivariant(
        w, marking, ("slide", "a", "m", 1), ("slide", "a", "m", 1)
    )


# -- 2: ribbon-complement quotient counts with an explicit witness ---------


def test_ribbon_complement_s3_counts_and_witness(doc):
    for tag in corpus.TAGS:
        s = corpus.build_surface(doc.surfaces[f"A_{tag}"], doc)
        g = hb.fundamental_group(sf.ribbon_complement(s))
        assert set(g.generators) == {"x", "y"}
        # the relator is Tietze-equivalent to x y (y x)^-2
        model = grouppres.GroupPresentation.make(("x", "y"), ("x y (y x)^-2",))
        assert grouppres.tietze_equivalent(g, model, 500) is not None
        # explicit witness: x -> (1 2), y -> (2 3); then a = x y is a 3-cycle
        witness = ((1, 0, 2), (0, 2, 1))
        assert all(_eval(r, witness) == ID3 for r in g.relators)
        a_image = _eval((1, 2), witness)
        assert sorted(a_image) == [0, 1, 2] and a_image != ID3
        assert len({a_image, _compose(a_image, a_image)}) == 2  # order 3
        # count of S3 representations matches a 36-pair brute force
        oracle = sum(
            1
            for images in itertools.product(S3, repeat=2)
            if all(_eval(r, images) == ID3 for r in g.relators)
        )
        qc = grouppres.enumerate_homs(g, 3)
        assert qc.total == oracle == 12
        assert qc.surjective == 6


# -- 3: the companion family has cyclic complements ------------------------


def test_companion_family_has_infinite_cyclic_complement(doc):
    model = grouppres.GroupPresentation.make(("x", "y"), ("x y (x^2 y^2)^-1",))
    for tag in corpus.TAGS:
        s = corpus.build_surface(doc.surfaces[f"Abar_{tag}"], doc)
        g = hb.fundamental_group(sf.ribbon_complement(s))
        assert str(g.abelianization()) == "Z"
        assert grouppres.tietze_equivalent(g, model, 500) is not None
        qc = grouppres.enumerate_homs(g, 3)
        assert qc.surjective == 0  # abelian image only


# -- 4: the sphere-moving scripts replay, preserving the boundary ----------


def test_sphere_scripts_replay_with_invariant_boundary(doc):
    for tag in corpus.TAGS:
        rep = corpus.run_script(doc, f"rho_{tag}")
        assert rep.ok, (tag, rep.steps[-1].detail)
        assert all(s.ok for s in rep.steps)
        # the boundary is untouched by every single step
        assert all(s.boundary_h1 == "0" for s in rep.steps), tag
        # endpoint: the one-handle diagram of the corresponding knot
        goal = Handlebody(doc.diagrams[f"R_{tag}"])
        assert rep.final == hb.invariant_report(goal)
        # the tracked sphere ends as the recorded corpus surface
        s_goal = corpus.build_surface(doc.surfaces[f"S_{tag}"], doc)
        assert rep.surface == script.surface_report(s_goal)


def test_flipping_a_trust_flag_breaks_replay(doc):
    ms = doc.scripts["rho_0"]
    idx = next(
        st.index for st in ms.steps if st.flag == "trusted-endpoints"
        if st.op == "isotopy"
    )
    steps = tuple(
        replace(st, flag="certified") if st.index == idx else st
        for st in ms.steps
    )
    tampered = replace(ms, steps=steps)

    def resolve(n):
        return Handlebody(doc.diagrams[n]) if n in doc.diagrams else None

    rep = script.run(tampered, Handlebody(doc.diagrams[ms.target]), resolve=resolve)
    assert not rep.ok
    assert rep.steps[-1].index == idx
    assert "could not certify" in rep.steps[-1].detail


# -- 5: the stabilized key isotopy replays ---------------------------------


def test_key_isotopy_replays(doc):
    rep = corpus.run_script(doc, "key_isotopy")
    assert rep.ok, rep.steps[-1].detail
    assert all(s.boundary_h1 == "0" for s in rep.steps)
    assert rep.surface == {
        "class": [1, 0, 0],
        "self_intersection": 1,
        "chi": 2,
        "sphere": True,
        "sheets": 1,
    }


# -- 6: stable classification arithmetic -----------------------------------


def test_elliptic_stabilization_classification():
    for n in range(1, 6):
        q = forms.elliptic_form(n)
        stab = forms.stabilize(forms.stabilize(q, "<1>"), "<-1>")
        c = stab.classify()
        assert (c.rank, c.signature, c.parity) == (12 * n, -8 * n, "odd")
        target = forms.decomposable_form(2 * n, 10 * n)
        assert target.classify() == c
        assert forms.stably_equivalent(stab, target).equivalent


def test_random_odd_forms_absorb_hyperbolic_summands(rng):
    done = 0
    while done < 200:
        n = rng.randint(1, 8)
        entries = [rng.choice([1, -1]) for _ in range(n)]
        e, _ = random_unimodular(n, rng)
        base = forms.diagonal_form(*entries)
        rows = intmat.matmul(intmat.matmul(intmat.transpose(e), base.rows), e)
        q = forms.BilinearForm.from_rows(rows)
        assert q.parity == "odd"
        a = forms.stabilize(forms.stabilize(q, "<1>"), "<-1>")
        b = forms.stabilize(q, "H")
        assert forms.stably_equivalent(a, b).equivalent
        done += 1


# -- 7: isometries at scale -------------------------------------------------


def test_reflections_and_fs_actions_at_scale(rng):
    done = 0
    while done < 500:
        n = rng.randint(3, 6)
        entries = [1, -1, -1] + [rng.choice([1, -1]) for _ in range(n - 3)]
        e, e_inv = random_unimodular(n, rng)
        base = forms.diagonal_form(*entries)
        rows = intmat.matmul(intmat.matmul(intmat.transpose(e), base.rows), e)
        q = forms.BilinearForm.from_rows(rows)
        cols = [[row[i] for row in e_inv] for i in range(n)]
        if done % 2:
            sigma = cols[rng.randrange(n)]
            iso = forms.reflect(q, sigma)
            again = forms.reflect(q, list(sigma))
        else:
            iso = forms.fs_action(q, cols[0], cols[1], cols[2])
            assert iso.determinant() == 1
            again = forms.fs_action(q, list(cols[0]), list(cols[1]), list(cols[2]))
        # the matrix depends only on the classes, and preserves the form
        assert again.matrix == iso.matrix
        m = sympy.Matrix(iso.rows)
        qq = sympy.Matrix(q.rows)
        assert m.T * qq * m == qq
        if done % 2:
            assert iso.is_involution()
            assert iso.apply(sigma) == [-x for x in sigma]
        done += 1


# -- 8: handle moves against the congruence oracle at scale ----------------


def test_slides_and_blowdowns_at_scale(rng):
    moves = 0
    while moves < 500:
        n = rng.randint(2, 4)
        ids = [f"c{i}" for i in range(n)]
        comps = tuple(
            Component(c, FRAMED, rng.randint(-2, 2)) for c in ids
        )
        crossings = []
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                v = rng.randint(-1, 1)
                for k in range(2 * abs(v)):
                    crossings.append(
                        Crossing(f"x{a}{b}{k}", v, between=(a, b))
                    )
        h = Handlebody(Diagram("rand", comps, tuple(crossings)))
        q = pdcode.linking_matrix(h.diagram, ids)
        for _ in range(rng.randint(2, 6)):
            if rng.random() < 0.25:
                sign = rng.choice([1, -1])
                before = hb.invariant_report(h)
                up = hb.blowup(h, sign)
                uid = up.diagram.components[-1].id
                c = hb.intersection_form(up).classify()
                c0 = forms.BilinearForm.from_rows(q).classify()
                assert (c.rank, c.signature) == (c0.rank + 1, c0.signature + sign)
                assert hb.invariant_report(hb.blowdown(up, uid)) == before
                moves += 1
                continue
            ia, ic = rng.sample(range(n), 2)
            sign = rng.choice([1, -1])
            h = hb.slide(h, ids[ia], ids[ic], sign)
            e = intmat.identity(n)
            e[ic][ia] = sign
            q = intmat.matmul(intmat.matmul(intmat.transpose(e), q), e)
            assert pdcode.linking_matrix(h.diagram, ids) == q
            moves += 1


# -- 9: class bookkeeping for the stabilized sphere pairs ------------------


def test_brunnian_class_bookkeeping(doc):
    for m in (2, 3):
        got = corpus.compute_case(f"brunnian_m{m}", doc)
        rank = 4 + 2 * (m - 2)
        assert got["ambient"] == {
            "rank": rank,
            "signature": 0,
            "parity": "odd",
            "definiteness": "indefinite",
        }
        # both spheres carry the same class, of square one
        assert got["class_S"] == got["class_T"]
        assert got["pairing_ST"] == 1
        # blowing the class down lands in the odd indefinite target
        assert got["blowdown"] == got["target"]
        assert got["blowdown"]["rank"] == rank - 1
        assert got["blowdown"]["signature"] == -1
        assert got["blowdown"]["parity"] == "odd"
        assert got["matches_target"] is True
        # independent re-derivation of the blowdown classification
        q = forms.diagonal_form(1, 1, -1, -1)
        for _ in range(m - 2):
            q = q.direct_sum(forms.hyperbolic_form())
        v = [0] * q.rank
        v[1] = 1
        blown = forms.blowdown_class(q, v).classify()
        target = forms.diagonal_form(1, -1, -1)
        for _ in range(m - 2):
            target = target.direct_sum(forms.hyperbolic_form())
        assert blown == target.classify()


# -- 10: tamper detection ---------------------------------------------------


def test_tampered_frozen_report_is_localized(doc, monkeypatch):
    original = corpus.expected_case

    def tampered(name):
        out = original(name)
        if name == "R_stab":
            out["report"]["linking_matrix"][0][0] += 1
        return out

    monkeypatch.setattr(corpus, "expected_case", tampered)
    rep = corpus.verify_corpus(["R_stab"], doc=doc)
    assert not rep.ok
    (diff,) = rep.results[0].diffs
    assert diff.startswith("$.report.linking_matrix[0][0]:")


def test_tampered_tietze_log_is_rejected(doc):
    s = corpus.build_surface(doc.surfaces["Abar_0"], doc)
    g = hb.fundamental_group(sf.ribbon_complement(s))
    simp = grouppres.tietze_simplify(g, 500)
    assert simp.log  # the group actually simplifies
    assert grouppres.apply_tietze(g, simp.log) == simp.presentation
    for bad in (
        simp.log + (("remove", 99),),
        (("invert", 5),) + simp.log,
        simp.log[:-1],
        tuple(("rotate", 0, 1) if i == 0 else st for i, st in enumerate(simp.log)),
    ):
        try:
            replay = grouppres.apply_tietze(g, bad)
        except grouppres.GroupError:
            continue
        assert replay != simp.presentation


def test_tampered_script_step_is_localized(doc):
    tampered_doc = dsl.Document(
        dict(doc.diagrams), dict(doc.surfaces), dict(doc.scripts)
    )
    ms = tampered_doc.scripts["key_isotopy"]
    steps = list(ms.steps)
    victim = next(i for i, st in enumerate(steps) if st.op == "surface_slide")
    old_sign = steps[victim].args.get("sign", "+")
    steps[victim] = replace(
        steps[victim],
        args={**steps[victim].args, "sign": "-" if old_sign in ("+", 1) else "+"},
    )
    tampered_doc.scripts["key_isotopy"] = replace(ms, steps=tuple(steps))
    rep = corpus.verify_corpus(["key_isotopy"], doc=tampered_doc)
    assert not rep.ok
    assert any("steps[" in d or "$.ok" in d for d in rep.results[0].diffs)
    # the replay itself fails at a specific step index
    replayed = corpus.run_script(tampered_doc, "key_isotopy")
    assert not replayed.ok
    assert replayed.steps[-1].index >= victim
