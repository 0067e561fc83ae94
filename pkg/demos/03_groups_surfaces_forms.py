"""Group presentations, ribbon surfaces, and intersection forms.

Three algebraic shadows of the same calculus: fundamental groups read
off diagrams (with finite-quotient counting to tell them apart), ribbon
surfaces with their 4-ball complements, and unimodular form arithmetic.

Run with:  python demos/03_groups_surfaces_forms.py
"""

from kirby import corpus, forms, grouppres, handlebody, surface

# -- knot groups and quotient counting --------------------------------------

doc = corpus.load_document()
g = grouppres.wirtinger(doc.diagrams["R_0"])
print("knot group:", len(g.generators), "generators,", len(g.relators), "relators")
qc = grouppres.enumerate_homs(g, 3)
print("maps to S3:", qc.total, "of which surjective:", qc.surjective)
assert qc.surjective > 0  # the knot is not unknotted

# Tietze simplification returns a replayable log: the simplified
# presentation is recomputed from the log, never trusted.
simp = grouppres.tietze_simplify(g, 1000)
assert grouppres.apply_tietze(g, simp.log) == simp.presentation
print("simplified to:", simp.presentation)

# -- ribbon surfaces and their complements ----------------------------------

a0 = corpus.build_surface(doc.surfaces["A_0"], doc)
print("surface chi =", surface.euler_characteristic(a0))
comp = surface.ribbon_complement(a0)
cg = handlebody.fundamental_group(comp)
print("complement group:", cg)
cq = grouppres.enumerate_homs(cg, 3)
print("complement maps to S3:", cq.total, "surjective:", cq.surjective)

# -- form arithmetic --------------------------------------------------------

q = forms.diagonal_form(1, 1, -1)
c = q.classify()
print("classify <1,1,-1>:", c.rank, c.signature, c.parity, c.definiteness)

# a reflection in a (-1)-class is an involutive isometry
iso = forms.reflect(q, [0, 0, 1])
assert iso.is_involution()
print("reflection matrix:", iso.matrix)

# blowing down a (+1)-class drops rank and signature by one
blown = forms.blowdown_class(q, [0, 1, 0])
print("after blowdown:", blown.classify())

# stable equivalence: odd forms absorb a hyperbolic summand
a = forms.stabilize(forms.stabilize(q, "<1>"), "<-1>")
b = forms.stabilize(q, "H")
print("Q+<1>+<-1> ~ Q+H:", forms.stably_equivalent(a, b).equivalent)
print("done.")
