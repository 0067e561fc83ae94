"""Handle calculus and certified move scripts.

A handlebody is a diagram read as a 4-manifold: dotted circles are
1-handles, framed circles are 2-handles.  This walkthrough measures
invariants, performs slides and blowups, inspects a cork from the
bundled corpus, and replays one of its certified move scripts.

Run with:  python demos/02_handlebodies_and_scripts.py
"""

from kirby import corpus, handlebody, pdcode
from kirby.handlebody import Handlebody
from kirby.pdcode import Component, Crossing, Diagram, FRAMED

# -- invariants of a small plumbing -----------------------------------------

plumbing = Handlebody(
    Diagram(
        "plumbing",
        (Component("a", FRAMED, -2), Component("b", FRAMED, -2)),
        crossings=(
            Crossing("x0", 1, between=("a", "b")),
            Crossing("x1", 1, between=("a", "b")),
        ),
    )
)
report = handlebody.invariant_report(plumbing)
print("linking matrix:", report["linking_matrix"])
print("H1 =", report["homology"]["h1"], " boundary H1 =", report["boundary_h1"])
print("form:", report["form"]["rank"], "with signature", report["form"]["signature"])

# -- slides and blowups change the picture, not the boundary ---------------

slid = handlebody.slide(plumbing, "a", "b", sign=1)
print("after sliding a over b:", handlebody.invariant_report(slid)["linking_matrix"])
assert handlebody.boundary_H1(slid) == handlebody.boundary_H1(plumbing)

up = handlebody.blowup(plumbing, +1)
back = handlebody.blowdown(up, up.diagram.components[-1].id)
assert handlebody.invariant_report(back) == report
print("blowup then blowdown restores the report.")

# -- a cork from the corpus -------------------------------------------------
#
# The corpus ships contractible diagrams with marked boundary
# involutions.  `CorkPresentation` re-checks both claims on load.

doc = corpus.load_document()
w = Handlebody(doc.diagrams["W"])
marking = pdcode.SymmetryMarking(component_map=(("m", "a"), ("a", "m")))
cork = handlebody.CorkPresentation(w, marking)
print("W is contractible with boundary H1 =", handlebody.boundary_H1(w))

equiv = handlebody.check_equivariant(
    w, marking, ("slide", "a", "m", 1), ("slide", "m", "a", 1)
)
print("marking-conjugate of the example slide checks out:", equiv)

# -- replaying a certified move script -------------------------------------
#
# Scripts mix calculus moves, surface tracking, and inline assertions.
# The verdict is per step, with the boundary homology after each one.

rep = corpus.run_script(doc, "rho_0")
for step in rep.steps:
    mark = "ok " if step.ok else "FAIL"
    print(f"  [{step.index:2d}] {mark} {step.op:16s} boundary H1 = {step.boundary_h1}")
assert rep.ok
print("final tracked surface:", rep.surface)
print("done.")
