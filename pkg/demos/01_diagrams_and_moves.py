"""Framed link diagrams and their moves, from the ground up.

A diagram is a set of components (framed circles attach 2-handles,
dotted circles carve out 1-handles) whose strands meet at crossings and
twist boxes.  This walkthrough builds a Hopf link, checks it, measures
linking numbers, and plays with Reidemeister moves.

Run with:  python demos/01_diagrams_and_moves.py
"""

from kirby import pdcode
from kirby.pdcode import BoxStrand, Component, Crossing, Diagram, FRAMED, TwistBox

# -- a Hopf link, crossing by crossing --------------------------------------
#
# Each crossing lists its four edges in planar cyclic slot order; the two
# strands run through slots (0, 2) and (1, 3), and `over` says which one
# is on top.

hopf = Diagram(
    "hopf",
    components=(
        Component("a", FRAMED, 0, edges=("a1", "a2")),
        Component("b", FRAMED, 0, edges=("b1", "b2")),
    ),
    crossings=(
        Crossing("x1", 1, edges=("a1", "b1", "a2", "b2"), over=1),
        Crossing("x2", 1, edges=("b2", "a2", "b1", "a1"), over=1),
    ),
)

problems = pdcode.validate(hopf)
print("validation problems:", problems or "none")
assert problems == []

print("lk(a, b) =", pdcode.linking_number(hopf, "a", "b"))
assert pdcode.linking_number(hopf, "a", "b") == 1

mirror = pdcode.mirror(hopf)
print("lk(a, b) in the mirror =", pdcode.linking_number(mirror, "a", "b"))

# -- twist boxes ------------------------------------------------------------
#
# Long twist regions are kept symbolic: a box with k half-twists on a set
# of parallel strands.  `expand_twistboxes` turns the box into honest
# crossings when you need them.

trefoil = Diagram(
    "trefoil",
    components=(Component("k", FRAMED, 0, edges=("k1", "k2", "k3", "k4")),),
    boxes=(
        TwistBox("T", 3, strands=(BoxStrand("k1", "k2"), BoxStrand("k3", "k4"))),
    ),
)
assert pdcode.validate(trefoil) == []
expanded = pdcode.expand_twistboxes(trefoil)
print("trefoil crossings after expansion:", [x.id for x in expanded.crossings])

# -- Reidemeister moves -----------------------------------------------------
#
# Moves are exact rewrites; every move checks its own applicability and
# raises MoveError on an illegal site.

unknot = Diagram("u", (Component("a", FRAMED, 0, edges=("a1",)),))
kinked = pdcode.reidemeister(unknot, "R1", ("insert", "a1", 1))
print("after an R1 kink:", len(kinked.crossings), "crossing")
flat = pdcode.r1_remove(kinked, kinked.crossings[0].id)
assert len(flat.crossings) == 0

try:
    pdcode.r1_remove(hopf, "x1")
except pdcode.MoveError as exc:
    print("removing a non-kink is refused:", exc)

print("done.")
