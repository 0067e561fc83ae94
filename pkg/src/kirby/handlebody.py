"""Kirby diagrams as 4-manifold presentations.

A 2-handlebody is a framed-link diagram (dotted circles carve out
1-handles, framed circles attach 2-handles) plus optional 3- and 4-handle
counts.  This module provides the handle calculus — slides, blowups,
blowdowns, dot/zero swaps, 1-2 cancellation — and the algebraic shadows:
homology, intersection form, boundary homology, extension certificates,
and equivariance bookkeeping for marked symmetric diagrams.

Slides and cancellations operate at the algebraic level: the result is a
diagram whose components are free loops carrying exact pairwise linking
numbers (as abstract crossings), framings, and through-pass words.  Every
invariant defined on such diagrams (homology, forms, fundamental group)
transforms by the textbook formulas, which the tests check against
independent matrix congruence oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import forms, intmat, pdcode
from .forms import BilinearForm
from .intmat import AbelianGroup
from .pdcode import (
    Component,
    Crossing,
    Diagram,
    DiagramError,
    Pass,
    SymmetryMarking,
    TwistBox,
)


class HandlebodyError(ValueError):
    pass


@dataclass(frozen=True)
class Handlebody:
    diagram: Diagram
    three_handles: int = 0
    four_handles: int = 0

    def __post_init__(self):
        if self.three_handles < 0 or self.four_handles not in (0, 1):
            raise HandlebodyError("handle counts out of range")

    def with_diagram(self, d: Diagram) -> "Handlebody":
        return replace(self, diagram=d)


def validate(h: Handlebody) -> list[str]:
    return pdcode.validate(h.diagram)


# ---------------------------------------------------------------------------
# Algebraic model: framings, pairwise linking, through-pass words
#
# A pass word for a framed component lists its signed passes through the
# dotted circles, in order along the component.  Together with the linking
# matrix this determines every invariant the calculus moves must preserve.


@dataclass
class _Model:
    order: list[str]
    kind: dict[str, str]
    framing: dict[str, int]
    lk: dict[frozenset, int]
    words: dict[str, list[tuple[str, int]]]  # framed id -> [(dot id, sign)]

    def linking(self, a: str, b: str) -> int:
        return self.lk.get(frozenset((a, b)), 0)


def _model_from_diagram(d: Diagram) -> _Model:
    order = [c.id for c in d.components]
    kind = {c.id: c.kind for c in d.components}
    framing = {c.id: c.framing if c.framing is not None else 0 for c in d.components}
    lk = {}
    for i, a in enumerate(order):
        for b in order[i + 1:]:
            v = pdcode.linking_number(d, a, b)
            if v:
                lk[frozenset((a, b))] = v
    owner = d.edge_owner()
    per_comp: dict[str, list] = {}
    for dot in d.components:
        if dot.kind != pdcode.DOTTED:
            continue
        for p in dot.through:
            cid = owner.get(p.edge)
            if cid is None:
                raise HandlebodyError(f"pass references unknown edge {p.edge}")
            per_comp.setdefault(cid, []).append((p.edge, p.seq, dot.id, p.sign))
    words: dict[str, list[tuple[str, int]]] = {}
    for c in d.components:
        if c.kind != pdcode.FRAMED:
            continue
        passes = per_comp.get(c.id, [])
        pos = {e: i for i, e in enumerate(c.edges)}
        passes.sort(key=lambda t: (pos.get(t[0], 0), t[1]))
        words[c.id] = [(dot, s) for _, _, dot, s in passes]
    return _Model(order, kind, framing, lk, words)


def _model_to_diagram(m: _Model, name: str = "") -> Diagram:
    loop = {
        cid: f"{cid}.l" for cid in m.order if m.kind[cid] != pdcode.DOTTED
    }
    comps = []
    for cid in m.order:
        if m.kind[cid] == pdcode.DOTTED:
            through = []
            for fid in sorted(m.words):
                for seq, (dot, s) in enumerate(m.words[fid]):
                    if dot == cid:
                        through.append(Pass(loop[fid], s, seq))
            comps.append(Component(cid, pdcode.DOTTED, through=tuple(through)))
        else:
            comps.append(
                Component(
                    cid,
                    m.kind[cid],
                    framing=m.framing[cid] if m.kind[cid] == pdcode.FRAMED else None,
                    edges=(loop[cid],),
                )
            )
    crossings = []
    n = 0
    for key, v in sorted(m.lk.items(), key=lambda kv: sorted(kv[0])):
        a, b = sorted(key)
        if m.kind[a] == pdcode.DOTTED or m.kind[b] == pdcode.DOTTED:
            contribution = sum(
                s for dot, s in m.words.get(a, m.words.get(b, [])) if dot in key
            )
            v = v - contribution  # passes already account for this much
        sign = 1 if v > 0 else -1
        for _ in range(2 * abs(v)):
            crossings.append(Crossing(f"ax{n}", sign, between=(a, b)))
            n += 1
    return Diagram(name, tuple(comps), tuple(crossings))


def _abstract(h: Handlebody) -> tuple[_Model, Handlebody]:
    m = _model_from_diagram(h.diagram)
    return m, h


# ---------------------------------------------------------------------------
# Invariants


def pass_matrix(d: Diagram) -> tuple[list[list[int]], list[str], list[str]]:
    """Algebraic pass counts: rows = dotted circles, columns = 2-handles."""
    dots = [c.id for c in d.components if c.kind == pdcode.DOTTED]
    framed = [c.id for c in d.components if c.kind == pdcode.FRAMED]
    m = _model_from_diagram(d)
    p = intmat.zeros(len(dots), len(framed))
    for j, fid in enumerate(framed):
        for dot, s in m.words.get(fid, []):
            p[dots.index(dot)][j] += s
    return p, dots, framed


def is_connected(d: Diagram) -> bool:
    ids = [c.id for c in d.components]
    if len(ids) <= 1:
        return True
    owner = d.edge_owner()
    adj: dict[str, set[str]] = {i: set() for i in ids}

    def link(a, b):
        if a != b:
            adj[a].add(b)
            adj[b].add(a)

    for x in d.crossings:
        if x.is_geometric:
            owners = {owner[e] for e in x.edges}
            for a in owners:
                for b in owners:
                    link(a, b)
        else:
            link(*x.between)
    for box in d.boxes:
        owners = {owner[s.left] for s in box.strands}
        for a in owners:
            for b in owners:
                link(a, b)
    for c in d.components:
        for p in c.through:
            link(c.id, owner[p.edge])
    seen = {ids[0]}
    frontier = [ids[0]]
    while frontier:
        for b in adj[frontier.pop()]:
            if b not in seen:
                seen.add(b)
                frontier.append(b)
    return len(seen) == len(ids)


@dataclass(frozen=True)
class HomologyReport:
    h1: AbelianGroup
    h2_rank: int
    contractible: bool


def homology(h: Handlebody) -> HomologyReport:
    p, dots, framed = pass_matrix(h.diagram)
    h1 = intmat.cokernel(p, ambient_rank=len(dots))
    h2_rank = len(framed) - intmat.rank(p)
    square_unimodular = (
        len(dots) == len(framed) and (not dots or intmat.is_unimodular(p))
    )
    contractible = (
        square_unimodular
        and h.three_handles == 0
        and is_connected(h.diagram)
    )
    return HomologyReport(h1, h2_rank, contractible)


def intersection_form(h: Handlebody) -> BilinearForm:
    """The linking matrix of the 2-handles, with framings on the diagonal.

    Defined here only when no 2-handle passes over a 1-handle (algebraic
    pass matrix zero); the general case needs boundary corrections this
    calculus never requires after cancellation.
    """
    p, dots, framed = pass_matrix(h.diagram)
    if any(any(row) for row in p):
        raise HandlebodyError("intersection form undefined: 2-handles pass over 1-handles")
    q = pdcode.linking_matrix(h.diagram, framed)
    return BilinearForm.from_rows(q)


def boundary_diagram(d: Diagram) -> Diagram:
    """Surgery diagram of the boundary: every dotted circle becomes 0-framed."""
    comps = tuple(
        replace(c, kind=pdcode.FRAMED, framing=0) if c.kind == pdcode.DOTTED else c
        for c in d.components
    )
    return replace(d, components=comps)


def boundary_H1(h: Handlebody) -> AbelianGroup:
    b = boundary_diagram(h.diagram)
    ids = [c.id for c in b.components if c.kind == pdcode.FRAMED]
    q = pdcode.linking_matrix(b, ids)
    return intmat.cokernel(q, ambient_rank=len(ids))


def fundamental_group(h: Handlebody):
    from . import grouppres

    return grouppres.handlebody_pi1(h.diagram)


def invariant_report(h: Handlebody) -> dict:
    from . import grouppres

    hom = homology(h)
    report = {
        "components": len(h.diagram.components),
        "linking_matrix": [
            list(r) for r in pdcode.linking_matrix(h.diagram)
        ],
        "homology": {
            "h1": str(hom.h1),
            "h2_rank": hom.h2_rank,
            "contractible": hom.contractible,
        },
        "boundary_h1": str(boundary_H1(h)),
        "pi1": str(fundamental_group(h)),
    }
    try:
        form = intersection_form(h)
        c = form.classify()
        report["form"] = {
            "matrix": [list(r) for r in form.matrix],
            "rank": c.rank,
            "signature": c.signature,
            "parity": c.parity,
        }
    except HandlebodyError:
        report["form"] = None
    return report


# ---------------------------------------------------------------------------
# Calculus moves


def slide(h: Handlebody, a: str, c: str, sign: int = 1) -> Handlebody:
    """Band-sum 2-handle ``a`` with a framed pushoff of 2-handle ``c``.

    The result is algebraic: a's framing becomes f_a + f_c + 2*sign*lk(a,c),
    its linking row gains sign * (c's row), and its pass word gains a copy
    of c's word (inverted for a negative slide).  The band is taken in the
    diagram complement, so no new linking is introduced.
    """
    if sign not in (1, -1):
        raise HandlebodyError("slide sign must be +-1")
    d = h.diagram
    ca, cc = d.component(a), d.component(c)
    if a == c:
        raise HandlebodyError("cannot slide a handle over itself")
    if ca.kind != pdcode.FRAMED or cc.kind != pdcode.FRAMED:
        raise HandlebodyError("slides are supported for framed components only")
    m = _model_from_diagram(d)
    m.framing[a] = m.framing[a] + m.framing[c] + 2 * sign * m.linking(a, c)
    new_lk = dict(m.lk)
    for x in m.order:
        if x in (a, c):
            continue
        v = m.linking(a, x) + sign * m.linking(c, x)
        key = frozenset((a, x))
        if v:
            new_lk[key] = v
        else:
            new_lk.pop(key, None)
    v = m.linking(a, c) + sign * m.framing[c]
    key = frozenset((a, c))
    if v:
        new_lk[key] = v
    else:
        new_lk.pop(key, None)
    m.lk = new_lk
    wc = m.words.get(c, [])
    add = wc if sign > 0 else [(dot, -s) for dot, s in reversed(wc)]
    m.words[a] = m.words.get(a, []) + list(add)
    return h.with_diagram(_model_to_diagram(m, d.name))


def _rename_head(d: Diagram, old: str, new: str, inc) -> Diagram:
    """Point the vertex at ``old``'s head to ``new`` after a split."""
    head = inc.ends.get(old, (None, None))[1]
    if head is None:
        return d
    vid, slot = head
    for i, x in enumerate(d.crossings):
        if x.id == vid:
            edges = list(x.edges)
            if edges[slot] != old:
                raise HandlebodyError(f"crossing {vid}: slot bookkeeping failed")
            edges[slot] = new
            crossings = list(d.crossings)
            crossings[i] = replace(x, edges=tuple(edges))
            return replace(d, crossings=tuple(crossings))
    for i, b in enumerate(d.boxes):
        if b.id == vid:
            k = len(b.strands)
            if slot < k:
                row, side = slot, "left"
            elif b.halftwists % 2:
                row, side = slot - k, "right"
            else:
                row, side = 2 * k - 1 - slot, "right"
            s = b.strands[row]
            s = replace(s, left=new) if side == "left" else replace(s, right=new)
            strands = list(b.strands)
            strands[row] = s
            boxes = list(d.boxes)
            boxes[i] = replace(b, strands=tuple(strands))
            return replace(d, boxes=tuple(boxes))
    return d


def _insert_twist_box(d: Diagram, passes, halftwists: int) -> Diagram:
    """Split each passing edge and thread it through a new twist box.

    ``passes`` is a sequence of (edge, sign); a negative sign means the
    strand runs through the box against the left-to-right direction.
    """
    try:
        inc = pdcode.resolve_incidence(d)
    except DiagramError:
        inc = None
    strands = []
    renames = []
    fresh = d.fresh_edges(len(passes))
    for (edge, sign), new in zip(passes, fresh):
        if sign > 0:
            strands.append(pdcode.BoxStrand(edge, new, orient=1))
        else:
            strands.append(pdcode.BoxStrand(new, edge, orient=-1))
        renames.append((edge, new))
    box = TwistBox(d.fresh_id("tb"), halftwists, tuple(strands))
    if inc is not None:
        for old, new in renames:
            d = _rename_head(d, old, new, inc)
    comps = []
    for c in d.components:
        if any(old in c.edges for old, _ in renames):
            cycle = []
            for e in c.edges:
                cycle.append(e)
                for old, new in renames:
                    if e == old:
                        cycle.append(new)
            c = replace(c, edges=tuple(cycle))
        comps.append(c)
    return replace(d, components=tuple(comps), boxes=d.boxes + (box,))


def blowup(h: Handlebody, sign: int, through=()) -> Handlebody:
    """Connected-sum with a ±1 sphere: add a ±1-framed unknot, optionally
    encircling the listed strands.

    ``through`` lists (edge, sign) pairs (bare edges mean sign +1).  A
    linked blowup inserts a compensating full twist of the same sign on
    the strands and corrects their framings by +sign*l^2, so the manifold
    and its boundary only change by the connected sum.  The new component
    is round-encoded and can always be blown down again.
    """
    if sign not in (1, -1):
        raise HandlebodyError("blowup sign must be +-1")
    through = [
        (p, 1) if isinstance(p, str) else (p[0], p[1]) for p in through
    ]
    d = h.diagram
    owner = d.edge_owner()
    counts: dict[str, int] = {}
    for e, s in through:
        if e not in owner:
            raise HandlebodyError(f"unknown edge {e!r}")
        if s not in (1, -1):
            raise HandlebodyError("pass signs must be +-1")
        cid = owner[e]
        if d.component(cid).kind == pdcode.DOTTED:
            raise HandlebodyError("blowup through a dotted circle is unsupported")
        counts[cid] = counts.get(cid, 0) + s
    if len({e for e, _ in through}) != len(through):
        raise HandlebodyError("blowup with repeated through-edges is unsupported")
    uid = d.fresh_id("u")
    passes = tuple(Pass(e, s, i) for i, (e, s) in enumerate(through))
    comps = []
    for c in d.components:
        if c.id in counts and c.framing is not None:
            c = replace(c, framing=c.framing + sign * counts[c.id] ** 2)
        comps.append(c)
    comps.append(Component(uid, pdcode.FRAMED, framing=sign, through=passes))
    d2 = replace(d, components=tuple(comps))
    if through:
        d2 = _insert_twist_box(d2, through, 2 * sign)
    return h.with_diagram(d2)


def blowdown(h: Handlebody, u: str) -> Handlebody:
    """Blow down a round-encoded ±1-framed unknot.

    The unknot is deleted and a compensating full twist box (of opposite
    sign) is inserted on the strands through its disk; framings pick up
    the usual -eps * l^2 correction, where l is each component's total
    signed pass count through the disk.
    """
    d = h.diagram
    cu = d.component(u)
    if cu.kind != pdcode.FRAMED or cu.framing not in (1, -1):
        raise HandlebodyError("blowdown needs a framed component with framing +-1")
    if not cu.is_round:
        # a free loop (single edge meeting no vertex and carrying no
        # passes) is an unknot diagram too
        used = {e for x in d.crossings if x.is_geometric for e in x.edges}
        used |= {e for b in d.boxes for s in b.strands for e in (s.left, s.right)}
        if not (cu.is_loop and cu.edges[0] not in used):
            raise HandlebodyError(f"component {u} is not round-encoded")
        if any(p.edge == cu.edges[0] for c in d.components for p in c.through):
            raise HandlebodyError(
                "blowdown target is passed over by other components"
            )
    eps = cu.framing
    owner = d.edge_owner()
    edges = [p.edge for p in cu.through]
    if len(set(edges)) != len(edges):
        raise HandlebodyError("blowdown with repeated through-edges is unsupported")
    for x in d.crossings:
        if not x.is_geometric and u in x.between:
            raise HandlebodyError(
                "blowdown target has linking not recorded by its through-strands"
            )
    # framing corrections from total signed pass counts
    counts: dict[str, int] = {}
    for p in cu.through:
        cid = owner[p.edge]
        if d.component(cid).kind == pdcode.DOTTED:
            raise HandlebodyError("blowdown through a dotted circle is unsupported")
        counts[cid] = counts.get(cid, 0) + p.sign
    comps = []
    for c in d.components:
        if c.id == u:
            continue
        if c.id in counts and c.framing is not None:
            c = replace(c, framing=c.framing - eps * counts[c.id] ** 2)
        comps.append(c)
    d2 = replace(d, components=tuple(comps))
    if cu.through:
        d2 = _insert_twist_box(d2, [(p.edge, p.sign) for p in cu.through], -2 * eps)
    return h.with_diagram(d2)


def swap_dot(h: Handlebody, c: str, certificate: str | None = None) -> Handlebody:
    """Exchange a dot with a zero framing on a round component.

    Dotted -> 0-framed is always legal (surgery description of the same
    boundary).  0-framed -> dotted asserts the circle bounds a trivial
    disk in the 4-manifold; that fact is corpus data, so a certificate
    token must be supplied.
    """
    d = h.diagram
    comp = d.component(c)
    if comp.kind == pdcode.DOTTED:
        new = replace(comp, kind=pdcode.FRAMED, framing=0)
    elif comp.kind == pdcode.FRAMED:
        if comp.framing != 0:
            raise HandlebodyError("only 0-framed components can be dotted")
        if not comp.is_round:
            raise HandlebodyError("dotting requires a round-encoded component")
        if certificate is None:
            raise HandlebodyError("dotting a 0-framed circle needs a disk certificate")
        new = replace(comp, kind=pdcode.DOTTED, framing=None)
    else:
        raise HandlebodyError(f"cannot swap dot on kind {comp.kind!r}")
    comps = tuple(new if x.id == c else x for x in d.components)
    return h.with_diagram(replace(d, components=comps))


def cancel_pair(h: Handlebody, dot: str, framed: str) -> Handlebody:
    """Cancel a 1-handle/2-handle pair.

    The 2-handle must run through the dotted circle geometrically once.
    Every other component is first slid off the dotted circle over the
    cancelling 2-handle (the algebraic rerouting of the cancellation),
    then the pair is deleted.
    """
    d = h.diagram
    cd, cf = d.component(dot), d.component(framed)
    if cd.kind != pdcode.DOTTED or cf.kind != pdcode.FRAMED:
        raise HandlebodyError("cancel_pair needs a dotted and a framed component")
    m = _model_from_diagram(d)
    wf = m.words.get(framed, [])
    hits = [(i, s) for i, (dt, s) in enumerate(wf) if dt == dot]
    if len(hits) != 1:
        raise HandlebodyError(
            f"component {framed} passes {len(hits)} times through {dot}, need exactly 1"
        )
    idx, s = hits[0]

    # the cancelling relator reads u dot^s v = 1, so each pass through the
    # dot is rerouted along (u^-1 v^-1)^s — one slide over the 2-handle per
    # pass, inserted at the position of the pass
    def inv(word):
        return [(dt, -sg) for dt, sg in reversed(word)]

    u, v = wf[:idx], wf[idx + 1:]
    rep = inv(u) + inv(v)
    if s < 0:
        rep = inv(rep)

    slides: dict[str, int] = {}  # net number of slides over `framed`
    new_words: dict[str, list[tuple[str, int]]] = {}
    for x, wx in m.words.items():
        if x == framed:
            continue
        out: list[tuple[str, int]] = []
        count = 0
        for dt, sg in wx:
            if dt == dot:
                out.extend(rep if sg > 0 else inv(rep))
                count -= s * sg
            else:
                out.append((dt, sg))
        new_words[x] = out
        slides[x] = count

    others = [x for x in m.order if x not in (dot, framed)]
    fc = m.framing[framed]
    new_lk: dict[frozenset, int] = {}
    for i, x in enumerate(others):
        mx = slides.get(x, 0)
        if m.kind[x] == pdcode.FRAMED:
            m.framing[x] += mx * mx * fc + 2 * mx * m.linking(x, framed)
        for y in others[i + 1:]:
            my = slides.get(y, 0)
            val = (
                m.linking(x, y)
                + mx * m.linking(framed, y)
                + my * m.linking(x, framed)
                + mx * my * fc
            )
            if val:
                new_lk[frozenset((x, y))] = val
    m.order = others
    m.lk = new_lk
    m.words = new_words
    m.kind.pop(dot), m.kind.pop(framed)
    m.framing.pop(dot), m.framing.pop(framed)
    return h.with_diagram(_model_to_diagram(m, d.name))


# ---------------------------------------------------------------------------
# Extension certificates and equivariance


@dataclass(frozen=True)
class ExtensionCheck:
    status: str  # "certified" | "refused"
    reasons: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def extension_check(h: Handlebody, images) -> ExtensionCheck:
    """Necessary homological conditions for a boundary map to extend over
    the 2-handles.

    ``images`` lists, for each 2-handle, the image of its belt-sphere
    meridian as (linking vector over the boundary surgery components,
    framing).  Certification requires framing 0 and the right class in
    the first homology of the boundary; it never asserts a smooth
    extension exists.
    """
    b = boundary_diagram(h.diagram)
    ids = [c.id for c in b.components if c.kind == pdcode.FRAMED]
    q = pdcode.linking_matrix(b, ids)
    framed = [c.id for c in h.diagram.components if c.kind == pdcode.FRAMED]
    if len(images) != len(framed):
        raise HandlebodyError(
            f"{len(images)} curves given for {len(framed)} 2-handles"
        )
    reasons = []
    for fid, (vec, fr) in zip(framed, images):
        if fr != 0:
            reasons.append(f"meridian image for {fid} has framing {fr}, expected 0")
            continue
        if len(vec) != len(ids):
            raise HandlebodyError("linking vector has wrong length")
        target = [0] * len(ids)
        target[ids.index(fid)] = 1
        diff = [v - t for v, t in zip(vec, target)]
        if intmat.solve(q, diff) is None:
            reasons.append(
                f"meridian image for {fid} is not the meridian class in H1(boundary)"
            )
    if reasons:
        return ExtensionCheck("refused", tuple(reasons))
    return ExtensionCheck("certified")


def marking_is_automorphism(d: Diagram, marking: SymmetryMarking) -> bool:
    """Does the marking permute components preserving kind, framing,
    linking numbers, and pass words (up to the marked edge map)?"""
    cmap = {c.id: marking.comp(c.id) for c in d.components}
    ids = set(cmap)
    if set(cmap.values()) != ids:
        return False
    for c in d.components:
        img = d.component(cmap[c.id])
        if (c.kind, c.framing) != (img.kind, img.framing):
            return False
    for a in ids:
        for b in ids:
            if a < b:
                if pdcode.linking_number(d, a, b) != pdcode.linking_number(
                    d, cmap[a], cmap[b]
                ):
                    return False
    m = _model_from_diagram(d)
    for fid, word in m.words.items():
        img_word = m.words.get(cmap[fid], [])
        mapped = [(cmap[dt], s) for dt, s in word]
        rotations = [
            img_word[k:] + img_word[:k] for k in range(max(len(img_word), 1))
        ]
        reversed_ = [list(reversed([(dt, -s) for dt, s in r])) for r in rotations]
        if mapped not in rotations and mapped not in reversed_:
            return False
    return True


def check_equivariant(h: Handlebody, marking: SymmetryMarking, move, image_move) -> bool:
    """True iff ``image_move`` is the marking-conjugate of ``move``.

    Moves are tuples: op name followed by its arguments; component and
    edge arguments are translated through the marking.
    """
    if not marking_is_automorphism(boundary_diagram(h.diagram), marking):
        raise HandlebodyError("marking is not an automorphism of the boundary diagram")

    def translate(move):
        op, *args = move
        out = [op]
        known_comps = {c.id for c in h.diagram.components}
        known_edges = set(h.diagram.edge_owner())
        for a in args:
            if isinstance(a, str) and a in known_comps:
                out.append(marking.comp(a))
            elif isinstance(a, str) and a in known_edges:
                out.append(marking.edge(a))
            elif isinstance(a, tuple):
                out.append(tuple(marking.edge(e) for e in a))
            else:
                out.append(a)
        return tuple(out)

    return translate(tuple(move)) == tuple(image_move)


@dataclass(frozen=True)
class CorkPresentation:
    """A contractible handlebody with a marked boundary involution."""

    handlebody: Handlebody
    marking: SymmetryMarking

    def __post_init__(self):
        rep = homology(self.handlebody)
        if not rep.contractible:
            raise HandlebodyError("cork presentations must be contractible")
        b = boundary_diagram(self.handlebody.diagram)
        if not marking_is_automorphism(b, self.marking):
            raise HandlebodyError("marking is not a boundary automorphism")
