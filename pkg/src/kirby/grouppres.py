"""Finitely presented groups: words, Tietze moves, abelianization, and
homomorphism counting into symmetric groups.

Words are tuples of nonzero ints: letter ``i+1`` is the i-th generator,
negative letters are inverses.  Relators are kept freely and cyclically
reduced.  Simplification works by logged Tietze moves, so every reduction
ships with a replayable certificate: applying the log to the input
presentation reproduces the output exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import intmat
from .intmat import AbelianGroup

Word = tuple[int, ...]


class GroupError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Words


def free_reduce(w) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w) -> Word:
    w = list(free_reduce(w))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert_word(w) -> Word:
    return tuple(-x for x in reversed(w))


def rotate_word(w, k: int) -> Word:
    if not w:
        return ()
    k %= len(w)
    return tuple(w[k:] + w[:k])


def parse_word(text: str, generators) -> Word:
    """Read a word like ``x y^-1 (x y)^2`` over the given generator names.

    Single-letter generators may be juxtaposed (``xyx``), and an uppercase
    letter stands for the inverse of its lowercase generator.
    """
    gens = list(generators)
    index = {g: i + 1 for i, g in enumerate(gens)}
    pos = 0
    n = len(text)

    def error(msg):
        return GroupError(f"column {pos + 1}: {msg}")

    def skip_ws():
        nonlocal pos
        while pos < n and (text[pos].isspace() or text[pos] in "*·"):
            pos += 1

    def parse_exponent() -> int:
        nonlocal pos
        skip_ws()
        if pos < n and text[pos] == "^":
            pos += 1
            skip_ws()
            start = pos
            if pos < n and text[pos] in "+-":
                pos += 1
            while pos < n and text[pos].isdigit():
                pos += 1
            if pos == start or not text[start:pos].lstrip("+-"):
                raise error("malformed exponent")
            return int(text[start:pos])
        return 1

    def parse_atom() -> Word:
        nonlocal pos
        skip_ws()
        if pos >= n:
            raise error("expected a generator or '('")
        ch = text[pos]
        if ch == "(":
            pos += 1
            inner = parse_seq()
            skip_ws()
            if pos >= n or text[pos] != ")":
                raise error("unbalanced parenthesis")
            pos += 1
            base = inner
        else:
            # longest generator name match, then uppercase-inverse shorthand
            match = None
            for g in sorted(gens, key=len, reverse=True):
                if text.startswith(g, pos):
                    match = (g, 1)
                    break
            if match is None and ch.isupper() and ch.lower() in index:
                match = (ch.lower(), -1)
                pos += 1
            elif match is not None:
                pos += len(match[0])
            if match is None:
                raise error(f"unknown generator at {text[pos:pos + 8]!r}")
            g, s = match
            base = (s * index[g],)
        exp = parse_exponent()
        if exp < 0:
            base = invert_word(base)
            exp = -exp
        return base * exp

    def parse_seq() -> Word:
        nonlocal pos
        out: list[int] = []
        while True:
            skip_ws()
            if pos >= n or text[pos] == ")":
                return tuple(out)
            out.extend(parse_atom())

    word = parse_seq()
    if pos != n:
        raise error("trailing input")
    return free_reduce(word)


def format_word(w, generators) -> str:
    if not w:
        return "1"
    parts = []
    for x in w:
        name = generators[abs(x) - 1]
        parts.append(name if x > 0 else f"{name}^-1")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Presentations


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise GroupError("duplicate generator names")
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > len(self.generators):
                    raise GroupError(f"letter {x} out of range")

    @staticmethod
    def make(generators, relators) -> "GroupPresentation":
        """Build a presentation; string relators are parsed, and all
        relators are freely and cyclically reduced with empties dropped."""
        generators = tuple(generators)
        words = []
        for r in relators:
            w = parse_word(r, generators) if isinstance(r, str) else tuple(r)
            w = cyclic_reduce(w)
            if w:
                words.append(w)
        return GroupPresentation(generators, tuple(words))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def exponent_matrix(self) -> list[list[int]]:
        """Rows indexed by generators, columns by relators."""
        m = intmat.zeros(len(self.generators), len(self.relators))
        for j, r in enumerate(self.relators):
            for x in r:
                m[abs(x) - 1][j] += 1 if x > 0 else -1
        return m

    def abelianization(self) -> AbelianGroup:
        return intmat.cokernel(self.exponent_matrix(), ambient_rank=self.rank)

    def is_obviously_trivial(self) -> bool:
        return not self.generators

    def __str__(self) -> str:
        rels = ", ".join(format_word(r, self.generators) for r in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"


# ---------------------------------------------------------------------------
# Tietze moves with replayable logs
#
# A log is a list of steps; each step is a tuple whose first entry names
# the move:
#   ("invert", i)          relator i := its inverse
#   ("rotate", i, k)       relator i := cyclic rotation by k
#   ("multiply", i, j)     relator i := reduce(relator_i * relator_j), i != j
#   ("remove", i)          drop relator i (must be empty or a duplicate)
#   ("eliminate", g, i)    remove generator g using relator i, in which g
#                          occurs exactly once; substitutes everywhere


def apply_tietze(g: GroupPresentation, log) -> GroupPresentation:
    """Replay a Tietze log, checking each step's legality."""
    gens = list(g.generators)
    rels = [cyclic_reduce(r) for r in g.relators]

    def check(i: int) -> int:
        if not isinstance(i, int) or not 0 <= i < len(rels):
            raise GroupError(f"relator index {i!r} out of range")
        return i

    for step in log:
        op = step[0]
        if op == "invert":
            i = check(step[1])
            rels[i] = invert_word(rels[i])
        elif op == "rotate":
            i, k = check(step[1]), step[2]
            rels[i] = rotate_word(rels[i], k)
        elif op == "multiply":
            i, j = check(step[1]), check(step[2])
            if i == j:
                raise GroupError("cannot multiply a relator into itself")
            rels[i] = cyclic_reduce(free_reduce(rels[i] + rels[j]))
        elif op == "remove":
            i = check(step[1])
            r = cyclic_reduce(rels[i])
            others = [cyclic_reduce(s) for k, s in enumerate(rels) if k != i]
            if r and not any(_cyclic_equal(r, s) for s in others):
                raise GroupError(f"relator {i} is neither empty nor redundant")
            del rels[i]
        elif op == "eliminate":
            gen_idx, i = step[1], check(step[2])
            if not 1 <= gen_idx <= len(gens):
                raise GroupError(f"generator index {gen_idx!r} out of range")
            rels, gens = _eliminate(gens, rels, gen_idx, i)
        else:
            raise GroupError(f"unknown Tietze step {step!r}")
    return GroupPresentation(tuple(gens), tuple(cyclic_reduce(r) for r in rels if cyclic_reduce(r)))


def _cyclic_equal(a: Word, b: Word) -> bool:
    if len(a) != len(b):
        return False
    return any(rotate_word(a, k) == b for k in range(max(len(a), 1)))


def _single_occurrence(r: Word, g: int) -> int | None:
    """Index of the unique occurrence of generator g (1-based) in r."""
    hits = [k for k, x in enumerate(r) if abs(x) == g]
    return hits[0] if len(hits) == 1 else None


def _eliminate(gens, rels, gen_idx, i):
    """Remove generator ``gen_idx`` (1-based) using relator i."""
    r = rels[i]
    k = _single_occurrence(r, gen_idx)
    if k is None:
        raise GroupError(f"generator occurs {sum(1 for x in r if abs(x) == gen_idx)} times in relator {i}")
    # r = u g^e v = 1  =>  g^e = u^-1 v^-1
    u, e, v = r[:k], r[k], r[k + 1:]
    repl = invert_word(u) + invert_word(v)
    if e < 0:
        repl = invert_word(repl)

    def substitute(w: Word) -> Word:
        out: list[int] = []
        for x in w:
            if abs(x) == gen_idx:
                out.extend(repl if x > 0 else invert_word(repl))
            else:
                out.append(x)
        return tuple(out)

    def shift(w: Word) -> Word:
        return tuple(x - (1 if x > gen_idx else 0) if x > 0 else x + (1 if -x > gen_idx else 0) for x in w)

    new_rels = [
        cyclic_reduce(shift(substitute(s)))
        for t, s in enumerate(rels)
        if t != i
    ]
    new_gens = [g for t, g in enumerate(gens) if t != gen_idx - 1]
    return new_rels, new_gens


@dataclass(frozen=True)
class Simplification:
    presentation: GroupPresentation
    log: tuple = ()
    budget_exhausted: bool = False


def tietze_simplify(g: GroupPresentation, budget: int = 1000) -> Simplification:
    """Greedy deterministic simplification: drop redundant relators,
    eliminate generators with a single occurrence in some relator, and
    shorten relators against each other.  Every step is logged."""
    log: list[tuple] = []
    cur = GroupPresentation.make(g.generators, g.relators)
    steps = 0

    def spend() -> bool:
        nonlocal steps
        steps += 1
        return steps <= budget

    changed = True
    while changed:
        changed = False
        rels = list(cur.relators)

        # drop empty or duplicate relators (empties are gone already)
        for i in range(len(rels)):
            r = rels[i]
            if any(_cyclic_equal(r, rels[j]) or _cyclic_equal(r, invert_word(rels[j]))
                   for j in range(i)):
                if not any(_cyclic_equal(r, rels[j]) for j in range(i)):
                    # only an inverse duplicate: invert first so removal is legal
                    if not spend():
                        return Simplification(cur, tuple(log), True)
                    log.append(("invert", i))
                    cur = apply_tietze(cur, [("invert", i)])
                if not spend():
                    return Simplification(cur, tuple(log), True)
                log.append(("remove", i))
                cur = apply_tietze(cur, [("remove", i)])
                changed = True
                break
        if changed:
            continue

        # eliminate a generator occurring once in some relator; prefer the
        # shortest relator, then lowest indices
        best = None
        for i, r in enumerate(cur.relators):
            for gen in range(1, cur.rank + 1):
                if _single_occurrence(r, gen) is not None:
                    key = (len(r), i, gen)
                    if best is None or key < best:
                        best = key
        if best is not None:
            _, i, gen = best
            if not spend():
                return Simplification(cur, tuple(log), True)
            log.append(("eliminate", gen, i))
            cur = apply_tietze(cur, [("eliminate", gen, i)])
            changed = True
            continue

        # shorten some relator by multiplying with a rotated (possibly
        # inverted) other relator
        best = None
        rels = cur.relators
        for i, j in itertools.permutations(range(len(rels)), 2):
            for inv in (0, 1):
                rj = invert_word(rels[j]) if inv else rels[j]
                for k in range(len(rj)):
                    cand = cyclic_reduce(free_reduce(rels[i] + rotate_word(rj, k)))
                    gain = len(rels[i]) - len(cand)
                    if gain > 0:
                        key = (-gain, i, j, inv, k)
                        if best is None or key < best:
                            best = key
        if best is not None:
            _, i, j, inv, k = best
            steps_needed = [("invert", j)] * inv + ([("rotate", j, k)] if k else []) + [("multiply", i, j)]
            for st in steps_needed:
                if not spend():
                    return Simplification(cur, tuple(log), True)
                log.append(st)
                cur = apply_tietze(cur, [st])
            changed = True
    return Simplification(cur, tuple(log), False)


@dataclass(frozen=True)
class EquivalenceCertificate:
    log1: tuple
    log2: tuple
    generator_map: tuple[tuple[str, str], ...]


def tietze_equivalent(
    g1: GroupPresentation, g2: GroupPresentation, budget: int = 1000
) -> EquivalenceCertificate | None:
    """Try to certify that two presentations give isomorphic groups by
    simplifying both and matching the results up to renaming/inverting
    generators.  None means "not certified", not "non-isomorphic"."""
    s1 = tietze_simplify(g1, budget)
    s2 = tietze_simplify(g2, budget)
    p1, p2 = s1.presentation, s2.presentation
    if p1.rank != p2.rank or len(p1.relators) != len(p2.relators):
        return None
    n = p1.rank
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            def remap(w: Word) -> Word:
                out = []
                for x in w:
                    g = perm[abs(x) - 1] + 1
                    s = signs[abs(x) - 1] * (1 if x > 0 else -1)
                    out.append(s * g)
                return cyclic_reduce(tuple(out))

            mapped = [remap(r) for r in p1.relators]
            used = [False] * len(p2.relators)
            ok = True
            for r in mapped:
                hit = next(
                    (
                        j
                        for j, s in enumerate(p2.relators)
                        if not used[j]
                        and (_cyclic_equal(r, s) or _cyclic_equal(invert_word(r), s))
                    ),
                    None,
                )
                if hit is None:
                    ok = False
                    break
                used[hit] = True
            if ok:
                gmap = tuple(
                    (p1.generators[i], p2.generators[perm[i]]) for i in range(n)
                )
                return EquivalenceCertificate(s1.log, s2.log, gmap)
    return None


# ---------------------------------------------------------------------------
# Homomorphisms into symmetric groups


def _perm_table(n: int):
    elems = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(elems)}
    table = [
        [index[tuple(p[q[k]] for k in range(n))] for q in elems] for p in elems
    ]
    inverse = []
    for p in elems:
        inv = [0] * n
        for a, b in enumerate(p):
            inv[b] = a
        inverse.append(index[tuple(inv)])
    return elems, index, table, inverse


def evaluate_word(w: Word, images, table, inverse, identity: int) -> int:
    """Evaluate a word at permutation images (indices into the table).
    Words act as functions composed right to left: (xy)(p) = x(y(p))."""
    acc = identity
    for x in w:
        g = images[abs(x) - 1]
        if x < 0:
            g = inverse[g]
        acc = table[acc][g]
    return acc


@dataclass(frozen=True)
class QuotientCount:
    total: int
    surjective: int
    witnesses: tuple = ()  # surjective homs as tuples of one-line perms


def enumerate_homs(g: GroupPresentation, n: int, witnesses: bool = True) -> QuotientCount:
    """Count homomorphisms into the symmetric group S_n by brute force."""
    if n < 1 or n > 6:
        raise GroupError("supported range is 1 <= n <= 6")
    elems, index, table, inverse = _perm_table(n)
    identity = index[tuple(range(n))]
    order = len(elems)
    total = surj = 0
    found = []
    for images in itertools.product(range(order), repeat=g.rank):
        if any(
            evaluate_word(r, images, table, inverse, identity) != identity
            for r in g.relators
        ):
            continue
        total += 1
        if _generates(images, table, identity, order):
            surj += 1
            if witnesses:
                found.append(tuple(elems[i] for i in images))
    return QuotientCount(total, surj, tuple(found))


def _generates(images, table, identity: int, order: int) -> bool:
    seen = {identity}
    frontier = [identity]
    while frontier:
        x = frontier.pop()
        for g in images:
            y = table[x][g]
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen) == order


# ---------------------------------------------------------------------------
# Presentations from diagrams


def wirtinger(d) -> GroupPresentation:
    """Wirtinger presentation of the complement of the underlying link.

    Needs a geometric diagram (boxes expanded, no abstract crossings).
    Round components must be split from everything else; each contributes
    a free generator.
    """
    from . import pdcode

    if d.boxes:
        d = pdcode.expand_twistboxes(d)
    d = pdcode.normalize(d)
    for x in d.crossings:
        if not x.is_geometric:
            raise GroupError(f"crossing {x.id} has no planar data")
    for c in d.components:
        if c.is_round and c.through:
            raise GroupError(f"round component {c.id} is not split")
    inc = pdcode.resolve_incidence(d)

    # arcs: merge edges across over-strands
    parent: dict[str, str] = {}

    def find(e):
        while parent.get(e, e) != e:
            parent[e] = parent.get(parent[e], parent[e])
            e = parent[e]
        return e

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c in d.components:
        for e in c.edges:
            parent.setdefault(e, e)
    for x in d.crossings:
        a, b = x.over_pair()
        union(a, b)

    arc_names = sorted({find(e) for e in parent})
    arcs = {e: arc_names.index(find(e)) + 1 for e in parent}
    free = [c.id for c in d.components if c.is_round]
    gens = tuple(f"g{a}" for a in arc_names) + tuple(free)

    relators = []
    for x in d.crossings:
        over_in, _ = inc.flow[(x.id, x.over)]
        under_in, under_out = inc.flow[(x.id, 1 - x.over)]
        o, u, v = arcs[over_in], arcs[under_in], arcs[under_out]
        if x.sign > 0:
            w = (-v, o, u, -o)
        else:
            w = (-v, -o, u, o)
        relators.append(cyclic_reduce(w))
    return GroupPresentation.make(gens, [r for r in relators if r])


def handlebody_pi1(d) -> GroupPresentation:
    """Fundamental group of the 2-handlebody: one generator per dotted
    circle, one relator per framed component spelling its passes through
    the dotted circles in order."""
    from . import pdcode

    dotted = [c for c in d.components if c.kind == pdcode.DOTTED]
    gen_index = {c.id: i + 1 for i, c in enumerate(dotted)}

    # passes are stored on the round dotted components; regroup by the
    # passing edge's owner, ordered along that component
    owner = d.edge_owner()
    by_comp: dict[str, list] = {}
    for c in dotted:
        for p in c.through:
            cid = owner.get(p.edge)
            if cid is None:
                raise GroupError(f"pass references unknown edge {p.edge}")
            by_comp.setdefault(cid, []).append((p.edge, p.seq, gen_index[c.id], p.sign))

    relators = []
    for comp in d.components:
        if comp.kind != pdcode.FRAMED:
            continue
        passes = by_comp.get(comp.id, [])
        edge_pos = {e: i for i, e in enumerate(comp.edges)}
        passes.sort(key=lambda t: (edge_pos.get(t[0], 0), t[1]))
        word = tuple(s * g for _, _, g, s in passes)
        w = cyclic_reduce(word)
        if w:
            relators.append(w)
    gens = tuple(c.id for c in dotted)
    return GroupPresentation.make(gens, relators)
