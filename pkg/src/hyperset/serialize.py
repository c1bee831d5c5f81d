"""Deterministic, history-free textual forms for sets and graphs.

Well-founded sets print as nested braces with elements in Ackermann
code order.  Non-well-founded sets print as a flat equation system over
fresh names ν0, ν1, ... discovered breadth-first, with well-founded
members pulled out as atom declarations.  Both orders are computed from
the sets themselves (never from handle numbers), so equal sets print
identically regardless of how or when they were built -- that is what
makes reparse/resolve/reserialize a fixpoint.

Code order never materializes codes: the coding maps rank bands to
code bands (a set of rank k+1 always codes above every set of rank k),
so sets are indexed layer by layer, comparing descending element-index
tuples inside each layer.
"""

from __future__ import annotations

from collections import deque
from itertools import count

from .errors import DomainError, ValidationError
from .flat import FlatSystem
from .reducts import LoopyGraph, MultiGraph, closure
from .universe import SetId, Universe

NU = "ν"  # ν


# -- ordering helpers -------------------------------------------------------


def wf_code_index(u: Universe, ids) -> dict[SetId, int]:
    """Dense Ackermann-code-order indices over the closure of ``ids``."""
    todo = list(ids)
    seen = set()
    while todo:
        s = todo.pop()
        if s in seen:
            continue
        if not u.is_well_founded(s):
            raise ValidationError(f"set {s} is not well-founded")
        seen.add(s)
        todo.extend(e for e in u.elements(s) if e not in seen)

    rank: dict[SetId, int] = {}
    stack = [(s, False) for s in sorted(seen)]
    while stack:
        s, ready = stack.pop()
        if s in rank:
            continue
        if ready:
            rank[s] = 1 + max((rank[e] for e in u.elements(s)), default=-1)
        else:
            stack.append((s, True))
            stack.extend((e, False) for e in u.elements(s) if e not in rank)

    index: dict[SetId, int] = {}
    counter = count()
    layers: dict[int, list[SetId]] = {}
    for s in seen:
        layers.setdefault(rank[s], []).append(s)
    for r in sorted(layers):
        keyed = []
        for s in layers[r]:
            key = tuple(sorted((index[e] for e in u.elements(s)), reverse=True))
            keyed.append((key, s))
        keyed.sort()
        for _, s in keyed:
            index[s] = next(counter)
    return index


def structural_ranks(u: Universe, vertices) -> dict[SetId, int]:
    """Total order on an element-closed set of canonical handles.

    Iterated exact partition refinement; distinct handles are never
    bisimilar, so the colors separate completely and the resulting
    ranks depend only on the sets, not on construction history.
    """
    ids = sorted(vertices)
    vset = set(ids)
    for s in ids:
        for e in u.elements(s):
            if e not in vset:
                raise ValidationError("vertex set is not element-closed")
    color = {s: 0 for s in ids}
    for _ in range(len(ids) + 1):
        sigs = {s: (color[s], tuple(sorted({color[e] for e in u.elements(s)})))
                for s in ids}
        order = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
        fresh = {s: order[sigs[s]] for s in ids}
        if fresh == color:
            break
        color = fresh
    return color


def numeral_of(u: Universe, s: SetId) -> int | None:
    """n when ``s`` is the von Neumann numeral n, else None."""
    n = len(u.elements(s))
    if n > 4096 or not u.is_well_founded(s):
        return None
    return n if u.vn(n) == s else None


# -- set serialization -------------------------------------------------------


def wf_literal(u: Universe, s: SetId, index: dict[SetId, int] | None = None,
               numerals: bool = False) -> str:
    """Nested-brace literal, elements in code order; optionally collapse
    von Neumann numerals to decimals."""
    if index is None:
        index = wf_code_index(u, [s])
    if numerals:
        n = numeral_of(u, s)
        if n is not None:
            return str(n)
    inner = ",".join(
        wf_literal(u, e, index, numerals)
        for e in sorted(u.elements(s), key=index.__getitem__))
    return "{" + inner + "}"


def normal_form(u: Universe, named_roots) -> str:
    """Flat-system normal form covering the given (name, set) roots.

    Later aliases of an already-named set are dropped: a flat equation
    cannot express `this name denotes that cyclic set` without copying
    the whole cycle.  Unnamed roots get fresh ν names.  Well-founded
    members become atom declarations named a0, a1, ... in order of
    first appearance.
    """
    roots: list[tuple[str | None, SetId]] = []
    taken_ids = set()
    for name, s in named_roots:
        if s not in taken_ids:
            taken_ids.add(s)
            roots.append((name, s))

    cl = closure(u, [s for _, s in roots])
    ranks = structural_ranks(u, cl.vertices)
    wf_ids = [s for s in cl.vertices if u.is_well_founded(s)]
    code_index = wf_code_index(u, wf_ids) if wf_ids else {}

    used: set[str] = set()
    names: dict[SetId, str] = {}
    name_order: dict[SetId, int] = {}

    def register(s: SetId, name: str) -> None:
        names[s] = name
        name_order[s] = len(name_order)
        used.add(name)

    nu_counter = count()

    def fresh_nu() -> str:
        while True:
            cand = f"{NU}{next(nu_counter)}"
            if cand not in used:
                return cand

    atom_counter = count()
    atom_names: dict[SetId, str] = {}
    atom_order: list[SetId] = []

    def atom_name(s: SetId) -> str:
        if s not in atom_names:
            while True:
                cand = f"a{next(atom_counter)}"
                if cand not in used:
                    break
            used.add(cand)
            atom_names[s] = cand
            atom_order.append(s)
        return atom_names[s]

    for name, _ in roots:
        if name is not None:
            used.add(name)
    queue: deque[SetId] = deque()
    for name, s in roots:
        register(s, name if name is not None else fresh_nu())
        queue.append(s)

    eq_lines: list[str] = []
    while queue:
        s = queue.popleft()
        wf_children = sorted((e for e in u.elements(s) if u.is_well_founded(e)),
                             key=code_index.__getitem__)
        nw_children = [e for e in u.elements(s) if not u.is_well_founded(e)]
        for e in sorted(nw_children, key=ranks.__getitem__):
            if e not in names:
                register(e, fresh_nu())
                queue.append(e)
        rhs = [atom_name(e) for e in wf_children]
        rhs.extend(names[e] for e in sorted(nw_children, key=name_order.__getitem__))
        eq_lines.append(f"{names[s]} = {{{','.join(rhs)}}}")

    atom_lines = [f"atom {atom_names[s]} = {wf_literal(u, s, code_index, numerals=True)}"
                  for s in atom_order]
    return "\n".join(atom_lines + eq_lines) + "\n" if eq_lines else ""


def serialize_set(u: Universe, s: SetId) -> str:
    """Canonical text for one set: a brace literal when well-founded,
    otherwise its ν-named flat-system normal form."""
    if u.is_well_founded(s):
        return wf_literal(u, s)
    return normal_form(u, [(None, s)])


def format_system(u: Universe, sys: FlatSystem) -> str:
    """Print a FlatSystem back in file syntax (atoms first)."""
    lines = []
    for name in sorted(sys.atoms):
        s = sys.atoms[name]
        if not u.is_well_founded(s):
            raise ValidationError(
                f"atom {name} is not well-founded and has no literal form")
        lines.append(f"atom {name} = {wf_literal(u, s, numerals=True)}")
    for name, rhs in sys.equations:
        lines.append(f"{name} = {{{','.join(sorted(rhs))}}}")
    return "\n".join(lines) + "\n" if lines else ""


# -- graph output -------------------------------------------------------------


def emit_graph(u: Universe, graph, mode: str) -> str:
    """Line-based graph text: ``v <index> <label> [loop]`` then
    ``e <i> <j> <multiplicity>``.

    Vertices are emitted well-founded first in code order, then
    non-well-founded in structural-rank order, and numbered from 0 in
    that order.  Labels: the Ackermann code when it fits the default
    bound, else ``wf<i>``; non-well-founded sets are ``nu<i>``.
    """
    from .rado import AckermannCoder

    verts = sorted(graph.vertices)
    ranks = structural_ranks(u, closure(u, verts).vertices)
    wf = [s for s in verts if u.is_well_founded(s)]
    code_index = wf_code_index(u, wf) if wf else {}
    ordered = sorted(wf, key=code_index.__getitem__) + sorted(
        (s for s in verts if not u.is_well_founded(s)), key=ranks.__getitem__)
    pos = {s: i for i, s in enumerate(ordered)}

    if isinstance(graph, MultiGraph):
        loops = {a for (a, b) in graph.multiplicity if a == b}
        mults = {(a, b): m for (a, b), m in graph.multiplicity.items() if a != b}
    elif isinstance(graph, LoopyGraph):
        loops = set(graph.loops())
        default = 2 if mode == "double_only" else 1
        mults = {e: default for e in graph.plain_edges()}
    else:
        raise ValidationError(f"cannot emit {type(graph).__name__}")

    coder = AckermannCoder(u)
    lines = []
    for i, s in enumerate(ordered):
        if u.is_well_founded(s):
            try:
                label = str(coder.code(s))
            except DomainError:
                label = f"wf{i}"
        else:
            label = f"nu{i}"
        suffix = " loop" if s in loops else ""
        lines.append(f"v {i} {label}{suffix}")
    edge_lines = []
    for (a, b), m in mults.items():
        i, j = sorted((pos[a], pos[b]))
        edge_lines.append((i, j, m))
    for i, j, m in sorted(edge_lines):
        lines.append(f"e {i} {j} {m}")
    return "\n".join(lines) + "\n" if lines else ""


def parse_graph_output(text: str):
    """Inverse of :func:`emit_graph` used for machine checks.

    Returns (vertices, edges): vertices as a list of (index, label,
    loop flag) and edges as a list of (i, j, multiplicity).
    """
    verts = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) in (3, 4):
            if len(parts) == 4 and parts[3] != "loop":
                raise ValidationError(f"line {lineno}: bad vertex flag {parts[3]!r}")
            verts.append((int(parts[1]), parts[2], len(parts) == 4))
        elif parts[0] == "e" and len(parts) == 4:
            i, j, m = int(parts[1]), int(parts[2]), int(parts[3])
            if m not in (1, 2):
                raise ValidationError(f"line {lineno}: multiplicity must be 1 or 2")
            edges.append((i, j, m))
        else:
            raise ValidationError(f"line {lineno}: unrecognized graph line {line!r}")
    expected = list(range(len(verts)))
    if [i for i, _, _ in verts] != expected:
        raise ValidationError("vertex indices must be consecutive from 0")
    return verts, edges
