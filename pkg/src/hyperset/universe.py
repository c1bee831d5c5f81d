"""Bisimulation-canonical store of hereditarily finite hypersets.

A hyperset is pictured by an accessible pointed graph: nodes stand for
sets, edges point from a set to its elements, and cycles are allowed.
A :class:`Universe` keeps exactly one node per bisimulation class of
every picture it has absorbed, so handle equality coincides with
extensional set equality.  The store is append-only: the element list
of an existing handle never changes.

Insertion is merge-and-collapse.  A new picture is first collapsed
internally by partition refinement, then its strongly connected pieces
are resolved against the store bottom-up: acyclic classes through an
interning table keyed on element lists, cyclic clusters by refining
them jointly with the (color-filtered) non-well-founded region of the
store.  The net effect is the coarsest stable partition of the combined
store-plus-picture graph, without touching the parts of the store that
cannot possibly be involved.

Concurrency contract: all mutation goes through a single writer; query
methods are read-only and safe to call from many threads once
construction is quiescent.  Handles are plain ints and freely copyable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import MalformedGraph, UniverseFull, UnknownHandle

SetId = int

# Rounds of iterated neighborhood hashing used to index non-well-founded
# store nodes.  Only lookup performance depends on this; matching is
# always confirmed by exact refinement.
COLOR_ROUNDS = 10


@dataclass
class Apg:
    """Accessible pointed graph picturing a single hyperset.

    ``children`` maps every node to the nodes it points at; ``store_refs``
    optionally lets a node also contain already-canonical sets of the
    target universe (used for atom injection).  Every node must be
    reachable from ``root``.
    """

    children: dict[int, frozenset[int]]
    root: int
    store_refs: dict[int, frozenset[SetId]] = field(default_factory=dict)

    def __post_init__(self):
        self.children = {n: frozenset(cs) for n, cs in self.children.items()}
        self.store_refs = {n: frozenset(rs) for n, rs in self.store_refs.items()}

    def validate(self) -> list[str]:
        problems = []
        nodes = set(self.children)
        if not nodes:
            problems.append("graph has no nodes")
            return problems
        if self.root not in nodes:
            problems.append(f"root {self.root} is not a node")
        for n, cs in self.children.items():
            for c in cs:
                if c not in nodes:
                    problems.append(f"node {n} points at unknown node {c}")
        for n in self.store_refs:
            if n not in nodes:
                problems.append(f"store_refs mentions unknown node {n}")
        if problems:
            return problems
        seen = {self.root}
        queue = deque(seen)
        while queue:
            n = queue.popleft()
            for c in self.children[n]:
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
        for n in sorted(nodes - seen):
            problems.append(f"node {n} is unreachable from the root")
        return problems


def _refine(nodes, kids, init_key):
    """Coarsest partition of ``nodes`` stable under the edge map ``kids``.

    ``init_key(n)`` must be equal for nodes that are allowed to share a
    block initially (it encodes the constant part of a node's children).
    Returns a dict node -> block id; blocks realize the maximum
    bisimulation that respects the initial keys.
    """
    by_key: dict = {}
    for n in nodes:
        by_key.setdefault(init_key(n), []).append(n)

    blocks: dict[int, set] = {}
    block_of: dict = {}
    for i, key in enumerate(sorted(by_key)):
        members = set(by_key[key])
        blocks[i] = members
        for n in members:
            block_of[n] = i
    next_id = len(blocks)

    parents: dict = {n: [] for n in nodes}
    for n in nodes:
        for c in kids[n]:
            parents[c].append(n)

    work = deque(blocks)
    while work:
        b = work.popleft()
        splitter = blocks.get(b)
        if splitter is None:
            continue
        pred = set()
        for n in splitter:
            pred.update(parents[n])
        touched: dict[int, set] = {}
        for p in pred:
            touched.setdefault(block_of[p], set()).add(p)
        for tb, hit in touched.items():
            whole = blocks[tb]
            if len(hit) == len(whole):
                continue
            rest = whole - hit
            del blocks[tb]
            i1, i2 = next_id, next_id + 1
            next_id += 2
            blocks[i1], blocks[i2] = hit, rest
            for x in hit:
                block_of[x] = i1
            for x in rest:
                block_of[x] = i2
            work.append(i1)
            work.append(i2)
    return block_of


def _sccs(nodes, kids):
    """Tarjan's algorithm, iterative; yields components children-first."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = 0
    for start in nodes:
        if start in index:
            continue
        call = [(start, iter(kids[start]))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while call:
            node, it = call[-1]
            advanced = False
            for child in it:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    call.append((child, iter(kids[child])))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            call.pop()
            if call:
                parent = call[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(comp)
    return out


class Universe:
    """Append-only store in which handle equality is set equality."""

    def __init__(self, max_sets: int | None = None):
        self._elems: list[tuple[SetId, ...]] = []
        self._elem_sets: list[frozenset[SetId]] = []
        self._parents: list[list[SetId]] = []
        self._wf: list[bool] = []
        self._colors: list[tuple[int, ...]] = []
        self._intern: dict[tuple[SetId, ...], SetId] = {}
        self._bucket: dict[int, list[SetId]] = {}
        self._vn: list[SetId] = []
        self._max_sets = max_sets

    # -- basic queries -------------------------------------------------

    def __len__(self) -> int:
        return len(self._elems)

    def __contains__(self, s) -> bool:
        return isinstance(s, int) and 0 <= s < len(self._elems)

    def ids(self) -> Iterator[SetId]:
        return iter(range(len(self._elems)))

    def _check(self, s: SetId) -> None:
        if not (isinstance(s, int) and 0 <= s < len(self._elems)):
            raise UnknownHandle(f"no such set handle: {s!r}")

    def elements(self, s: SetId) -> tuple[SetId, ...]:
        """Element list of ``s``, sorted by handle creation order."""
        self._check(s)
        return self._elems[s]

    def containers(self, s: SetId) -> tuple[SetId, ...]:
        """All stored sets that have ``s`` as an element."""
        self._check(s)
        return tuple(self._parents[s])

    def is_member(self, a: SetId, b: SetId) -> bool:
        self._check(a)
        self._check(b)
        return a in self._elem_sets[b]

    def is_well_founded(self, s: SetId) -> bool:
        """True iff no membership cycle is reachable from ``s``."""
        self._check(s)
        return self._wf[s]

    # -- construction --------------------------------------------------

    def _append(self, elems: tuple[SetId, ...], wf: bool) -> SetId:
        """Append a set whose elements all exist already.

        Such a set can never lie on a membership cycle (its descendants
        all predate it), so no cyclic cluster can ever match it and it
        needs no structural color: a fixed per-id leaf color suffices
        for the recurrences that read it.
        """
        if self._max_sets is not None and len(self._elems) >= self._max_sets:
            raise UniverseFull(f"universe cap of {self._max_sets} sets reached")
        sid = len(self._elems)
        self._elems.append(elems)
        self._elem_sets.append(frozenset(elems))
        self._parents.append([])
        for e in self._elem_sets[sid]:
            self._parents[e].append(sid)
        self._wf.append(wf)
        self._colors.append((sid,) * (COLOR_ROUNDS + 1))
        assert elems not in self._intern
        self._intern[elems] = sid
        return sid

    def _append_cyclic_batch(self, records, colors_list) -> None:
        """Append mutually referring non-well-founded records.

        Element tuples may mention ids inside the batch itself, so all
        records are created before any back references are wired up.
        """
        base = len(self._elems)
        if self._max_sets is not None and base + len(records) > self._max_sets:
            raise UniverseFull(f"universe cap of {self._max_sets} sets reached")
        for key, colors in zip(records, colors_list):
            self._elems.append(key)
            self._elem_sets.append(frozenset(key))
            self._parents.append([])
            self._wf.append(False)
            self._colors.append(colors)
        for i, key in enumerate(records):
            sid = base + i
            for e in self._elem_sets[sid]:
                self._parents[e].append(sid)
            assert key not in self._intern
            self._intern[key] = sid
            self._bucket.setdefault(colors_list[i][-1], []).append(sid)

    def make_set(self, members: Iterable[SetId]) -> SetId:
        """Canonical set with exactly the given members."""
        ms = sorted(set(members))
        for m in ms:
            self._check(m)
        key = tuple(ms)
        hit = self._intern.get(key)
        if hit is not None:
            return hit
        wf = all(self._wf[m] for m in ms)
        return self._append(key, wf)

    def union_of(self, sets: Iterable[SetId]) -> SetId:
        """Union of the element lists of the given sets."""
        members: set[SetId] = set()
        for s in sets:
            self._check(s)
            members.update(self._elem_sets[s])
        return self.make_set(members)

    def vn(self, n: int) -> SetId:
        """Von Neumann natural: 0 is the empty set, n+1 = n U {n}."""
        if n < 0:
            raise ValueError("naturals only")
        while len(self._vn) <= n:
            self._vn.append(self.make_set(self._vn))
        return self._vn[n]

    def canonicalize(self, g: Apg) -> SetId:
        """SetId of the hyperset pictured by ``g``'s root.

        Idempotent: structurally equal or bisimilar pictures always come
        back as the same handle.
        """
        problems = g.validate()
        if problems:
            raise MalformedGraph("; ".join(problems))
        return self.canonicalize_all(g.children, g.store_refs)[g.root]

    def canonicalize_all(self, children: Mapping[int, frozenset[int]],
                         store_refs: Mapping[int, frozenset[SetId]] | None = None,
                         ) -> dict[int, SetId]:
        """Insert a picture and resolve every node to its canonical handle.

        Unlike :meth:`canonicalize` this treats every node as a root, so
        no reachability requirement applies; it is the natural primitive
        for solving systems of equations.
        """
        store_refs = store_refs or {}
        nodes = sorted(children)
        if not nodes:
            raise MalformedGraph("graph has no nodes")
        node_set = set(nodes)
        kids = {}
        for n in nodes:
            cs = sorted(set(children[n]))
            for c in cs:
                if c not in node_set:
                    raise MalformedGraph(f"node {n} points at unknown node {c}")
            kids[n] = cs
        refs = {}
        for n in nodes:
            rs = sorted(set(store_refs.get(n, ())))
            for r in rs:
                self._check(r)
            refs[n] = tuple(rs)

        # 1. collapse the picture internally (store refs act as constants)
        block_of = _refine(nodes, kids, lambda n: refs[n])
        qmin: dict[int, int] = {}
        for n in nodes:
            b = block_of[n]
            if b not in qmin or n < qmin[b]:
                qmin[b] = n
        qnodes = sorted(qmin, key=lambda b: qmin[b])
        qkids = {}
        qrefs = {}
        for b in qnodes:
            rep = qmin[b]
            qkids[b] = sorted({block_of[c] for c in kids[rep]})
            qrefs[b] = refs[rep]

        # 2. resolve strongly connected pieces bottom-up
        resolved: dict[int, SetId] = {}
        for comp in _sccs(qnodes, qkids):
            q = comp[0]
            if len(comp) == 1 and q not in qkids[q]:
                elems = set(qrefs[q])
                elems.update(resolved[c] for c in qkids[q])
                key = tuple(sorted(elems))
                sid = self._intern.get(key)
                if sid is None:
                    wf = all(self._wf[e] for e in key)
                    sid = self._append(key, wf)
                resolved[q] = sid
            else:
                self._resolve_cluster(sorted(comp, key=lambda b: qmin[b]),
                                      qkids, qrefs, qmin, resolved)
        return {n: resolved[block_of[n]] for n in nodes}

    def _resolve_cluster(self, comp, qkids, qrefs, qmin, resolved):
        """Match one cyclic cluster against the store, or mint fresh sets.

        Every node of the cluster lies on a membership cycle, so it can
        only equal a non-well-founded stored set.  Candidate stored sets
        are looked up by structural color, closed downward through their
        non-well-founded descendants, and refined jointly with the
        cluster; everything else acts as constants.
        """
        in_comp = set(comp)
        external = {}
        internal = {}
        for q in comp:
            external[q] = sorted(set(qrefs[q]) |
                                 {resolved[c] for c in qkids[q] if c not in in_comp})
            internal[q] = [c for c in qkids[q] if c in in_comp]

        # structural colors of the cluster, same recipe as stored colors
        col: dict[int, list[int]] = {q: [0] for q in comp}
        for k in range(1, COLOR_ROUNDS + 1):
            for q in comp:
                sig = {self._colors[e][k - 1] for e in external[q]}
                sig.update(col[c][k - 1] for c in internal[q])
                col[q].append(hash((col[q][k - 1], tuple(sorted(sig)))))

        candidates = set()
        for q in comp:
            candidates.update(self._bucket.get(col[q][COLOR_ROUNDS], ()))
        region: set[SetId] = set()
        stack = sorted(candidates)
        while stack:
            s = stack.pop()
            if s in region:
                continue
            region.add(s)
            stack.extend(e for e in self._elems[s]
                         if not self._wf[e] and e not in region)

        cnodes = [("c", q) for q in comp]
        snodes = [("s", i) for i in sorted(region)]
        kids2 = {}
        consts = {}
        for q in comp:
            kids2[("c", q)] = ([("c", c) for c in internal[q]] +
                               [("s", r) for r in external[q] if r in region])
            consts[("c", q)] = tuple(r for r in external[q] if r not in region)
        for i in sorted(region):
            kids2[("s", i)] = [("s", t) for t in self._elems[i] if not self._wf[t]]
            consts[("s", i)] = tuple(t for t in self._elems[i] if self._wf[t])

        block2 = _refine(cnodes + snodes, kids2, lambda n: consts[n])

        groups: dict[int, list] = {}
        for n in cnodes + snodes:
            groups.setdefault(block2[n], []).append(n)

        value: dict[int, SetId] = {}
        fresh_blocks = []
        for b, members in groups.items():
            stored = [n[1] for n in members if n[0] == "s"]
            cluster = [n[1] for n in members if n[0] == "c"]
            assert len(stored) <= 1, "store was not bisimulation-minimal"
            if not cluster:
                continue
            if stored:
                value[b] = stored[0]
            else:
                fresh_blocks.append((min(qmin[q] for q in cluster), b, min(cluster, key=lambda q: qmin[q])))
        fresh_blocks.sort()

        base = len(self._elems)
        for offset, (_, b, _) in enumerate(fresh_blocks):
            value[b] = base + offset

        records = []
        for _, b, rep in fresh_blocks:
            elems = set(external[rep])
            elems.update(value[block2[("c", c)]] for c in internal[rep])
            records.append(tuple(sorted(elems)))

        fresh_colors = self._group_colors([base + i for i in range(len(records))], records)
        self._append_cyclic_batch(records, fresh_colors)

        for q in comp:
            resolved[q] = value[block2[("c", q)]]

    def _group_colors(self, new_ids, records):
        """Structural colors for a batch of mutually referring new sets."""
        base = len(self._elems)
        pos = {sid: i for i, sid in enumerate(new_ids)}
        cols = [[0] for _ in new_ids]
        for k in range(1, COLOR_ROUNDS + 1):
            level = []
            for i, elems in enumerate(records):
                sig = set()
                for e in elems:
                    if e >= base:
                        sig.add(cols[pos[e]][k - 1])
                    else:
                        sig.add(self._colors[e][k - 1])
                level.append(hash((cols[i][k - 1], tuple(sorted(sig)))))
            for i, h in enumerate(level):
                cols[i].append(h)
        return [tuple(c) for c in cols]
