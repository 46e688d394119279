"""Three-layer data model and the pure semantic computations over it.

The lexicon layer (:class:`LexiconModel`) holds class and relation
definitions with subsumption, subproperty and chain axioms; the data layer
(:class:`SemGraph`) holds typed nodes and edges.  This module also owns the
derived-information queries: subsumption closure, subproperty closure,
effective slot tables with inheritance and restriction, and class
classification.

Models are built once from parsed statements and treated as immutable
afterwards; all queries are read-only and safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .diagnostics import Diagnostic, SourceSpan, has_errors
from .vocab import DATA_PREFIX, DEFAULT_PREFIXES, LEXICON_PREFIX

LOCAL_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_.]*\Z")


@dataclass(frozen=True, order=True)
class Qid:
    """Prefixed identifier; the prefix resolves to a namespace IRI at export."""

    prefix: str
    local: str

    def __post_init__(self) -> None:
        if not LOCAL_NAME_RE.match(self.local):
            raise ValueError(f"invalid local name: {self.local!r}")

    def __str__(self) -> str:
        return f"{self.prefix}:{self.local}"


def class_qid(local: str) -> Qid:
    return Qid(LEXICON_PREFIX, local)


def rel_qid(local: str) -> Qid:
    return Qid(LEXICON_PREFIX, local)


def data_qid(local: str) -> Qid:
    return Qid(DATA_PREFIX, local)


class Cardinality(Enum):
    """Slot cardinality markers; both impose a maximum of one filler."""

    EXACTLY_ONE = "1"
    AT_MOST_ONE = "?"


class OriginKind(Enum):
    DECLARED_HERE = "declared"
    INHERITED_FROM = "inherited"
    RESTRICTED_FROM = "restricted"


@dataclass(frozen=True)
class ConPSlot:
    """Reified participant restriction: relation, range class, cardinality.

    ``sets_domain_range`` is the underline marker: the declaring class becomes
    the relation's domain and the slot range becomes its range.
    """

    relation: Qid
    range: Qid
    cardinality: Cardinality
    sets_domain_range: bool = False
    origin: OriginKind = OriginKind.DECLARED_HERE
    origin_class: Qid | None = None

    @property
    def obligatory(self) -> bool:
        return self.cardinality is Cardinality.EXACTLY_ONE

    @property
    def max_one(self) -> bool:
        # Every slot is max-1 by construction; kept as an assertable property.
        return True


@dataclass
class ClassDef:
    """An interlingual lexical unit class."""

    name: Qid
    parents: tuple[Qid, ...] = ()
    union_members: tuple[Qid, ...] = ()
    declared_slots: tuple[ConPSlot, ...] = ()
    span: SourceSpan | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassDef):
            return NotImplemented
        return (
            self.name == other.name
            and self.parents == other.parents
            and self.union_members == other.union_members
            and self.declared_slots == other.declared_slots
        )

    def slot_for(self, relation: Qid) -> ConPSlot | None:
        for slot in self.declared_slots:
            if slot.relation == relation:
                return slot
        return None


@dataclass
class RelationDef:
    """An interlingual semantic relation."""

    name: Qid
    super_relations: tuple[Qid, ...] = ()
    domain: Qid | None = None
    range: Qid | None = None
    span: SourceSpan | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelationDef):
            return NotImplemented
        return (
            self.name == other.name
            and self.super_relations == other.super_relations
            and self.domain == other.domain
            and self.range == other.range
        )


@dataclass(frozen=True)
class ChainAxiom:
    """Composition axiom: chain[0] o ... o chain[-1] is a sub-relation of super."""

    chain: tuple[Qid, ...]
    super_relation: Qid


class Classification(Enum):
    PRIMITIVE = "primitive"
    SEMANTICALLY_VOID = "void"
    DERIVED = "derived"


@dataclass
class LexiconModel:
    """The lexicon layer: classes, relations and chain axioms, resolved."""

    prefixes: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_PREFIXES))
    classes: dict[Qid, ClassDef] = field(default_factory=dict)
    relations: dict[Qid, RelationDef] = field(default_factory=dict)
    chains: tuple[ChainAxiom, ...] = ()

    def __post_init__(self) -> None:
        self._ancestor_cache: dict[Qid, frozenset[Qid]] = {}
        self._rel_ancestor_cache: dict[Qid, frozenset[Qid]] = {}
        self._slot_tables: dict[Qid, dict[Qid, ConPSlot]] | None = None
        self._slot_diagnostics: list[Diagnostic] | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LexiconModel):
            return NotImplemented
        return (
            self.prefixes == other.prefixes
            and self.classes == other.classes
            and self.relations == other.relations
            and self.chains == other.chains
        )

    # -- direct hierarchy edges ------------------------------------------

    def direct_superclasses(self, cls: Qid) -> tuple[Qid, ...]:
        """Parents of ``cls`` plus every union it is a member of."""
        supers = list(self.classes[cls].parents)
        for union in self.classes.values():
            if cls in union.union_members:
                supers.append(union.name)
        return tuple(supers)

    def direct_superrelations(self, rel: Qid) -> tuple[Qid, ...]:
        return self.relations[rel].super_relations

    # -- closures ---------------------------------------------------------

    def _ancestors(self, cls: Qid) -> frozenset[Qid]:
        cached = self._ancestor_cache.get(cls)
        if cached is None:
            acc = {cls}
            for sup in self.direct_superclasses(cls):
                acc |= self._ancestors(sup)
            cached = self._ancestor_cache[cls] = frozenset(acc)
        return cached

    def _rel_ancestors(self, rel: Qid) -> frozenset[Qid]:
        cached = self._rel_ancestor_cache.get(rel)
        if cached is None:
            acc = {rel}
            for sup in self.direct_superrelations(rel):
                acc |= self._rel_ancestors(sup)
            cached = self._rel_ancestor_cache[rel] = frozenset(acc)
        return cached

    def subsumes(self, sub: Qid, super_: Qid) -> bool:
        """True iff ``super_`` is reachable from ``sub`` in the class hierarchy.

        Reflexive and transitive over parent edges and union-membership edges.
        """
        if sub not in self.classes:
            raise ValueError(f"E010: unknown class {sub}")
        if super_ not in self.classes:
            raise ValueError(f"E010: unknown class {super_}")
        return super_ in self._ancestors(sub)

    def subrel(self, sub: Qid, super_: Qid) -> bool:
        """True iff ``super_`` is reachable from ``sub`` over subproperty edges."""
        if sub not in self.relations:
            raise ValueError(f"E011: unknown relation {sub}")
        if super_ not in self.relations:
            raise ValueError(f"E011: unknown relation {super_}")
        return super_ in self._rel_ancestors(sub)

    # -- classification ----------------------------------------------------

    def classify_class(self, cls: Qid) -> Classification:
        cdef = self.classes[cls]
        rootless = not cdef.parents and not cdef.union_members
        if rootless and cdef.declared_slots:
            return Classification.PRIMITIVE
        if rootless and not cdef.declared_slots:
            return Classification.SEMANTICALLY_VOID
        return Classification.DERIVED

    # -- effective slot resolution ------------------------------------------

    def effective_slots(self, cls: Qid) -> dict[Qid, ConPSlot]:
        """Per relation, the most restricted slot along all inheritance paths.

        The range is the locally declared range when restated, otherwise the
        inherited one; cardinality is obligatory as soon as any ancestor or
        the class itself says so.  Requires a model free of slot errors for a
        meaningful answer (the validator reports them).
        """
        if cls not in self.classes:
            raise ValueError(f"E010: unknown class {cls}")
        return self._resolved_tables()[0][cls]

    def slot_diagnostics(self) -> list[Diagnostic]:
        """Slot-restriction findings gathered while resolving (validator input)."""
        return list(self._resolved_tables()[1])

    def _resolved_tables(self) -> tuple[dict[Qid, dict[Qid, ConPSlot]], list[Diagnostic]]:
        if self._slot_tables is None:
            self._slot_tables, self._slot_diagnostics = _resolve_all_slots(self)
        return self._slot_tables, self._slot_diagnostics  # type: ignore[return-value]


def _declarer(slot: ConPSlot, host: Qid) -> Qid:
    """Class whose declaration the effective slot configuration comes from."""
    if slot.origin is OriginKind.INHERITED_FROM:
        assert slot.origin_class is not None
        return slot.origin_class
    return host


def _resolve_all_slots(
    model: LexiconModel,
) -> tuple[dict[Qid, dict[Qid, ConPSlot]], list[Diagnostic]]:
    tables: dict[Qid, dict[Qid, ConPSlot]] = {}
    diags: list[Diagnostic] = []

    def resolve(cls: Qid) -> dict[Qid, ConPSlot]:
        done = tables.get(cls)
        if done is not None:
            return done
        cdef = model.classes[cls]
        # Merge the effective tables of all direct superclasses.  Per
        # relation we keep the most specific comparable range (ties keep the
        # first path) and the strongest cardinality seen on any path.
        inherited: dict[Qid, ConPSlot] = {}
        conflicts: dict[Qid, tuple[Qid, Qid]] = {}
        for sup in model.direct_superclasses(cls):
            for rel, islot in resolve(sup).items():
                cand = ConPSlot(
                    relation=rel,
                    range=islot.range,
                    cardinality=islot.cardinality,
                    origin=OriginKind.INHERITED_FROM,
                    origin_class=_declarer(islot, sup),
                )
                prev = inherited.get(rel)
                if prev is None:
                    inherited[rel] = cand
                    continue
                card = (
                    Cardinality.EXACTLY_ONE
                    if Cardinality.EXACTLY_ONE in (prev.cardinality, cand.cardinality)
                    else Cardinality.AT_MOST_ONE
                )
                if model.subsumes(prev.range, cand.range):
                    merged = prev
                elif model.subsumes(cand.range, prev.range):
                    merged = cand
                else:
                    conflicts.setdefault(rel, (prev.range, cand.range))
                    merged = prev
                inherited[rel] = ConPSlot(
                    relation=rel,
                    range=merged.range,
                    cardinality=card,
                    origin=OriginKind.INHERITED_FROM,
                    origin_class=merged.origin_class,
                )

        table: dict[Qid, ConPSlot] = {}
        for rel, islot in inherited.items():
            declared = cdef.slot_for(rel)
            if declared is None:
                if rel in conflicts:
                    a, b = conflicts[rel]
                    diags.append(
                        Diagnostic(
                            "E032",
                            f"slot ({rel.local}) is inherited with incomparable "
                            f"ranges {a.local} and {b.local}; restate it with a "
                            f"range subsumed by both",
                            span=cdef.span,
                            subject=str(cls),
                        )
                    )
                table[rel] = islot
                continue
            card = (
                Cardinality.EXACTLY_ONE
                if Cardinality.EXACTLY_ONE in (declared.cardinality, islot.cardinality)
                else Cardinality.AT_MOST_ONE
            )
            if rel in conflicts:
                a, b = conflicts[rel]
                if not (
                    model.subsumes(declared.range, a) and model.subsumes(declared.range, b)
                ):
                    diags.append(
                        Diagnostic(
                            "E032",
                            f"restated slot ({rel.local}) range "
                            f"{declared.range.local} does not reconcile inherited "
                            f"ranges {a.local} and {b.local}",
                            span=cdef.span,
                            subject=str(cls),
                        )
                    )
            else:
                if not model.subsumes(declared.range, islot.range):
                    diags.append(
                        Diagnostic(
                            "E030",
                            f"slot ({rel.local}) range widened from "
                            f"{islot.range.local} to {declared.range.local}",
                            span=cdef.span,
                            subject=str(cls),
                        )
                    )
                if (
                    islot.cardinality is Cardinality.EXACTLY_ONE
                    and declared.cardinality is Cardinality.AT_MOST_ONE
                ):
                    diags.append(
                        Diagnostic(
                            "E031",
                            f"slot ({rel.local}) relaxed from obligatory to "
                            f"optional",
                            span=cdef.span,
                            subject=str(cls),
                        )
                    )
                if (
                    declared.range == islot.range
                    and declared.cardinality == islot.cardinality
                ):
                    diags.append(
                        Diagnostic(
                            "W062",
                            f"slot ({rel.local}) restates the inherited range and "
                            f"cardinality unchanged",
                            span=cdef.span,
                            subject=str(cls),
                        )
                    )
            table[rel] = ConPSlot(
                relation=rel,
                range=declared.range,
                cardinality=card,
                sets_domain_range=declared.sets_domain_range,
                origin=OriginKind.RESTRICTED_FROM,
                origin_class=islot.origin_class,
            )
        for slot in cdef.declared_slots:
            if slot.relation in inherited:
                continue
            table[slot.relation] = slot
        tables[cls] = table
        return table

    for cls in model.classes:
        resolve(cls)
    return tables, diags


# ---------------------------------------------------------------------------
# Data layer


Fact = tuple
# ("type", node_id, class Qid) | ("edge", subject_id, relation Qid, object_id)


def type_fact(node: str, cls: Qid) -> Fact:
    return ("type", node, cls)


def edge_fact(subject: str, relation: Qid, obj: str) -> Fact:
    return ("edge", subject, relation, obj)


class UnionFind:
    """Union-find over node ids; the lexicographically smallest id leads."""

    def __init__(self) -> None:
        self._parent: dict[str, str] = {}

    def add(self, x: str) -> None:
        self._parent.setdefault(x, x)

    def find(self, x: str) -> str:
        parent = self._parent
        if x not in parent:
            parent[x] = x
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: str, b: str) -> str:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        winner, loser = (ra, rb) if ra < rb else (rb, ra)
        self._parent[loser] = winner
        return winner

    def same(self, a: str, b: str) -> bool:
        return self.find(a) == self.find(b)

    def members(self) -> list[str]:
        return list(self._parent)

    def partition(self) -> frozenset[frozenset[str]]:
        groups: dict[str, set[str]] = {}
        for x in self._parent:
            groups.setdefault(self.find(x), set()).add(x)
        return frozenset(frozenset(g) for g in groups.values())

    def copy(self) -> "UnionFind":
        clone = UnionFind()
        clone._parent = dict(self._parent)
        return clone


@dataclass
class SemGraph:
    """A semantic representation: typed nodes, relation edges, provenance.

    ``provenance`` maps each fact to ``None`` when asserted or to the
    :class:`~ilx.reasoner.Derivation` that introduced it.  ``merges`` holds
    the node-equality partition; after saturation every fact is stated on
    canonical representatives.
    """

    name: Qid
    nodes: dict[str, set[Qid]] = field(default_factory=dict)
    edges: set[tuple[str, Qid, str]] = field(default_factory=set)
    provenance: dict[Fact, object] = field(default_factory=dict)
    merges: UnionFind = field(default_factory=UnionFind)
    spans: dict[str, SourceSpan] = field(default_factory=dict)
    span: SourceSpan | None = None

    def assert_type(self, node: str, cls: Qid) -> None:
        self.nodes.setdefault(node, set()).add(cls)
        self.merges.add(node)
        self.provenance.setdefault(type_fact(node, cls), None)

    def assert_edge(self, subject: str, relation: Qid, obj: str) -> None:
        self.nodes.setdefault(subject, set())
        self.nodes.setdefault(obj, set())
        self.merges.add(subject)
        self.merges.add(obj)
        self.edges.add((subject, relation, obj))
        self.provenance.setdefault(edge_fact(subject, relation, obj), None)

    def touch(self, node: str) -> None:
        self.nodes.setdefault(node, set())
        self.merges.add(node)

    def is_asserted(self, fact: Fact) -> bool:
        return fact in self.provenance and self.provenance[fact] is None

    def asserted_facts(self) -> set[Fact]:
        return {f for f, prov in self.provenance.items() if prov is None}

    def has_fact(self, fact: Fact) -> bool:
        if fact[0] == "type":
            return fact[2] in self.nodes.get(fact[1], ())
        if fact[0] == "edge":
            return (fact[1], fact[2], fact[3]) in self.edges
        raise ValueError(f"not a fact: {fact!r}")

    def signature(self) -> tuple:
        """Canonical content view used for graph-equality comparisons."""
        return (
            {n: frozenset(ts) for n, ts in self.nodes.items()},
            frozenset(self.edges),
            self.merges.partition(),
            frozenset(self.asserted_facts()),
        )

    def copy(self) -> "SemGraph":
        return SemGraph(
            name=self.name,
            nodes={n: set(ts) for n, ts in self.nodes.items()},
            edges=set(self.edges),
            provenance=dict(self.provenance),
            merges=self.merges.copy(),
            spans=dict(self.spans),
            span=self.span,
        )


# ---------------------------------------------------------------------------
# Building


def build_model(statements: list) -> tuple[LexiconModel | None, list[Diagnostic]]:
    """Resolve parsed statements into a lexicon model.

    Returns ``(model, diagnostics)``; on any error diagnostic the model is
    ``None``.  Graph statements are ignored here (see :func:`build_graphs`).
    """
    from . import parser as _p  # local import; parser depends on this module

    diags: list[Diagnostic] = []
    prefixes = dict(DEFAULT_PREFIXES)
    classes: dict[Qid, ClassDef] = {}
    relations: dict[Qid, RelationDef] = {}
    chains: list[ChainAxiom] = []
    underline_sources: dict[Qid, Qid] = {}

    rel_stmts = [s for s in statements if isinstance(s, _p.RelStmt)]
    class_stmts = [s for s in statements if isinstance(s, _p.ClassStmt)]

    for stmt in statements:
        if isinstance(stmt, _p.PrefixStmt):
            if stmt.label in prefixes and stmt.label not in DEFAULT_PREFIXES:
                diags.append(
                    Diagnostic(
                        "E050",
                        f"prefix {stmt.label} declared twice",
                        span=stmt.span,
                        subject=stmt.label,
                    )
                )
                continue
            prefixes[stmt.label] = stmt.iri

    # Declarations first: a plain-headed rel statement declares its head (and
    # extends it with supers on re-mention); class statements declare once.
    declared_rel_spans: dict[Qid, SourceSpan | None] = {}
    for stmt in rel_stmts:
        if len(stmt.chain) != 1:
            continue
        name = rel_qid(stmt.chain[0])
        if name not in relations:
            relations[name] = RelationDef(name=name, span=stmt.span)
            declared_rel_spans[name] = stmt.span

    for stmt in class_stmts:
        name = class_qid(stmt.name)
        if name in classes:
            diags.append(
                Diagnostic(
                    "E050",
                    f"class {name.local} defined twice",
                    span=stmt.span,
                    subject=str(name),
                )
            )
            continue
        slots: list[ConPSlot] = []
        seen_rels: set[str] = set()
        for line in stmt.slots:
            if line.relation in seen_rels:
                diags.append(
                    Diagnostic(
                        "E050",
                        f"class {name.local} declares two slots on "
                        f"({line.relation})",
                        span=line.span,
                        subject=str(name),
                    )
                )
                continue
            seen_rels.add(line.relation)
            slots.append(
                ConPSlot(
                    relation=rel_qid(line.relation),
                    range=class_qid(line.range),
                    cardinality=Cardinality.EXACTLY_ONE
                    if line.obligatory
                    else Cardinality.AT_MOST_ONE,
                    sets_domain_range=line.underline,
                )
            )
        slots.sort(key=lambda s: s.relation)
        classes[name] = ClassDef(
            name=name,
            parents=tuple(dict.fromkeys(class_qid(p) for p in stmt.parents)),
            union_members=tuple(dict.fromkeys(class_qid(m) for m in stmt.union_members)),
            declared_slots=tuple(slots),
            span=stmt.span,
        )

    # A name may not live in both the class and the relation namespace.
    for name in set(classes) & set(relations):
        diags.append(
            Diagnostic(
                "E050",
                f"{name.local} is defined both as a class and as a relation",
                span=classes[name].span,
                subject=str(name),
            )
        )

    def check_class_ref(local: str, span: SourceSpan | None, subject: str) -> Qid | None:
        q = class_qid(local)
        if q not in classes:
            diags.append(
                Diagnostic("E010", f"unknown class {local}", span=span, subject=subject)
            )
            return None
        return q

    def check_rel_ref(local: str, span: SourceSpan | None, subject: str) -> Qid | None:
        q = rel_qid(local)
        if q not in relations:
            diags.append(
                Diagnostic("E011", f"unknown relation {local}", span=span, subject=subject)
            )
            return None
        return q

    # Relation axioms: sub/super edges and chain axioms.
    for stmt in rel_stmts:
        subject = "/".join(stmt.chain)
        ok_chain = [check_rel_ref(r, stmt.span, subject) for r in stmt.chain]
        ok_supers = [check_rel_ref(r, stmt.span, subject) for r in stmt.supers]
        if any(q is None for q in ok_chain + ok_supers):
            continue
        links = [q for q in ok_supers if q is not None]
        if len(stmt.chain) > 1:
            if not links:
                # The parser guarantees a super for chain heads; defensive.
                continue
            chains.append(ChainAxiom(chain=tuple(ok_chain), super_relation=links[0]))  # type: ignore[arg-type]
            lower = links[0]
        else:
            lower = ok_chain[0]  # type: ignore[assignment]
        # rel A < B < C means A is a sub-relation of B and B of C.
        for upper in links if len(stmt.chain) > 1 else links[0:]:
            pass
        start = 1 if len(stmt.chain) > 1 else 0
        for upper in links[start:]:
            rdef = relations[lower]
            if upper != lower and upper not in rdef.super_relations:
                rdef.super_relations = rdef.super_relations + (upper,)
            lower = upper

    # Class references.
    for cdef in classes.values():
        cdef.parents = tuple(
            q for q in cdef.parents if check_class_ref(q.local, cdef.span, str(cdef.name))
        )
        cdef.union_members = tuple(
            q
            for q in cdef.union_members
            if check_class_ref(q.local, cdef.span, str(cdef.name))
        )
        kept: list[ConPSlot] = []
        for slot in cdef.declared_slots:
            rel_ok = check_rel_ref(slot.relation.local, cdef.span, str(cdef.name))
            range_ok = check_class_ref(slot.range.local, cdef.span, str(cdef.name))
            if rel_ok is not None and range_ok is not None:
                kept.append(slot)
        cdef.declared_slots = tuple(kept)

    # Underline slots fix the relation's domain and range; the first
    # declaration (class declaration order) wins, later conflicting ones are
    # the validator's E033.
    for cdef in classes.values():
        for slot in cdef.declared_slots:
            if not slot.sets_domain_range:
                continue
            rdef = relations.get(slot.relation)
            if rdef is None:
                continue
            if slot.relation not in underline_sources:
                underline_sources[slot.relation] = cdef.name
                rdef.domain = cdef.name
                rdef.range = slot.range

    # Cycle checks.
    diags.extend(_class_cycle_diags(classes))
    diags.extend(_relation_cycle_diags(relations, chains))

    if has_errors(diags):
        return None, diags

    model = LexiconModel(
        prefixes=prefixes,
        classes=classes,
        relations=relations,
        chains=tuple(chains),
    )
    return model, diags


def _class_cycle_diags(classes: dict[Qid, ClassDef]) -> list[Diagnostic]:
    unions_of: dict[Qid, list[Qid]] = {}
    for cdef in classes.values():
        for member in cdef.union_members:
            unions_of.setdefault(member, []).append(cdef.name)

    def succ(c: Qid) -> list[Qid]:
        return list(classes[c].parents) + unions_of.get(c, [])

    return [
        Diagnostic(
            "E020",
            f"subclass cycle through {cls.local}",
            span=classes[cls].span,
            subject=str(cls),
        )
        for cls in _cycle_nodes(list(classes), succ)
    ]


def _relation_cycle_diags(
    relations: dict[Qid, RelationDef], chains: list[ChainAxiom]
) -> list[Diagnostic]:
    diags = []

    def sub_succ(r: Qid) -> list[Qid]:
        return list(relations[r].super_relations)

    for rel in _cycle_nodes(list(relations), sub_succ):
        diags.append(
            Diagnostic(
                "E021",
                f"subrelation cycle through {rel.local}",
                span=relations[rel].span,
                subject=str(rel),
            )
        )

    # Chain expansion: the super-relation of a chain must never appear in the
    # chain once elements are recursively replaced by their own chains.
    expands: dict[Qid, list[Qid]] = {}
    for axiom in chains:
        expands.setdefault(axiom.super_relation, []).extend(axiom.chain)
    for rel in _cycle_nodes(list(relations), lambda r: expands.get(r, [])):
        diags.append(
            Diagnostic(
                "E021",
                f"chain expansion cycle through {rel.local}",
                span=relations[rel].span,
                subject=str(rel),
            )
        )
    return diags


def _cycle_nodes(nodes: list[Qid], succ) -> list[Qid]:
    """Nodes participating in at least one cycle, in stable input order."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    on_cycle: set[Qid] = set()

    def visit(n: Qid, stack: list[Qid]) -> None:
        color[n] = GREY
        stack.append(n)
        for m in succ(n):
            if m not in color:
                continue
            if color[m] == GREY:
                on_cycle.update(stack[stack.index(m):])
            elif color[m] == WHITE:
                visit(m, stack)
        stack.pop()
        color[n] = BLACK

    for n in nodes:
        if color[n] == WHITE:
            visit(n, [])
    return [n for n in nodes if n in on_cycle]


def build_graphs(
    model: LexiconModel, statements: list
) -> tuple[list[SemGraph], list[Diagnostic]]:
    """Construct raw (asserted-only) data graphs from parsed statements.

    Node types must name declared classes (E100) and edges declared
    relations (E101); graphs with errors are not returned.
    """
    from . import parser as _p

    graphs: list[SemGraph] = []
    diags: list[Diagnostic] = []
    seen_names: set[str] = set()
    for stmt in statements:
        if not isinstance(stmt, _p.GraphStmt):
            continue
        if stmt.name in seen_names:
            diags.append(
                Diagnostic(
                    "E050",
                    f"graph {stmt.name} defined twice",
                    span=stmt.span,
                    subject=f"{DATA_PREFIX}:{stmt.name}",
                )
            )
            continue
        seen_names.add(stmt.name)
        graph = SemGraph(name=data_qid(stmt.name), span=stmt.span)
        ok = True
        for node, cls_local, span in stmt.node_decls:
            cls = class_qid(cls_local)
            if cls not in model.classes:
                diags.append(
                    Diagnostic(
                        "E100",
                        f"unknown class {cls_local} in node declaration",
                        span=span,
                        subject=node,
                    )
                )
                ok = False
                continue
            graph.assert_type(node, cls)
            graph.spans.setdefault(node, span)
        for subj, rel_local, obj, span in stmt.edge_decls:
            rel = rel_qid(rel_local)
            if rel not in model.relations:
                diags.append(
                    Diagnostic(
                        "E101",
                        f"unknown relation {rel_local} in edge",
                        span=span,
                        subject=subj,
                    )
                )
                ok = False
                continue
            graph.assert_edge(subj, rel, obj)
            graph.spans.setdefault(subj, span)
            graph.spans.setdefault(obj, span)
        if ok:
            graphs.append(graph)
    return graphs, diags
