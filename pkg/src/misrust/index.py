"""Declarations gathered across the analysed file set.

Everything here is keyed by plain names; there is no module-path resolution
beyond "the qualifier names an impl type, trait or module".
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import PurePath
from typing import Iterable

from .source import SourceUnit, SyntaxNode, type_base_name

_TURBOFISH = re.compile(r"::\s*<.*$", re.S)


@dataclass(frozen=True)
class FnDecl:
    file: str
    node_id: int
    name: str
    is_unsafe: bool
    is_method: bool  # takes a self parameter
    owner: str | None  # impl self type or trait name
    owner_is_trait: bool
    module: str | None  # innermost inline module, else file stem
    has_body: bool

    @property
    def key(self) -> tuple[str, int]:
        return (self.file, self.node_id)


def split_path(path_text: str | None) -> list[str]:
    """``a::b::<T>::c`` -> ``["a", "b", "c"]`` with generic arguments dropped."""
    if not path_text:
        return []
    text = _TURBOFISH.sub("", path_text.strip())
    out = []
    depth = 0
    cur = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif depth == 0:
            if text.startswith("::", i):
                out.append("".join(cur).strip())
                cur = []
                i += 2
                continue
            cur.append(ch)
        i += 1
    out.append("".join(cur).strip())
    return [s for s in out if s]


def _module_of(unit: SourceUnit, node: SyntaxNode) -> str:
    for a in unit.ancestors(node):
        if a.kind == "ModuleItem" and a.props.get("name"):
            return a.props["name"]
    return PurePath(unit.path).stem


@dataclass
class SetIndex:
    """Name-keyed view of every unit in one analysis run."""

    functions: dict[str, list[FnDecl]] = field(default_factory=lambda: defaultdict(list))
    by_key: dict[tuple[str, int], FnDecl] = field(default_factory=dict)
    trait_methods: dict[str, set[str]] = field(default_factory=lambda: defaultdict(set))
    # self type name -> {trait name -> {method names defined in that impl}}
    trait_impls: dict[str, dict[str, set[str]]] = field(default_factory=lambda: defaultdict(dict))
    drop_impls: set[str] = field(default_factory=set)
    union_names: set[str] = field(default_factory=set)
    units: list[SourceUnit] = field(default_factory=list)
    # derived views (call graph) computed once per index
    cache: dict[str, object] = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, units: Iterable[SourceUnit]) -> SetIndex:
        idx = cls()
        for unit in units:
            idx.add(unit)
        return idx

    def add(self, unit: SourceUnit) -> None:
        self.units.append(unit)
        self.cache.clear()
        for n in unit.walk("FunctionItem", "ImplBlock", "UnionItem"):
            if n.kind == "UnionItem":
                if n.props.get("name"):
                    self.union_names.add(n.props["name"])
            elif n.kind == "ImplBlock":
                self._add_impl(unit, n)
            else:
                self._add_fn(unit, n)

    def _add_fn(self, unit: SourceUnit, n: SyntaxNode) -> None:
        name = n.props.get("name")
        if not name:
            return
        owner = None
        owner_is_trait = False
        cid = n.props.get("container")
        if cid is not None:
            c = unit.nodes[cid]
            if c.kind == "TraitItem":
                owner, owner_is_trait = c.props.get("name"), True
                self.trait_methods[owner].add(name)
            else:
                owner = c.props.get("self_type_name")
        is_unsafe = n.props["is_unsafe"]
        if n.props.get("in_extern_block"):
            # every foreign item is unsafe to call unless marked `safe`
            is_unsafe = not n.props.get("is_safe_decl")
        params = n.props.get("params", ())
        decl = FnDecl(
            file=unit.path,
            node_id=n.node_id,
            name=name,
            is_unsafe=is_unsafe,
            is_method=bool(params) and params[0][0] == "self",
            owner=owner,
            owner_is_trait=owner_is_trait,
            module=_module_of(unit, n),
            has_body=n.props.get("has_body", False),
        )
        self.functions[name].append(decl)
        self.by_key[decl.key] = decl

    def _add_impl(self, unit: SourceUnit, n: SyntaxNode) -> None:
        ty = n.props.get("self_type_name")
        trait = n.props.get("trait_name")
        if not ty or not trait or n.props.get("is_negative"):
            return
        methods = {
            c.props["name"]
            for c in unit.descendants(n)
            if c.kind == "FunctionItem" and c.props.get("container") == n.node_id and c.props.get("name")
        }
        self.trait_impls[ty].setdefault(trait, set()).update(methods)
        if trait == "Drop":
            self.drop_impls.add(ty)

    # -- call resolution -------------------------------------------------

    def resolve_call(self, path_text: str | None, *, self_type: str | None = None) -> list[FnDecl]:
        """Candidate declarations for a path-call such as ``f()`` or ``S::f()``."""
        segs = split_path(path_text)
        if not segs:
            return []
        name = segs[-1]
        cands = self.functions.get(name, [])
        if len(segs) == 1:
            return [d for d in cands if d.owner is None]
        qual = segs[-2]
        if qual == "Self" and self_type:
            qual = self_type
        if qual in ("crate", "self", "super"):
            return [d for d in cands if d.owner is None]
        narrowed = [d for d in cands if d.owner == qual or (d.owner is None and d.module == qual)]
        return narrowed

    def resolve_method(self, name: str | None, *, receiver_type: str | None = None) -> list[FnDecl]:
        """Candidate declarations for ``recv.name(..)``; narrowed by receiver type when known."""
        if not name:
            return []
        cands = [d for d in self.functions.get(name, []) if d.is_method]
        if receiver_type:
            typed = [d for d in cands if d.owner == receiver_type]
            if typed:
                return typed
        return cands

    def implemented_traits(self, type_name: str) -> dict[str, set[str]]:
        return self.trait_impls.get(type_name, {})


def self_type_of(unit: SourceUnit, node: SyntaxNode) -> str | None:
    for a in unit.ancestors(node):
        if a.kind == "ImplBlock":
            return a.props.get("self_type_name")
        if a.kind == "TraitItem":
            return a.props.get("name")
    return None


def receiver_type_name(type_text: str | None) -> str | None:
    if not type_text:
        return None
    t = type_text.strip()
    while t.startswith("&"):
        t = t[1:].lstrip()
        if t.startswith("mut "):
            t = t[4:]
    if t.startswith("self"):
        return None
    return type_base_name(t)
