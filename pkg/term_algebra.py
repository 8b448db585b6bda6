"""
Term Algebra Module
Signatures, planar binary tree monomials, rational polynomials and the monomial order
"""

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from errors import InputError
from rational_linalg import ONE, ZERO, Rational, rational

GLYPH_NAMES = {"<": "prec", ">": "succ", "*": "circ"}


class Operation(NamedTuple):
    name: str
    glyph: str


@dataclass(frozen=True)
class Signature:
    """Ordered binary operations; list order is the operation rank used by the monomial order"""

    operations: Tuple[Operation, ...]

    def __post_init__(self):
        if not self.operations:
            raise InputError("a signature needs at least one operation")
        names = [op.name for op in self.operations]
        glyphs = [op.glyph for op in self.operations]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate operation names: {names}")
        if len(set(glyphs)) != len(glyphs):
            raise InputError(f"duplicate operation glyphs: {glyphs}")

    @classmethod
    def from_glyphs(cls, glyphs: Iterable[str]) -> "Signature":
        ops = []
        for glyph in glyphs:
            if glyph not in GLYPH_NAMES:
                raise InputError(f"unknown glyph {glyph!r}; expected one of {' '.join(GLYPH_NAMES)}")
            ops.append(Operation(GLYPH_NAMES[glyph], glyph))
        return cls(tuple(ops))

    def __len__(self) -> int:
        return len(self.operations)

    @cached_property
    def names(self) -> Tuple[str, ...]:
        return tuple(op.name for op in self.operations)

    @cached_property
    def glyphs(self) -> Tuple[str, ...]:
        return tuple(op.glyph for op in self.operations)

    @cached_property
    def _ranks(self) -> Dict[str, int]:
        return {op.name: i for i, op in enumerate(self.operations)}

    @cached_property
    def _by_glyph(self) -> Dict[str, Operation]:
        return {op.glyph: op for op in self.operations}

    def rank(self, name: str) -> int:
        try:
            return self._ranks[name]
        except KeyError:
            raise InputError(f"operation {name!r} is not in signature {self.glyphs}") from None

    def by_glyph(self, glyph: str) -> Operation:
        try:
            return self._by_glyph[glyph]
        except KeyError:
            raise InputError(f"unknown glyph {glyph!r} for signature {' '.join(self.glyphs)}") from None

    def glyph_of(self, name: str) -> str:
        return self.operations[self.rank(name)].glyph


CIRC = Signature((Operation("circ", "*"),))
PREC_SUCC = Signature((Operation("prec", "<"), Operation("succ", ">")))
PREC_ONLY = Signature((Operation("prec", "<"),))
SUCC_ONLY = Signature((Operation("succ", ">"),))


class Node(NamedTuple):
    op: str
    left: "Monomial"
    right: "Monomial"


# A leaf is the positive integer index of its variable.
Monomial = Union[int, Node]


def is_leaf(m: Monomial) -> bool:
    return isinstance(m, int)


@lru_cache(maxsize=None)
def leaves(m: Monomial) -> Tuple[int, ...]:
    if is_leaf(m):
        return (m,)
    return leaves(m.left) + leaves(m.right)


def degree(m: Monomial) -> int:
    return len(leaves(m))


@lru_cache(maxsize=None)
def operations_used(m: Monomial) -> frozenset:
    if is_leaf(m):
        return frozenset()
    return operations_used(m.left) | operations_used(m.right) | {m.op}


def is_multilinear(m: Monomial, n: Optional[int] = None) -> bool:
    vs = leaves(m)
    n = len(vs) if n is None else n
    return len(vs) == n and sorted(vs) == list(range(1, n + 1))


def left_normed(indices: Sequence[int], op: str) -> Monomial:
    """((x_i1 x_i2) ...) x_in"""
    result: Monomial = indices[0]
    for index in indices[1:]:
        result = Node(op, result, index)
    return result


def right_normed(first: int, rest: Sequence[int], op: str) -> Monomial:
    """x_first (((x_r2 x_r3) ...) x_rn)"""
    return Node(op, first, left_normed(rest, op))


def substitute(m: Monomial, assignment: Mapping[int, Monomial]) -> Monomial:
    """Simultaneous substitution of monomials for variables"""
    if is_leaf(m):
        try:
            return assignment[m]
        except KeyError:
            raise InputError(f"no assignment for variable x{m}") from None
    return Node(m.op, substitute(m.left, assignment), substitute(m.right, assignment))


def relabel(m: Monomial, mapping: Mapping[int, int]) -> Monomial:
    if is_leaf(m):
        return mapping.get(m, m)
    return Node(m.op, relabel(m.left, mapping), relabel(m.right, mapping))


def replace_leaf(m: Monomial, variable: int, replacement: Monomial) -> Monomial:
    if is_leaf(m):
        return replacement if m == variable else m
    return Node(m.op, replace_leaf(m.left, variable, replacement), replace_leaf(m.right, variable, replacement))


def with_leaves(m: Monomial, labels: Sequence[int]) -> Monomial:
    """Same tree with its leaves, read left to right, replaced by labels"""
    it = iter(labels)

    def build(node: Monomial) -> Monomial:
        if is_leaf(node):
            return next(it)
        left = build(node.left)
        return Node(node.op, left, build(node.right))

    return build(m)


def apply_op_map(m: Monomial, op_map: Mapping[str, Tuple[str, bool]]) -> Monomial:
    """Rename operations; a True flag also swaps the arguments of that operation"""
    if is_leaf(m):
        return m
    target, reverse = op_map[m.op]
    left, right = apply_op_map(m.left, op_map), apply_op_map(m.right, op_map)
    return Node(target, right, left) if reverse else Node(target, left, right)


def identity_map(source: Signature, target: Signature) -> Dict[str, Tuple[str, bool]]:
    _check_same_size(source, target)
    return {a: (b, False) for a, b in zip(source.names, target.names)}


def opposite_map(source: Signature, target: Signature) -> Dict[str, Tuple[str, bool]]:
    _check_same_size(source, target)
    return {a: (b, True) for a, b in zip(source.names, target.names)}


def _check_same_size(source: Signature, target: Signature) -> None:
    if len(source) != len(target):
        raise InputError(f"signature sizes differ: {len(source)} vs {len(target)}")


@lru_cache(maxsize=None)
def order_key(m: Monomial, sig: Signature) -> tuple:
    """Sort key: degree, then mixed before pure, then preorder with op ranks and variable indices"""
    mixed = 1 if len(operations_used(m)) > 1 else 0
    return degree(m), mixed, _preorder(m, sig)


def _preorder(m: Monomial, sig: Signature) -> tuple:
    if is_leaf(m):
        return ((0, m),)
    return ((1, sig.rank(m.op)),) + _preorder(m.left, sig) + _preorder(m.right, sig)


def monomial_order(a: Monomial, b: Monomial, sig: Signature) -> int:
    ka, kb = order_key(a, sig), order_key(b, sig)
    return (ka > kb) - (ka < kb)


@lru_cache(maxsize=None)
def _monomials_on(variables: Tuple[int, ...], op_names: Tuple[str, ...]) -> Tuple[Monomial, ...]:
    if len(variables) == 1:
        return (variables[0],)
    found: List[Monomial] = []
    for size in range(1, len(variables)):
        for chosen in itertools.combinations(variables, size):
            rest = tuple(v for v in variables if v not in chosen)
            lefts, rights = _monomials_on(chosen, op_names), _monomials_on(rest, op_names)
            for op in op_names:
                for left in lefts:
                    for right in rights:
                        found.append(Node(op, left, right))
    return tuple(found)


@lru_cache(maxsize=None)
def multilinear_basis(sig: Signature, n: int) -> Tuple[Monomial, ...]:
    """Every multilinear monomial of degree n, ascending in the monomial order"""
    if n < 1:
        raise InputError(f"degree must be at least 1, got {n}")
    found = _monomials_on(tuple(range(1, n + 1)), sig.names)
    return tuple(sorted(found, key=lambda m: order_key(m, sig)))


def random_monomial(sig: Signature, n: int, rng: np.random.Generator,
                    generators: Optional[int] = None) -> Monomial:
    """Random tree of degree n; multilinear unless a generator count is given"""
    if generators is None:
        labels = [int(v) + 1 for v in rng.permutation(n)]
    else:
        labels = [int(v) for v in rng.integers(1, generators + 1, size=n)]

    def build(size: int) -> Monomial:
        if size == 1:
            return labels.pop()
        split = int(rng.integers(1, size))
        left = build(split)
        right = build(size - split)
        return Node(sig.names[int(rng.integers(len(sig)))], left, right)

    return build(n)


def accumulate(target: Dict, source: Mapping, coeff: Rational = ONE) -> Dict:
    """target += coeff * source, dropping cancelled keys"""
    for key, value in source.items():
        total = target.get(key, ZERO) + coeff * value
        if total:
            target[key] = total
        else:
            target.pop(key, None)
    return target


class Polynomial:
    """Finite rational combination of monomials; zero coefficients are never stored"""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, object]] = None):
        clean: Dict[Monomial, Rational] = {}
        for m, c in (terms or {}).items():
            c = rational(c)
            if c:
                clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def monomial(cls, m: Monomial, coeff: object = 1) -> "Polynomial":
        return cls({m: coeff})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @property
    def terms(self) -> Dict[Monomial, Rational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self) -> List[Monomial]:
        return list(self._terms)

    def coefficient(self, m: Monomial) -> Rational:
        return self._terms.get(m, ZERO)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(accumulate(dict(self._terms), other._terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(accumulate(dict(self._terms), other._terms, -ONE))

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def scale(self, coeff: object) -> "Polynomial":
        coeff = rational(coeff)
        return Polynomial({m: coeff * c for m, c in self._terms.items()})

    def __rmul__(self, coeff: object) -> "Polynomial":
        return self.scale(coeff)

    def degrees(self) -> set:
        return {degree(m) for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def map_monomials(self, fn) -> "Polynomial":
        out: Dict[Monomial, Rational] = {}
        for m, c in self._terms.items():
            accumulate(out, {fn(m): c})
        return Polynomial(out)

    def substitute(self, assignment: Mapping[int, Monomial]) -> "Polynomial":
        return self.map_monomials(lambda m: substitute(m, assignment))

    def relabel(self, mapping: Mapping[int, int]) -> "Polynomial":
        return self.map_monomials(lambda m: relabel(m, mapping))

    def sorted_terms(self, sig: Signature, descending: bool = True) -> List[Tuple[Monomial, Rational]]:
        return sorted(self._terms.items(), key=lambda t: order_key(t[0], sig), reverse=descending)

    def __repr__(self) -> str:
        return f"Polynomial({len(self._terms)} terms)"
