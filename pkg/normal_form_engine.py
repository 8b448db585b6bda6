"""
Normal Form Engine Module
Closed-form bases of the free Nov_s and BiCom_s algebras, their multiplication tables,
term evaluation into those bases, and the splitting of the dual of DerNov into pure parts
"""

import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from errors import InputError
from expansion_engine import ExpansionEngine
from presentation_loader import builtin
from rational_linalg import ONE, Rational, SparseMatrix, inverse
from term_algebra import (
    Monomial,
    Node,
    Polynomial,
    accumulate,
    degree,
    is_leaf,
    leaves,
    left_normed,
    operations_used,
    relabel,
    right_normed,
    with_leaves,
)

logger = logging.getLogger(__name__)

PREC = "prec"
SUCC = "succ"

LEFT_NORMED = "L"
RIGHT_NORMED = "R"

Term = Union[Monomial, Polynomial]


class BasisWord(NamedTuple):
    """A basis monomial read as its shape and the generator indices left to right"""

    shape: str
    indices: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.indices)


def basis_word(m: Monomial) -> Optional[BasisWord]:
    """Left-normed ((x_m1 x_m2)...)x_mn or right-normed x_r1((x_r2 x_r3)...x_rn); None for other shapes"""
    indices = leaves(m)
    if is_leaf(m) or len(operations_used(m)) != 1:
        return BasisWord(LEFT_NORMED, indices) if is_leaf(m) else None
    op = m.op
    if m == left_normed(indices, op):
        return BasisWord(LEFT_NORMED, indices)
    if len(indices) >= 3 and m == right_normed(indices[0], indices[1:], op):
        return BasisWord(RIGHT_NORMED, indices)
    return None


def _nondecreasing(seq: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(seq, seq[1:]))


def _low_degree_basis(word: BasisWord) -> bool:
    if word.degree <= 2:
        return True
    k = word.indices
    if word.shape == LEFT_NORMED:
        return k[1] <= k[2]
    return k[0] >= k[1]


def is_basis_N(m: Monomial) -> bool:
    """Membership in the basis of the free Nov_s algebra"""
    word = basis_word(m)
    if word is None or (not is_leaf(m) and m.op != PREC):
        return False
    if word.degree <= 3:
        return _low_degree_basis(word)
    k = word.indices
    if word.shape == LEFT_NORMED:
        return _nondecreasing(k[1:])
    if not _nondecreasing(k[2:]):
        return False
    return k[0] < k[1] if word.degree % 2 == 0 else k[0] <= k[1]


def is_basis_B(m: Monomial) -> bool:
    """Membership in the basis of the free BiCom_s algebra"""
    word = basis_word(m)
    if word is None or (not is_leaf(m) and m.op != SUCC):
        return False
    if word.degree <= 3:
        return _low_degree_basis(word)
    return word.shape == LEFT_NORMED and _nondecreasing(word.indices)


def _label_sequences(n: int, generators: Optional[int]) -> Iterable[Tuple[int, ...]]:
    if generators is None:
        return itertools.permutations(range(1, n + 1))
    if generators < 1:
        raise InputError(f"generator count must be positive, got {generators}")
    return itertools.product(range(1, generators + 1), repeat=n)


def basis_monomials(n: int, op: str, is_basis: Callable[[Monomial], bool],
                    generators: Optional[int] = None) -> List[Monomial]:
    """Basis monomials of degree n: multilinear in x1..xn, or over x1..xk when generators=k"""
    if n < 1:
        raise InputError(f"degree must be at least 1, got {n}")
    found: Dict[Monomial, None] = {}
    for seq in _label_sequences(n, generators):
        candidates = [left_normed(seq, op)]
        if n >= 3:
            candidates.append(right_normed(seq[0], seq[1:], op))
        for m in candidates:
            if is_basis(m):
                found[m] = None
    return list(found)


def census_N(n: int, generators: Optional[int] = None) -> int:
    return len(basis_monomials(n, PREC, is_basis_N, generators))


def census_B(n: int, generators: Optional[int] = None) -> int:
    return len(basis_monomials(n, SUCC, is_basis_B, generators))


def _normalize_R(r1: int, r2: int, rest: Sequence[int], op: str) -> Dict[Monomial, Rational]:
    # x_r1((x_r2 ...) ...): the tail is symmetric, the first two slots swap with sign (-1)^(n-3)
    n = len(rest) + 2
    sign = ONE
    if r1 > r2:
        r1, r2 = r2, r1
        sign = -ONE if (n - 3) % 2 else ONE
    if r1 == r2 and n % 2 == 0:
        return {}
    return {right_normed(r1, [r2] + sorted(rest), op): sign}


def _normalize_L(seq: Sequence[int], op: str) -> Dict[Monomial, Rational]:
    first, middle, last = seq[0], sorted(seq[1:-1]), seq[-1]
    top = middle[-1]
    if last >= top:
        return {left_normed([first] + middle + [last], op): ONE}
    rest = middle[:-1] + [last]
    out: Dict[Monomial, Rational] = {left_normed([first] + sorted(rest) + [top], op): ONE}
    accumulate(out, _normalize_R(top, first, rest, op))
    accumulate(out, _normalize_R(last, first, middle[:-1] + [top], op), -ONE)
    return out


def product_N(a: BasisWord, b: BasisWord, op: str = PREC) -> Dict[Monomial, Rational]:
    """Product of basis words of total degree at least 4 in the free Nov_s algebra"""
    if a.shape == RIGHT_NORMED or b.shape == RIGHT_NORMED:
        return {}
    u, v = a.indices, b.indices
    if len(v) == 1:
        return _normalize_L(u + v, op)
    if len(u) == 1:
        return _normalize_R(u[0], v[0], v[1:], op)
    sign = ONE if len(u) % 2 else -ONE
    return {m: sign * c for m, c in _normalize_R(u[0], v[0], v[1:] + u[1:], op).items()}


def product_B(a: BasisWord, b: BasisWord, op: str = SUCC) -> Dict[Monomial, Rational]:
    """Product of basis words of total degree at least 4 in the free BiCom_s algebra"""
    return {left_normed(sorted(a.indices + b.indices), op): ONE}


@dataclass(frozen=True)
class BasisVariety:
    name: str
    op: str
    is_basis: Callable[[Monomial], bool]
    high_product: Callable[[BasisWord, BasisWord, str], Dict[Monomial, Rational]]


VARIETIES: Dict[str, BasisVariety] = {
    "nov_s": BasisVariety("nov_s", PREC, is_basis_N, product_N),
    "bicom_s": BasisVariety("bicom_s", SUCC, is_basis_B, product_B),
}


class NormalFormEngine:
    """Evaluates terms in the bases of Nov_s and BiCom_s; degree 3 and below goes through linear algebra"""

    def __init__(self, expansion: ExpansionEngine):
        self.expansion = expansion
        self._tables: Dict[Tuple[str, int], Dict[Monomial, Dict[Monomial, Rational]]] = {}
        self._lock = threading.Lock()

    def variety(self, name: str) -> BasisVariety:
        try:
            return VARIETIES[name]
        except KeyError:
            raise InputError(f"unknown variety {name!r}; choose from {', '.join(VARIETIES)}") from None

    def change_of_basis(self, name: str, d: int) -> Dict[Monomial, Dict[Monomial, Rational]]:
        """Each normal-form monomial of degree d written in the closed-form basis"""
        key = (name, d)
        with self._lock:
            if key in self._tables:
                return self._tables[key]
        variety = self.variety(name)
        cb = self.expansion.normal_form_basis(builtin(name), d)
        words = basis_monomials(d, variety.op, variety.is_basis)
        if len(words) != cb.dimension:
            raise InputError(f"{name}: {len(words)} basis monomials against dimension {cb.dimension} at degree {d}")
        index = {m: j for j, m in enumerate(cb.normal_forms)}
        rows = [{index[e]: c for e, c in cb.coordinates(w).items()} for w in words]
        inv = inverse(SparseMatrix.from_rows(rows, len(index)))
        table = {e: {words[i]: c for i, c in inv.row(j).items()} for j, e in enumerate(cb.normal_forms)}
        logger.debug("change of basis for %s at degree %d: %d monomials", name, d, len(table))
        with self._lock:
            self._tables.setdefault(key, table)
            return self._tables[key]

    def _low_degree_product(self, variety: BasisVariety, a: Monomial, b: Monomial) -> Dict[Monomial, Rational]:
        m = Node(variety.op, a, b)
        labels = leaves(m)
        n = len(labels)
        order = sorted(range(n), key=lambda i: (labels[i], i))
        position_label = [0] * n
        for k, i in enumerate(order):
            position_label[i] = k + 1
        generator_of = {k + 1: labels[i] for k, i in enumerate(order)}
        cb = self.expansion.normal_form_basis(builtin(variety.name), n)
        table = self.change_of_basis(variety.name, n)
        out: Dict[Monomial, Rational] = {}
        for e, c in cb.coordinates(with_leaves(m, position_label)).items():
            for word, w in table[e].items():
                accumulate(out, {relabel(word, generator_of): c * w})
        return out

    def multiply(self, name: str, a: Monomial, b: Monomial) -> Polynomial:
        """Product of two basis monomials, expressed in the basis"""
        variety = self.variety(name)
        for factor in (a, b):
            if not variety.is_basis(factor):
                raise InputError(f"factor is not a {name} basis monomial")
        if degree(a) + degree(b) <= 3:
            return Polynomial(self._low_degree_product(variety, a, b))
        return Polynomial(variety.high_product(basis_word(a), basis_word(b), variety.op))

    def mult_N(self, a: Monomial, b: Monomial) -> Polynomial:
        return self.multiply("nov_s", a, b)

    def mult_B(self, a: Monomial, b: Monomial) -> Polynomial:
        return self.multiply("bicom_s", a, b)

    def normal_form(self, name: str, t: Term) -> Polynomial:
        """Evaluate a term with leaves sent to generators; linear in t"""
        variety = self.variety(name)
        items = t.items() if isinstance(t, Polynomial) else ((t, ONE),)
        cache: Dict[Monomial, Dict[Monomial, Rational]] = {}
        out: Dict[Monomial, Rational] = {}
        for m, c in items:
            accumulate(out, self._evaluate(variety, m, cache), c)
        return Polynomial(out)

    def _evaluate(self, variety: BasisVariety, m: Monomial,
                  cache: Dict[Monomial, Dict[Monomial, Rational]]) -> Dict[Monomial, Rational]:
        if m in cache:
            return cache[m]
        if is_leaf(m):
            return {m: ONE}
        if m.op != variety.op:
            raise InputError(f"operation {m.op!r} does not belong to {variety.name}")
        left = self._evaluate(variety, m.left, cache)
        right = self._evaluate(variety, m.right, cache)
        out: Dict[Monomial, Rational] = {}
        for a, ca in left.items():
            for b, cb in right.items():
                if degree(a) + degree(b) <= 3:
                    product = self._low_degree_product(variety, a, b)
                else:
                    product = variety.high_product(basis_word(a), basis_word(b), variety.op)
                accumulate(out, product, ca * cb)
        cache[m] = out
        return out

    def nf_nov_s(self, t: Term) -> Polynomial:
        return self.normal_form("nov_s", t)

    def nf_bicom_s(self, t: Term) -> Polynomial:
        return self.normal_form("bicom_s", t)

    def split_dernov_dual(self, q: Term) -> Tuple[Polynomial, Polynomial]:
        """Rewrite into pure-prec and pure-succ parts, each in its closed-form basis; leaves go to the prec part"""
        items = q.items() if isinstance(q, Polynomial) else ((q, ONE),)
        pure: Dict[Monomial, Rational] = {}
        for m, c in items:
            accumulate(pure, _split(m), c)
        less = {m: c for m, c in pure.items() if _purity(m) != SUCC}
        greater = {m: c for m, c in pure.items() if _purity(m) == SUCC}
        return self.nf_nov_s(Polynomial(less)), self.nf_bicom_s(Polynomial(greater))


def _purity(m: Monomial) -> Optional[str]:
    return None if is_leaf(m) else m.op


def _split(m: Monomial) -> Dict[Monomial, Rational]:
    if is_leaf(m):
        return {m: ONE}
    if m.op not in (PREC, SUCC):
        raise InputError(f"operation {m.op!r} is not prec or succ")
    left, right = _split(m.left), _split(m.right)
    out: Dict[Monomial, Rational] = {}
    for a, ca in left.items():
        for b, cb in right.items():
            accumulate(out, _combine(a, b, m.op), ca * cb)
    return out


def _combine(a: Monomial, b: Monomial, op: str) -> Dict[Monomial, Rational]:
    """a op b for pure a and b, rewritten into pure monomials"""
    pa, pb = _purity(a), _purity(b)
    if op == PREC:
        if pb == SUCC:
            # a<(b>c) = 0
            return {}
        if pa == SUCC:
            if pb is None:
                # (a1>a2)<b = (a1>b)>a2 - b>(a1>a2)
                return {Node(SUCC, Node(SUCC, a.left, b), a.right): ONE, Node(SUCC, b, a): -ONE}
            # a<(b1<b2) vanishes once a is a succ product
            return {}
        return {Node(PREC, a, b): ONE}
    if pa == PREC:
        # (a1<a2)>b = -b<(a1<a2)
        return {m: -c for m, c in _combine(b, a, PREC).items()}
    if pb == PREC:
        # a>(b1<b2) = a<(b1<b2)
        return _combine(a, b, PREC)
    return {Node(SUCC, a, b): ONE}
