"""
Expansion Engine Module
Multilinear components of the ideal generated by a presentation, with dimensions and normal forms
"""

import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Optional, Tuple

from errors import ArityCapExceeded, ArityError, InputError
from presentation_loader import Presentation
from rational_linalg import ONE, Rational, RowSpaceAccumulator, RrefResult, SparseMatrix, subspace_equal
from term_algebra import (
    Monomial,
    Node,
    Polynomial,
    Signature,
    accumulate,
    apply_op_map,
    identity_map,
    multilinear_basis,
    relabel,
    replace_leaf,
)

logger = logging.getLogger(__name__)

OpMap = Mapping[str, Tuple[str, bool]]


@dataclass(frozen=True)
class ComponentBasis:
    """Reduced consequence space at one arity, its normal forms and the rewriting of pivot monomials"""

    presentation: Presentation
    arity: int
    columns: Tuple[Monomial, ...]
    matrix: SparseMatrix
    pivots: Tuple[int, ...]
    normal_forms: Tuple[Monomial, ...]
    reductions: Mapping[Monomial, Mapping[Monomial, Rational]]
    column_index: Mapping[Monomial, int]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def dimension(self) -> int:
        return len(self.normal_forms)

    def coordinates(self, q) -> Dict[Monomial, Rational]:
        """Normal-form coefficients of a polynomial or monomial of this arity"""
        items = q.items() if isinstance(q, Polynomial) else ((q, ONE),)
        out: Dict[Monomial, Rational] = {}
        for m, c in items:
            if m not in self.column_index:
                raise ArityError(f"monomial is not multilinear of arity {self.arity}")
            rewrite = self.reductions.get(m)
            if rewrite is None:
                accumulate(out, {m: c})
            else:
                accumulate(out, rewrite, c)
        return out

    def reduce(self, q) -> Polynomial:
        return Polynomial(self.coordinates(q))


def reduce(q, cb: ComponentBasis) -> Polynomial:
    return cb.reduce(q)


class ExpansionEngine:
    """Builds consequence spaces degree by degree and caches them per presentation"""

    def __init__(self, max_arity_one_op: int = 6, max_arity_multi_op: int = 5,
                 force: bool = False, chunk_rows: int = 20000):
        self.max_arity_one_op = max_arity_one_op
        self.max_arity_multi_op = max_arity_multi_op
        self.force = force
        self.chunk_rows = chunk_rows
        self._spaces: Dict[Tuple[Presentation, int], RrefResult] = {}
        self._bases: Dict[Tuple[Presentation, int], ComponentBasis] = {}
        self._indices: Dict[Tuple[Signature, int], Dict[Monomial, int]] = {}
        self._building: Dict[Tuple[Presentation, int], threading.Lock] = {}
        self._lock = threading.RLock()

    def arity_cap(self, sig: Signature) -> int:
        return self.max_arity_one_op if len(sig) == 1 else self.max_arity_multi_op

    def check_arity(self, sig: Signature, n: int) -> None:
        if n < 1:
            raise InputError(f"arity must be at least 1, got {n}")
        cap = self.arity_cap(sig)
        if n > cap and not self.force:
            raise ArityCapExceeded(
                f"arity {n} exceeds the cap {cap} for {len(sig)}-operation signatures; pass --force to override"
            )

    def columns(self, sig: Signature, n: int) -> Tuple[Monomial, ...]:
        """Multilinear monomials in descending order, so pivots are leading terms"""
        return tuple(reversed(multilinear_basis(sig, n)))

    def column_index(self, sig: Signature, n: int) -> Dict[Monomial, int]:
        key = (sig, n)
        with self._lock:
            if key not in self._indices:
                self._indices[key] = {m: i for i, m in enumerate(self.columns(sig, n))}
            return self._indices[key]

    def consequence_space(self, p: Presentation, n: int) -> SparseMatrix:
        """Row-reduced spanning set of the arity-n component of the ideal"""
        self.check_arity(p.signature, n)
        return self._space(p, n).reduced

    def rank(self, p: Presentation, n: int) -> int:
        self.check_arity(p.signature, n)
        return self._space(p, n).rank

    def component_dim(self, p: Presentation, n: int) -> int:
        self.check_arity(p.signature, n)
        return len(self.column_index(p.signature, n)) - self._space(p, n).rank

    def _space(self, p: Presentation, n: int) -> RrefResult:
        # the shared lock only guards the dicts; each (p, n) is built once under its own lock
        key = (p, n)
        with self._lock:
            cached = self._spaces.get(key)
            if cached is not None:
                return cached
            building = self._building.setdefault(key, threading.Lock())
        with building:
            with self._lock:
                cached = self._spaces.get(key)
            if cached is None:
                cached = self._build_space(p, n)
                with self._lock:
                    self._spaces[key] = cached
                    self._building.pop(key, None)
        return cached

    def _build_space(self, p: Presentation, n: int) -> RrefResult:
        sig = p.signature
        columns = self.columns(sig, n)
        index = self.column_index(sig, n)
        accumulator = RowSpaceAccumulator(len(columns), self.chunk_rows, columns)
        lowest = min(p.degrees) if p.relations else None
        if lowest is None or n < lowest:
            return accumulator.result()

        for relation in p.relations_of_degree(n):
            for perm in itertools.permutations(range(1, n + 1)):
                mapping = dict(zip(range(1, n + 1), perm))
                accumulator.add(_to_row({relabel(m, mapping): c for m, c in relation.items()}, index))

        if n - 1 >= lowest:
            previous = self._space(p, n - 1)
            prev_columns = self.columns(sig, n - 1)
            for row in previous.basis_rows():
                poly = {prev_columns[j]: c for j, c in row.items()}
                for image in _extensions(poly, sig, n - 1):
                    for placed in _placements(image, n):
                        accumulator.add(_to_row(placed, index))

        result = accumulator.result()
        logger.info("✓ %s arity %d: rank %d of %d (%d generating rows)",
                    p.name, n, result.rank, len(columns), accumulator.rows_seen)
        return result

    def normal_form_basis(self, p: Presentation, n: int) -> ComponentBasis:
        self.check_arity(p.signature, n)
        key = (p, n)
        with self._lock:
            if key in self._bases:
                return self._bases[key]
        space = self._space(p, n)
        columns = self.columns(p.signature, n)
        pivot_set = set(space.pivots)
        reductions: Dict[Monomial, Dict[Monomial, Rational]] = {}
        for row, pivot in zip(space.basis_rows(), space.pivots):
            reductions[columns[pivot]] = {columns[j]: -c for j, c in row.items() if j != pivot}
        basis = ComponentBasis(
            presentation=p,
            arity=n,
            columns=columns,
            matrix=space.reduced,
            pivots=space.pivots,
            normal_forms=tuple(m for j, m in enumerate(columns) if j not in pivot_set),
            reductions=reductions,
            column_index=self.column_index(p.signature, n),
        )
        with self._lock:
            return self._bases.setdefault(key, basis)

    def relation_spaces_equivalent(self, p1: Presentation, p2: Presentation,
                                   op_map: Optional[OpMap] = None, max_arity: int = 3) -> bool:
        """Compare consequence spaces at every arity up to max_arity after renaming p1's operations"""
        if len(p1.signature) != len(p2.signature):
            raise InputError(
                f"signature sizes differ: {len(p1.signature)} vs {len(p2.signature)}"
            )
        op_map = dict(op_map) if op_map is not None else identity_map(p1.signature, p2.signature)
        if set(op_map) != set(p1.signature.names) or \
                sorted(t for t, _ in op_map.values()) != sorted(p2.signature.names):
            raise InputError("operation map must be a bijection between the two signatures")
        for n in range(1, max_arity + 1):
            self.check_arity(p2.signature, n)
            source_columns = self.columns(p1.signature, n)
            target_index = self.column_index(p2.signature, n)
            mapped_rows = []
            for row in self.consequence_space(p1, n).nonzero_rows():
                mapped_rows.append({target_index[apply_op_map(source_columns[j], op_map)]: c
                                    for j, c in row.items()})
            mapped = SparseMatrix.from_rows(mapped_rows, len(target_index), self.columns(p2.signature, n))
            if not subspace_equal(mapped, self.consequence_space(p2, n)):
                logger.info("relation spaces of %s and %s differ at arity %d", p1.name, p2.name, n)
                return False
        return True


def _to_row(poly: Mapping[Monomial, Rational], index: Mapping[Monomial, int]) -> Dict[int, Rational]:
    return {index[m]: c for m, c in poly.items() if c}


def _extensions(poly: Mapping[Monomial, Rational], sig: Signature, d: int) -> Iterator[Dict[Monomial, Rational]]:
    """Images of a degree-d element in degree d+1 using the fresh variable x_{d+1}"""
    fresh = d + 1
    for op in sig.names:
        yield {Node(op, m, fresh): c for m, c in poly.items()}
        yield {Node(op, fresh, m): c for m, c in poly.items()}
    for slot in range(1, d + 1):
        for op in sig.names:
            after = Node(op, slot, fresh)
            before = Node(op, fresh, slot)
            yield {replace_leaf(m, slot, after): c for m, c in poly.items()}
            yield {replace_leaf(m, slot, before): c for m, c in poly.items()}


def _placements(poly: Dict[Monomial, Rational], n: int) -> Iterator[Dict[Monomial, Rational]]:
    """The element itself and its images under the transpositions (j n)"""
    yield poly
    for j in range(1, n):
        swap = {j: n, n: j}
        yield {relabel(m, swap): c for m, c in poly.items()}
