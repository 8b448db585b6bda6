"""
Koszul Engine Module
Tensor bracket, its Jacobiator, and dual presentations extracted from the Jacobi identity
"""

import logging
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from errors import ArityError, InputError, NonQuadraticError
from expansion_engine import ExpansionEngine
from presentation_loader import Presentation
from rational_linalg import ONE, Rational, SparseMatrix, rank, rref
from term_algebra import Monomial, Node, Polynomial, Signature, accumulate, degree, is_multilinear

logger = logging.getLogger(__name__)

Pair = Tuple[Monomial, Monomial]
Coordinates = Callable[[Monomial], Mapping[Hashable, Rational]]


class TensorElement:
    """Sum of coeff * (left ⊗ right); left lives over the dual signature, right over the primal one"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Pair, Rational]] = None):
        self._terms: Dict[Pair, Rational] = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def generator(cls, index: int) -> "TensorElement":
        """The pair y_index ⊗ x_index"""
        return cls({(index, index): ONE})

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and self._terms == other._terms

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(accumulate(dict(self._terms), other._terms))

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(accumulate(dict(self._terms), other._terms, -ONE))

    def __neg__(self) -> "TensorElement":
        return TensorElement({k: -v for k, v in self._terms.items()})

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((degree(right) for _, right in self._terms), default=0)


def bracket(u: TensorElement, v: TensorElement, sig: Signature) -> TensorElement:
    """[y⊗x, y'⊗x'] = sum over ops of (y op y')⊗(x op x') - (y' op y)⊗(x' op x)"""
    if u.degree() + v.degree() > 3:
        raise InputError("bracket beyond degree 3 is not supported")
    out: Dict[Pair, Rational] = {}
    for (yl, xl), c in u.items():
        for (ym, xm), d in v.items():
            for op in sig.names:
                accumulate(out, {(Node(op, yl, ym), Node(op, xl, xm)): c * d})
                accumulate(out, {(Node(op, ym, yl), Node(op, xm, xl)): -c * d})
    return TensorElement(out)


def jacobiator_of(sig: Signature) -> TensorElement:
    g1, g2, g3 = (TensorElement.generator(i) for i in (1, 2, 3))
    return (bracket(bracket(g1, g2, sig), g3, sig)
            + bracket(bracket(g2, g3, sig), g1, sig)
            + bracket(bracket(g3, g1, sig), g2, sig))


def relations_from_tensor(tensor: TensorElement, columns: Sequence[Monomial],
                          coordinates: Coordinates) -> List[Polynomial]:
    """Collect J = sum L_b ⊗ b over coordinates b of the right factors; return a reduced basis of span{L_b}"""
    collected: Dict[Hashable, Dict[Monomial, Rational]] = {}
    for (left, right), c in tensor.items():
        for key, value in coordinates(right).items():
            accumulate(collected.setdefault(key, {}), {left: c * value})
    index = {m: i for i, m in enumerate(columns)}
    rows = [{index[m]: c for m, c in combo.items()} for combo in collected.values() if combo]
    reduced = rref(SparseMatrix.from_rows(rows, len(columns), tuple(columns)))
    return [Polynomial({columns[j]: c for j, c in row.items()}) for row in reduced.basis_rows()]


class KoszulEngine:
    """Quadratic duals through the Jacobi identity of the tensor bracket"""

    def __init__(self, expansion: ExpansionEngine):
        self.expansion = expansion
        self._duals: Dict[Presentation, Presentation] = {}

    @staticmethod
    def require_quadratic(p: Presentation) -> None:
        if not p.is_quadratic:
            raise NonQuadraticError(f"{p.name} is non-quadratic (relation degrees {p.degrees})")

    def jacobiator(self, p: Presentation) -> TensorElement:
        self.require_quadratic(p)
        return jacobiator_of(p.signature)

    def normal_form_coordinates(self, p: Presentation) -> Coordinates:
        basis = self.expansion.normal_form_basis(p, 3)
        return basis.coordinates

    def dual_presentation(self, p: Presentation, coordinates: Optional[Coordinates] = None,
                          name: Optional[str] = None) -> Presentation:
        """Relations of the dual: the span of the left factors once right factors are in coordinates"""
        self.require_quadratic(p)
        if coordinates is None and p in self._duals and name is None:
            return self._duals[p]
        tensor = self.jacobiator(p)
        coords = coordinates or self.normal_form_coordinates(p)
        columns = self.expansion.columns(p.signature, 3)
        relations = relations_from_tensor(tensor, columns, coords)
        dual = Presentation(name or f"dual({p.name})", p.signature, tuple(relations))
        logger.info("✓ Dual of %s: %d independent relations at arity 3", p.name, len(relations))
        if coordinates is None and name is None:
            self._duals[p] = dual
        return dual

    def check_independence(self, p: Presentation, monos: Iterable[Monomial], n: int) -> bool:
        """True iff the images of the monomials in the arity-n component are linearly independent"""
        monos = list(monos)
        for m in monos:
            if not is_multilinear(m, n):
                raise ArityError(f"monomial of degree {degree(m)} is not multilinear of arity {n}")
        if not monos:
            return True
        basis = self.expansion.normal_form_basis(p, n)
        index = {m: i for i, m in enumerate(basis.normal_forms)}
        rows = [{index[b]: c for b, c in basis.coordinates(m).items()} for m in monos]
        return rank(SparseMatrix.from_rows(rows, max(1, len(index)))) == len(monos)

    def tensor_jacobi_vanishes(self, p: Presentation, q: Presentation) -> bool:
        """Whether the bracket on Q ⊗ P satisfies Jacobi at arity 3: left factors reduced in q, right in p"""
        self.require_quadratic(p)
        if q.signature.names != p.signature.names:
            raise InputError("the two presentations must use the same operation names")
        left_basis = self.expansion.normal_form_basis(q, 3)
        right_basis = self.expansion.normal_form_basis(p, 3)
        total: Dict[Tuple[Monomial, Monomial], Rational] = {}
        for (left, right), c in self.jacobiator(p).items():
            for lb, lc in left_basis.coordinates(left).items():
                for rb, rc in right_basis.coordinates(right).items():
                    accumulate(total, {(lb, rb): c * lc * rc})
        return not total
