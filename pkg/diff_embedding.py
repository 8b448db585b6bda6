"""
Differential Embedding Module
Commutative polynomials in x_i^(n,m) = d^n ∂^m(x_i) with two commuting derivations,
and the embeddings of DerNov and Novikov terms into them
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Mapping, NamedTuple, Optional, Tuple, Union

from errors import InputError
from rational_linalg import ONE, Rational, SparseMatrix, format_rational, rank
from term_algebra import PREC_SUCC, Monomial, Polynomial, Signature, accumulate, is_leaf, multilinear_basis

logger = logging.getLogger(__name__)


class DiffVariable(NamedTuple):
    """x_index^(d_order, pd_order)"""

    index: int
    d_order: int = 0
    pd_order: int = 0

    def __str__(self) -> str:
        return f"x{self.index}^({self.d_order},{self.pd_order})"


DiffMonomial = Tuple[DiffVariable, ...]


class DiffPolynomial:
    """Rational combination of commutative monomials; factors kept sorted, zeros dropped"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[DiffMonomial, Rational]] = None):
        self._terms: Dict[DiffMonomial, Rational] = {}
        for mono, c in (terms or {}).items():
            accumulate(self._terms, {tuple(sorted(mono)): c})

    @classmethod
    def variable(cls, index: int, d_order: int = 0, pd_order: int = 0) -> "DiffPolynomial":
        if index < 1 or d_order < 0 or pd_order < 0:
            raise InputError(f"invalid differential variable x{index}^({d_order},{pd_order})")
        return cls({(DiffVariable(index, d_order, pd_order),): ONE})

    def items(self):
        return self._terms.items()

    def monomials(self) -> List[DiffMonomial]:
        return sorted(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffPolynomial) and self._terms == other._terms

    def __add__(self, other: "DiffPolynomial") -> "DiffPolynomial":
        return DiffPolynomial(accumulate(dict(self._terms), other._terms))

    def __sub__(self, other: "DiffPolynomial") -> "DiffPolynomial":
        return DiffPolynomial(accumulate(dict(self._terms), other._terms, -ONE))

    def scale(self, coeff: Rational) -> "DiffPolynomial":
        return DiffPolynomial({m: coeff * c for m, c in self._terms.items()})

    def __mul__(self, other: "DiffPolynomial") -> "DiffPolynomial":
        out: Dict[DiffMonomial, Rational] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                accumulate(out, {tuple(sorted(a + b)): ca * cb})
        return DiffPolynomial(out)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, mono in enumerate(sorted(self._terms)):
            c = self._terms[mono]
            magnitude = -c if c < 0 else c
            body = "*".join(str(v) for v in mono) or "1"
            if magnitude != ONE:
                body = f"{format_rational(magnitude)} {body}"
            if i == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"DiffPolynomial({self})"


def _derive(p: DiffPolynomial, dd: int, dpd: int) -> DiffPolynomial:
    out: Dict[DiffMonomial, Rational] = {}
    for mono, c in p.items():
        for k, v in enumerate(mono):
            raised = DiffVariable(v.index, v.d_order + dd, v.pd_order + dpd)
            accumulate(out, {tuple(sorted(mono[:k] + (raised,) + mono[k + 1:])): c})
    return DiffPolynomial(out)


def deriv_d(p: DiffPolynomial) -> DiffPolynomial:
    """Leibniz derivation raising the d-order"""
    return _derive(p, 1, 0)


def deriv_pd(p: DiffPolynomial) -> DiffPolynomial:
    """Leibniz derivation raising the ∂-order"""
    return _derive(p, 0, 1)


def _embed(m: Monomial, products: Mapping[str, Callable]) -> DiffPolynomial:
    if is_leaf(m):
        return DiffPolynomial.variable(m)
    try:
        rule = products[m.op]
    except KeyError:
        raise InputError(f"operation {m.op!r} has no image under this embedding") from None
    return rule(_embed(m.left, products), _embed(m.right, products))


TAU_PRODUCTS = {
    "succ": lambda a, b: deriv_pd(a) * deriv_d(b),
    "prec": lambda a, b: a * deriv_d(deriv_pd(b)),
}

TAU_NOV_PRODUCTS = {
    "circ": lambda a, b: a * deriv_d(b),
}

EMBEDDINGS = {"tau": TAU_PRODUCTS, "tau_nov": TAU_NOV_PRODUCTS}


def embed(t: Union[Monomial, Polynomial], mapping: str = "tau") -> DiffPolynomial:
    """Linear extension of an embedding over monomials or polynomials"""
    if mapping not in EMBEDDINGS:
        raise InputError(f"unknown embedding {mapping!r}; choose from {', '.join(EMBEDDINGS)}")
    products = EMBEDDINGS[mapping]
    if not isinstance(t, Polynomial):
        return _embed(t, products)
    out: Dict[DiffMonomial, Rational] = {}
    for m, c in t.items():
        accumulate(out, dict(_embed(m, products).items()), c)
    return DiffPolynomial(out)


def tau(t: Union[Monomial, Polynomial]) -> DiffPolynomial:
    """x_i -> x_i^(0,0), a>b -> ∂(a)d(b), a<b -> a d(∂(b))"""
    return embed(t, "tau")


def tau_nov(t: Union[Monomial, Polynomial]) -> DiffPolynomial:
    """a*b -> a d(b)"""
    return embed(t, "tau_nov")


def verify_identity_under_tau(rel: Polynomial, mapping: str = "tau") -> bool:
    image = embed(rel, mapping)
    if not image.is_zero():
        logger.debug("identity image has %d surviving terms under %s", len(image), mapping)
    return image.is_zero()


@dataclass(frozen=True)
class WeightProfile:
    weights: Tuple[Tuple[int, int], ...]
    homogeneous: bool

    @property
    def common(self) -> Optional[Tuple[int, int]]:
        """The shared (Σn, Σm) when homogeneous"""
        if not self.homogeneous or not self.weights:
            return None
        return self.weights[0]


def weight_profile(p: DiffPolynomial) -> WeightProfile:
    weights = tuple((sum(v.d_order for v in mono), sum(v.pd_order for v in mono)) for mono in p.monomials())
    return WeightProfile(weights, len(set(weights)) <= 1)


def tau_coordinates(t: Union[Monomial, Polynomial]) -> Dict[Hashable, Rational]:
    """Coefficients of the τ-image on differential monomials"""
    return dict(tau(t).items())


def tau_image_matrix(sig: Signature, n: int) -> SparseMatrix:
    rows_by_monomial = [tau(m) for m in multilinear_basis(sig, n)]
    columns: Dict[DiffMonomial, int] = {}
    rows = []
    for image in rows_by_monomial:
        rows.append({columns.setdefault(mono, len(columns)): c for mono, c in image.items()})
    return SparseMatrix.from_rows(rows, max(1, len(columns)))


def tau_rank(n: int, sig: Signature = PREC_SUCC) -> int:
    """Rank of the τ-images of every multilinear degree-n monomial"""
    return rank(tau_image_matrix(sig, n))

