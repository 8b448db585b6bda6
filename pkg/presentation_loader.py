"""
Presentation Loader Module
Built-in variety presentations and the text format for user presentations
"""

import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from errors import InputError, PresentationError
from term_algebra import CIRC, PREC_ONLY, PREC_SUCC, SUCC_ONLY, Polynomial, Signature, degree, is_multilinear
from term_parser import format_polynomial, parse_equation

logger = logging.getLogger(__name__)

RELATION_DEGREES = (3, 4)

NOVIKOV = (
    "(a*b)*c - (a*c)*b",
    "(a*b)*c - a*(b*c) - (b*a)*c + b*(a*c)",
)

BICOMMUTATIVE = (
    "(a*b)*c - (a*c)*b",
    "a*(b*c) - b*(a*c)",
)

DERNOV = (
    "(a<b)<c - (a<c)<b",
    "a>(b>c) + (b>c)<a - b>(a>c) - (a>c)<b",
    "(a>b)>c - (a>c)<b - (a>c)>b + (a>b)<c",
    "(a<b)>c - a<(c<b) + (a<c)<b + c>(a<b) - (c<b)>a + c<(a<b) - (c<a)<b - a>(c<b)",
)

DERNOV_DUAL = (
    "a<(b<c) + (b<c)>a",
    "a<(b>c)",
    "(a<b)<c - (c<b)>a - (a<c)<b + (b<c)>a",
    "(a>b)<c + c>(a>b) - (a>c)>b",
    "a>(b<c) + (b<c)>a",
    "a>(b>c) - b>(a>c)",
    "(a<b)>c - (c<b)>a",
    "(a>b)>c - (a>c)>b",
    # consequences used by the splitting into pure parts
    "a>(b<c) - a<(b<c)",
    "(b<a)>c - (c<a)<b + (c<b)<a + a<(c<b)",
)

# The pure-prec part of the dual is left-commutative and right-symmetric.
NOV_S = (
    "a<(b<c) - b<(a<c)",
    "(a<b)<c - a<(b<c) - (a<c)<b + a<(c<b)",
    "(a<(b<c))<d",
    "a<(b<(c<d))",
    "a<((b<c)<d) - a<((b<d)<c)",
    "((a<b)<c)<d - ((a<c)<b)<d",
)

BICOM_S = (
    "(a>b)>c - (a>c)>b",
    "a>(b>c) - b>(a>c)",
    "((a>b)>c)>d - d>(c>(b>a))",
    "((a>b)>c)>d - c>(b>(a>d))",
    "((a>b)>c)>d - c>((d>a)>b)",
    "((a>b)>c)>d - b>((d>a)>c)",
    "((a>b)>c)>d - b>((c>a)>d)",
)

BUILTIN_SOURCES: Dict[str, Tuple[Signature, Tuple[str, ...]]] = {
    "novikov": (CIRC, NOVIKOV),
    "bicommutative": (CIRC, BICOMMUTATIVE),
    "dernov": (PREC_SUCC, DERNOV),
    "dernov_dual": (PREC_SUCC, DERNOV_DUAL),
    "nov_s": (PREC_ONLY, NOV_S),
    "bicom_s": (SUCC_ONLY, BICOM_S),
}

BUILTIN_NAMES = tuple(BUILTIN_SOURCES)


def check_relation(relation: Polynomial) -> int:
    """Validate a relation and return its degree"""
    if relation.is_zero():
        raise PresentationError("relation is identically zero")
    degrees = relation.degrees()
    if len(degrees) != 1:
        raise PresentationError(f"inhomogeneous relation (degrees {sorted(degrees)})")
    (d,) = degrees
    for m in relation:
        if not is_multilinear(m, d):
            raise PresentationError(f"non-multilinear relation: each of x1..x{d} must occur exactly once")
    if d not in RELATION_DEGREES:
        raise PresentationError(f"relation degree {d} is not supported (expected 3 or 4)")
    return d


@dataclass(frozen=True)
class Presentation:
    """A signature together with homogeneous multilinear relations"""

    name: str
    signature: Signature
    relations: Tuple[Polynomial, ...]

    def __post_init__(self):
        for i, relation in enumerate(self.relations, 1):
            try:
                check_relation(relation)
            except PresentationError as exc:
                raise PresentationError(f"{self.name}: relation {i}: {exc}") from None

    @property
    def degrees(self) -> List[int]:
        return sorted({degree(next(iter(r))) for r in self.relations})

    @property
    def is_quadratic(self) -> bool:
        return all(d == 3 for d in self.degrees)

    def relations_of_degree(self, d: int) -> List[Polynomial]:
        return [r for r in self.relations if degree(next(iter(r))) == d]

    def to_text(self) -> str:
        lines = [f"name: {self.name}", f"ops: {' '.join(self.signature.glyphs)}"]
        lines.extend(f"{format_polynomial(r, self.signature)} = 0" for r in self.relations)
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def builtin(name: str) -> Presentation:
    """One of novikov, bicommutative, dernov, dernov_dual, nov_s, bicom_s"""
    if name not in BUILTIN_SOURCES:
        raise PresentationError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    signature, sources = BUILTIN_SOURCES[name]
    relations = tuple(parse_equation(text, signature) for text in sources)
    return Presentation(name, signature, relations)


def free_presentation(signature: Signature, name: str = "free") -> Presentation:
    return Presentation(name, signature, ())


def load(source: Union[str, Path], name: Optional[str] = None) -> Presentation:
    """Load a presentation from a file path or directly from its text"""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and not source.lstrip().startswith("ops:")):
        path = Path(source)
        if not path.exists():
            raise InputError(f"presentation file not found: {path}")
        text = path.read_text(encoding="utf-8")
        default_name = path.stem
    else:
        text = source
        default_name = "custom"
    presentation = parse_presentation(text, name or default_name)
    logger.info("✓ Loaded presentation %s: %d relations", presentation.name, len(presentation.relations))
    return presentation


def parse_presentation(text: str, default_name: str = "custom") -> Presentation:
    signature: Optional[Signature] = None
    name = default_name
    relations: List[Polynomial] = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("name:"):
                name = line[len("name:"):].strip() or name
            elif line.startswith("ops:"):
                if signature is not None:
                    raise PresentationError("duplicate 'ops:' header")
                signature = Signature.from_glyphs(line[len("ops:"):].split())
            elif signature is None:
                raise PresentationError("missing 'ops:' header before the first relation")
            else:
                relation = parse_equation(line, signature)
                check_relation(relation)
                relations.append(relation)
        except InputError as exc:
            raise PresentationError(f"line {number}: {exc}") from None
    if signature is None:
        raise PresentationError("missing 'ops:' header")
    return Presentation(name, signature, tuple(relations))


def resolve(builtin_name: Optional[str] = None, path: Optional[str] = None) -> Presentation:
    if bool(builtin_name) == bool(path):
        raise InputError("give exactly one of --builtin or --file")
    if builtin_name:
        return builtin(builtin_name)
    return load(Path(path))
