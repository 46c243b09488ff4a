"""Group registry: the group-file format, bundled groups, projective closure.

A group file declares a conductor N and a list of generator matrices whose
entries are expressions over Q(zeta_N).  Loading validates each generator
(invertible, finite projective order) and records the pair (sigma, tau) with
A^sigma = tau * Id, which downstream character computations need.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

from .cyclotomic import CycScalar, CyclotomicField, scalar_to_expr
from .errors import (
    ClosureCapExceeded,
    InfiniteOrderGenerator,
    NonInvertibleGenerator,
    NotFiniteOrder,
    OrderCapExceeded,
    ParseError,
)
from .expressions import ExprParser, Token, tokenize
from .linalg import (
    ExactMatrix,
    determinant,
    projective_canonical,
    projective_order_and_tau,
)

__all__ = [
    "DATA_DIR_ENV",
    "Generator",
    "GroupSpec",
    "builtin_groups",
    "data_dir",
    "group_order_closure",
    "load_group_file",
    "lookup",
    "parse_group_file",
    "serialize_group",
]

DATA_DIR_ENV = "INVARIANT_QUARTICS_DATA"

# Presentation order for the bundled groups (CLI listings, reports).
BUILTIN_ORDER = (
    "1deg",
    "13deg",
    "14deg",
    "15deg",
    "16deg",
    "17deg",
    "19deg",
    "A",
    "G",
    "C",
    "E",
    "B",
    "H",
    "Q1",
    "Q4",
    "Q5",
    "R3",
    "Q7",
    "P",
)

# Inclusion-diagram family labels for the bundled groups; groups acting
# reducibly have no diagram.
_DIAGRAM_FAMILY = {
    "1deg": "1-12",
    "13deg": "13-21",
    "14deg": "13-21",
    "15deg": "13-21",
    "16deg": "13-21",
    "17deg": "13-21",
    "19deg": "13-21",
    "A": "A-K",
    "G": "A-K",
    "C": "A-K",
    "E": "A-K",
    "B": "B-H",
    "H": "B-H",
}


@dataclass(frozen=True)
class Generator:
    name: str
    matrix: ExactMatrix
    projective_order: int
    tau: CycScalar


@dataclass(frozen=True)
class GroupSpec:
    name: str
    conductor: int
    size: int
    generators: tuple[Generator, ...]
    expected_order: int | None = None
    isomorphism_class: str | None = None
    primitive: bool | None = None
    # Registry-level annotations, not encoded in the file format.
    diagram: str | None = field(default=None, compare=False)
    contains: tuple[str, ...] = field(default=(), compare=False)

    @property
    def field(self) -> CyclotomicField:
        return CyclotomicField(self.conductor)

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(f"group {self.name} has no generator {name!r}")

    def matrices(self) -> list[ExactMatrix]:
        return [g.matrix for g in self.generators]


class _FileParser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    def keyword(self, word: str) -> None:
        t = self.next()
        if t.kind != "NAME" or t.value != word:
            raise ParseError(f"expected {word!r}, got {t.value!r}", t.line, t.col)

    def name(self, what: str) -> str:
        t = self.next()
        if t.kind != "NAME":
            raise ParseError(f"expected {what}, got {t.value!r}", t.line, t.col)
        return t.value

    def integer(self, what: str) -> int:
        t = self.next()
        if t.kind != "INT":
            raise ParseError(f"expected {what}, got {t.value!r}", t.line, t.col)
        return t.value

    def op(self, symbol: str) -> None:
        t = self.next()
        if t.kind != "OP" or t.value != symbol:
            raise ParseError(f"expected {symbol!r}, got {t.value!r}", t.line, t.col)

    def at_keyword(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "NAME" and t.value == word


def parse_group_file(text: str) -> GroupSpec:
    """Parse and validate one group file.

    Every generator is checked invertible (NonInvertibleGenerator) and of
    finite projective order (InfiniteOrderGenerator); sigma and tau are
    recorded on the Generator.
    """
    p = _FileParser(text)
    p.keyword("group")
    name = p.name("group name")
    p.keyword("conductor")
    conductor = p.integer("conductor")
    if conductor < 1:
        raise p.fail("conductor must be positive")
    p.keyword("size")
    size = p.integer("matrix size")
    if size < 1:
        raise p.fail("matrix size must be positive")

    expected_order: int | None = None
    iso_class: str | None = None
    primitive: bool | None = None
    if p.at_keyword("order"):
        p.next()
        expected_order = p.integer("group order")
    if p.at_keyword("class"):
        p.next()
        t = p.next()
        if t.kind != "STRING":
            raise ParseError("class takes a quoted string", t.line, t.col)
        iso_class = t.value
    if p.at_keyword("primitive"):
        p.next()
        t = p.next()
        if t.kind != "NAME" or t.value not in ("true", "false"):
            raise ParseError("primitive takes true or false", t.line, t.col)
        primitive = t.value == "true"

    fld = CyclotomicField(conductor)
    generators: list[Generator] = []
    seen_names: set[str] = set()
    while not p.at_keyword("gen"):
        t = p.peek()
        if t.kind == "EOF":
            break
        raise p.fail(f"expected 'gen', got {t.value!r}")
    while p.at_keyword("gen"):
        p.next()
        gname = p.name("generator name")
        if gname in seen_names:
            raise p.fail(f"duplicate generator name {gname!r}")
        seen_names.add(gname)
        p.keyword("rows")
        p.op("{")
        rows: list[list[CycScalar]] = []
        expr_parser = ExprParser(p.tokens, fld, nvars=0, pos=p.pos)
        while True:
            row: list[CycScalar] = []
            while True:
                poly = expr_parser.parse_expr()
                tail = expr_parser.peek()
                row.append(expr_parser._as_const(poly, tail, "matrix entry"))
                if tail.kind == "OP" and tail.value == ",":
                    expr_parser.next()
                    continue
                break
            rows.append(row)
            tail = expr_parser.peek()
            if tail.kind == "OP" and tail.value == ";":
                expr_parser.next()
                continue
            if tail.kind == "OP" and tail.value == "}":
                expr_parser.next()
                break
            raise ParseError(
                f"expected ';' or '}}' in rows block, got {tail.value!r}",
                tail.line,
                tail.col,
            )
        p.pos = expr_parser.pos
        if len(rows) != size or any(len(r) != size for r in rows):
            raise p.fail(
                f"generator {gname}: expected {size}x{size} rows, got "
                f"{len(rows)}x{max(len(r) for r in rows)}"
            )
        matrix = ExactMatrix(fld, rows)
        if not determinant(matrix):
            raise NonInvertibleGenerator(f"generator {gname} of {name} is singular")
        try:
            sigma, tau = projective_order_and_tau(matrix)
        except (OrderCapExceeded, NotFiniteOrder) as exc:
            raise InfiniteOrderGenerator(
                f"generator {gname} of {name}: {exc}"
            ) from exc
        generators.append(Generator(gname, matrix, sigma, tau))

    tail = p.peek()
    if tail.kind != "EOF":
        raise p.fail(f"trailing input {tail.value!r}")
    if not generators:
        raise p.fail("group file declares no generators")
    return GroupSpec(
        name=name,
        conductor=conductor,
        size=size,
        generators=tuple(generators),
        expected_order=expected_order,
        isomorphism_class=iso_class,
        primitive=primitive,
    )


def serialize_group(spec: GroupSpec) -> str:
    """Canonical text for a GroupSpec; parse_group_file inverts it."""
    head = [f"group {spec.name} conductor {spec.conductor} size {spec.size}"]
    if spec.expected_order is not None:
        head.append(f"order {spec.expected_order}")
    if spec.isomorphism_class is not None:
        head.append(f'class "{spec.isomorphism_class}"')
    if spec.primitive is not None:
        head.append(f"primitive {'true' if spec.primitive else 'false'}")
    lines = [" ".join(head), ""]
    for g in spec.generators:
        lines.append(f"gen {g.name} rows {{")
        body = []
        for row in g.matrix.rows:
            body.append("  " + ", ".join(scalar_to_expr(e) for e in row))
        lines.append(" ;\n".join(body))
        lines.append("}")
        lines.append("")
    return "\n".join(lines)


def load_group_file(path: str | Path) -> GroupSpec:
    return parse_group_file(Path(path).read_text(encoding="utf-8"))


def data_dir() -> Path:
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def _builtin_sort_key(name: str) -> tuple[int, str]:
    try:
        return (BUILTIN_ORDER.index(name), name)
    except ValueError:
        return (len(BUILTIN_ORDER), name)


@lru_cache(maxsize=8)
def _groups_from_dir(resolved: str) -> tuple[GroupSpec, ...]:
    root = Path(resolved)
    specs = [load_group_file(p) for p in sorted(root.glob("*.grp"))]
    specs.sort(key=lambda s: _builtin_sort_key(s.name))
    # Annotate direct containment visible from the files themselves: G
    # contains H when every generator matrix of H appears among G's.
    gen_sets = {
        s.name: {projective_canonical(m) for m in s.matrices()} for s in specs
    }
    annotated = []
    for s in specs:
        inner = tuple(
            other.name
            for other in specs
            if other.name != s.name
            and other.conductor == s.conductor
            and gen_sets[other.name] <= gen_sets[s.name]
        )
        annotated.append(
            replace(s, diagram=_DIAGRAM_FAMILY.get(s.name), contains=inner)
        )
    return tuple(annotated)


def builtin_groups() -> list[GroupSpec]:
    """All bundled groups, in presentation order.

    Set the environment variable named by DATA_DIR_ENV to load *.grp files
    from another directory instead.
    """
    return list(_groups_from_dir(str(data_dir().resolve())))


def lookup(name: str) -> GroupSpec:
    for s in builtin_groups():
        if s.name == name:
            return s
    known = ", ".join(s.name for s in builtin_groups())
    raise KeyError(f"unknown group {name!r} (known: {known})")


def group_order_closure(spec: GroupSpec, cap: int = 4096) -> int:
    """Order of the subgroup of PGL generated by the spec's matrices.

    Breadth-first closure over projectively canonicalized matrices (first
    nonzero entry in row-major order scaled to 1).  Every generator has
    finite order, so products of generators alone exhaust the group.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    fld = spec.field
    gens = [projective_canonical(g.matrix) for g in spec.generators]
    identity = projective_canonical(ExactMatrix.identity(fld, spec.size))
    seen = {identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for m in frontier:
            for g in gens:
                prod = projective_canonical(m * g)
                if prod not in seen:
                    if len(seen) >= cap:
                        raise ClosureCapExceeded(cap)
                    seen.add(prod)
                    next_frontier.append(prod)
        frontier = next_frontier
    return len(seen)
