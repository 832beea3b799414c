"""This module contains the finitely presented group engine.

Words are tuples of signed generator indices: ``+k`` is generator ``k - 1`` and ``-k`` its inverse.
A coset table stores the right action of every generator on the cosets, so ``trace(table, c, word)``
applies the letters of ``word`` from left to right.

Coset table columns are ordered ``x, x^-1, y, y^-1, ...``, which is the order used for breadth-first
standardization and for the spanning tree of the Reidemeister-Schreier rewriting.

.. versionadded:: 0.1.0
"""

import logging
import random
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .defaults import MAX_COSETS
from .exceptions import (
    CosetLimitError,
    DessinatorError,
    IncompleteTableError,
    PermutationError,
    PresentationSyntaxError,
)
from .permcore import Perm, is_transitive

__all__ = [
    "Word",
    "Presentation",
    "CosetTable",
    "SchreierGenerator",
    "SmithForm",
    "Abelianization",
    "free_reduce",
    "cyclic_reduce",
    "invert_word",
    "word_power",
    "parse_word",
    "format_word",
    "parse_presentation",
    "format_presentation",
    "trace",
    "check_table",
    "coset_enumeration",
    "standardize",
    "canonical_table",
    "schreier_generators",
    "reidemeister_schreier",
    "smith_normal_form",
    "abelianization",
    "low_index_subgroups",
    "table_to_json",
    "table_from_json",
]

LOG = logging.getLogger(__name__)

Word = Tuple[int, ...]
"""A word over signed generator indices"""

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"[+-]?\d+")


def free_reduce(word: Iterable[int]) -> Word:
    """Cancel adjacent letter/inverse pairs."""
    stack: List[int] = []
    for letter in word:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def cyclic_reduce(word: Iterable[int]) -> Word:
    """Freely reduce, then strip matching letter/inverse pairs from both ends."""
    reduced = free_reduce(word)
    start, end = 0, len(reduced)
    while end - start > 1 and reduced[start] == -reduced[end - 1]:
        start += 1
        end -= 1
    return reduced[start:end]


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-letter for letter in reversed(word))


def word_power(word: Sequence[int], exponent: int) -> Word:
    """``word`` repeated ``exponent`` times, a negative exponent repeats the inverse."""
    base = tuple(word) if exponent >= 0 else invert_word(word)
    return free_reduce(base * abs(exponent))


def _column(letter: int) -> int:
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


def _letter(column: int) -> int:
    return column // 2 + 1 if column % 2 == 0 else -(column // 2 + 1)


@dataclass(frozen=True)
class Presentation:
    """A finitely presented group ``< generator_names | relators >``.

    Relators are freely reduced on construction and relators reducing to the empty word are dropped.

    Attributes:
        generator_names (:obj:`tuple` of :obj:`str`): Unique generator names
        relators (:obj:`tuple` of :obj:`Word`): The relator words
    """

    generator_names: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        names = tuple(self.generator_names)
        if len(set(names)) != len(names):
            raise PresentationSyntaxError(f"duplicate generator name in {list(names)}")
        relators = []
        for relator in self.relators:
            for letter in relator:
                if letter == 0 or abs(letter) > len(names):
                    raise PresentationSyntaxError(f"letter {letter} outside the {len(names)} generators")
            reduced = free_reduce(relator)
            if reduced:
                relators.append(reduced)
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", tuple(relators))

    @property
    def generator_count(self) -> int:
        """:obj:`int`: Number of generators"""
        return len(self.generator_names)

    def __str__(self) -> str:
        return format_presentation(self)


class _Parser:
    """Recursive descent parser for words and presentations.

    At nesting depth 0 whitespace and commas separate relators, inside brackets whitespace is ignored.
    """

    def __init__(self, text: str, names: Sequence[str] = ()) -> None:
        self.text = text
        self.pos = 0
        self.names = {name: index for index, name in enumerate(names)}

    def error(self, message: str, position: Optional[int] = None) -> PresentationSyntaxError:
        return PresentationSyntaxError(message, self.pos if position is None else position)

    def peek(self) -> Optional[str]:
        return self.text[self.pos] if self.pos < len(self.text) else None

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, char: str) -> None:
        self.skip_ws()
        if self.peek() != char:
            found = self.peek()
            raise self.error(f"expected {char!r}, found {'end of input' if found is None else repr(found)}")
        self.pos += 1

    def parse_names(self) -> List[str]:
        names: List[str] = []
        while True:
            self.skip_ws()
            if self.peek() == ",":
                self.pos += 1
                continue
            match = _NAME_RE.match(self.text, self.pos)
            if not match:
                break
            if match.group() in names:
                raise self.error(f"duplicate generator name {match.group()!r}")
            names.append(match.group())
            self.pos = match.end()
        self.names = {name: index for index, name in enumerate(names)}
        return names

    def parse_relators(self, terminator: str) -> List[Word]:
        relators: List[Word] = []
        while True:
            self.skip_ws()
            char = self.peek()
            if char == ",":
                self.pos += 1
                continue
            if char is None or char == terminator:
                return relators
            relators.append(self.parse_product(0))

    def parse_product(self, depth: int) -> Word:
        word = list(self.parse_factor(depth))
        while True:
            start = self.pos
            self.skip_ws()
            char = self.peek()
            if char == "*":
                self.pos += 1
                word.extend(self.parse_factor(depth))
            elif char is not None and (char in "([-1" or _NAME_RE.match(char)) and (depth > 0 or self.pos == start):
                word.extend(self.parse_factor(depth))
            else:
                if depth == 0:
                    self.pos = start
                return free_reduce(word)

    def parse_factor(self, depth: int) -> Word:
        self.skip_ws()
        if self.peek() == "-":
            self.pos += 1
            return invert_word(self.parse_factor(depth))
        word = self.parse_atom(depth)
        while self.peek() == "^":
            self.pos += 1
            match = _INT_RE.match(self.text, self.pos)
            if not match:
                raise self.error("expected an integer exponent")
            exponent = int(match.group())
            if exponent == 0:
                raise self.error("zero power")
            self.pos = match.end()
            word = word_power(word, exponent)
        return word

    def parse_atom(self, depth: int) -> Word:
        self.skip_ws()
        start = self.pos
        char = self.peek()
        if char == "(":
            self.pos += 1
            word = self.parse_product(depth + 1)
            self.skip_ws()
            if self.peek() != ")":
                raise self.error("unclosed parenthesis", start)
            self.pos += 1
            return word
        if char == "[":
            self.pos += 1
            left = self.parse_product(depth + 1)
            self.expect(",")
            right = self.parse_product(depth + 1)
            self.skip_ws()
            if self.peek() != "]":
                raise self.error("unclosed commutator bracket", start)
            self.pos += 1
            return free_reduce(invert_word(left) + invert_word(right) + left + right)
        if char == "1" and not (self.pos + 1 < len(self.text) and self.text[self.pos + 1].isdigit()):
            self.pos += 1
            return ()
        match = _NAME_RE.match(self.text, self.pos)
        if match:
            name = match.group()
            if name not in self.names:
                raise self.error(f"unknown generator {name!r}")
            self.pos = match.end()
            return (self.names[name] + 1,)
        raise self.error("unexpected " + ("end of input" if char is None else repr(char)))


def parse_presentation(text: str) -> Presentation:
    """Parse ``< names | relators >``.

    Relators are separated by whitespace or commas. Inside a relator ``*`` concatenates, ``^k`` raises to a
    power (``k`` may be negative but not zero), a leading ``-`` inverts, parentheses group and ``[u,v]`` is
    the commutator ``u^-1 v^-1 u v``. ``1`` is the empty word.

    Example:

        .. code-block:: python

            p = parse_presentation("< x y | x^2 y^3 (y*x)^7 >")

    Args:
        text (:obj:`str`): The presentation

    Returns:
        :obj:`Presentation`: The parsed presentation

    Raises:
        :obj:`dessinator.exceptions.PresentationSyntaxError`: With the offending position
    """
    parser = _Parser(text)
    parser.expect("<")
    names = parser.parse_names()
    parser.expect("|")
    relators = parser.parse_relators(">")
    parser.expect(">")
    parser.skip_ws()
    if parser.peek() is not None:
        raise parser.error("trailing characters after '>'")
    return Presentation(tuple(names), tuple(relators))


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse a single word over ``names``, whitespace concatenates."""
    parser = _Parser(text, names)
    parser.skip_ws()
    if parser.peek() is None:
        return ()
    word = parser.parse_product(1)
    parser.skip_ws()
    if parser.peek() is not None:
        raise parser.error(f"unexpected {parser.peek()!r}")
    return word


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    """Write ``word`` with run-length powers, e.g. ``x^2*y^-1``. The empty word is ``1``."""
    if not word:
        return "1"
    parts = []
    index = 0
    while index < len(word):
        letter = word[index]
        run = 1
        while index + run < len(word) and word[index + run] == letter:
            run += 1
        exponent = run if letter > 0 else -run
        name = names[abs(letter) - 1]
        parts.append(name if exponent == 1 else f"{name}^{exponent}")
        index += run
    return "*".join(parts)


def format_presentation(p: Presentation) -> str:
    names = " ".join(p.generator_names)
    relators = " ".join(format_word(r, p.generator_names) for r in p.relators)
    return f"< {names} | {relators} >" if relators else f"< {names} | >"


@dataclass(frozen=True)
class CosetTable:
    """A complete coset table, i.e. a transitive permutation representation.

    Coset ``0`` is the subgroup coset.

    Attributes:
        generator_names (:obj:`tuple` of :obj:`str`): One name per generator
        actions (:obj:`tuple` of :class:`dessinator.permcore.Perm`): Action of each generator on the cosets
        index (:obj:`int`): Number of cosets
    """

    generator_names: Tuple[str, ...]
    actions: Tuple[Perm, ...]
    index: int = -1
    _inverses: Tuple[Perm, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        names, actions = tuple(self.generator_names), tuple(self.actions)
        if len(names) != len(actions):
            raise PermutationError(f"{len(names)} generator names for {len(actions)} actions")
        degrees = {action.degree for action in actions}
        if len(degrees) > 1:
            raise PermutationError(f"coset table actions have different degrees {sorted(degrees)}")
        derived = degrees.pop() if degrees else max(self.index, 1)
        if self.index not in (-1, derived) or derived < 1:
            raise PermutationError(f"coset table index {self.index} does not match actions of degree {derived}")
        if actions and not is_transitive(actions):
            raise PermutationError("coset table actions must be transitive")
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "index", derived)
        object.__setattr__(self, "_inverses", tuple(action.inverse() for action in actions))

    @classmethod
    def from_rows(cls, generator_names: Sequence[str], rows: Sequence[Sequence[Optional[int]]]) -> "CosetTable":
        """Build a table from rows with columns ``x, x^-1, y, y^-1, ...``.

        Raises:
            :obj:`dessinator.exceptions.IncompleteTableError`: If an entry is undefined
        """
        complete: List[List[int]] = []
        for coset, row in enumerate(rows):
            if len(row) != 2 * len(generator_names) or any(entry is None for entry in row):
                raise IncompleteTableError(f"coset table row {coset} is incomplete: {list(row)}")
            complete.append([int(entry) for entry in row if entry is not None])
        actions = tuple(Perm(tuple(row[2 * i] for row in complete)) for i in range(len(generator_names)))
        return cls(tuple(generator_names), actions, len(rows))

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    def act(self, coset: int, letter: int) -> int:
        if letter > 0:
            return self.actions[letter - 1].images[coset]
        return self._inverses[-letter - 1].images[coset]

    def column(self, column: int) -> Tuple[int, ...]:
        """Images of all cosets under the generator (even ``column``) or inverse (odd ``column``)."""
        source = self.actions if column % 2 == 0 else self._inverses
        return source[column // 2].images

    def rows(self) -> List[List[int]]:
        columns = [self.column(c) for c in range(2 * self.generator_count)]
        return [[column[coset] for column in columns] for coset in range(self.index)]

    def key(self) -> Tuple[int, ...]:
        """Concatenated generator images, the order used to pick canonical tables."""
        return tuple(image for action in self.actions for image in action.images)


def trace(table: CosetTable, coset: int, word: Sequence[int]) -> int:
    """The coset reached from ``coset`` by reading ``word`` left to right."""
    for letter in word:
        coset = table.act(coset, letter)
    return coset


def _bfs_numbering(rows: Sequence[Sequence[int]], root: int) -> List[int]:
    order = [root]
    number = {root: 0}
    position = 0
    while position < len(order):
        for target in rows[order[position]]:
            if target not in number:
                number[target] = len(order)
                order.append(target)
        position += 1
    return order


def standardize(table: CosetTable, root: int = 0) -> CosetTable:
    """Renumber the cosets breadth-first from ``root``, scanning columns ``x, x^-1, y, y^-1, ...``.

    Args:
        table (:obj:`CosetTable`): The table
        root (:obj:`int`, optional): Coset that becomes coset ``0``. Default is ``0``.

    Returns:
        :obj:`CosetTable`: The standardized table, the stabilizer of ``root`` conjugated to coset ``0``
    """
    order = _bfs_numbering(table.rows(), root)
    number = {old: new for new, old in enumerate(order)}
    actions = []
    for action in table.actions:
        images = [0] * table.index
        for old, new in number.items():
            images[new] = number[action.images[old]]
        actions.append(Perm(tuple(images)))
    return CosetTable(table.generator_names, tuple(actions), table.index)


def canonical_table(table: CosetTable) -> CosetTable:
    """The re-rooting of ``table`` with the smallest :meth:`CosetTable.key`, one per conjugacy class."""
    best = standardize(table, 0)
    for root in range(1, table.index):
        candidate = standardize(table, root)
        if candidate.key() < best.key():
            best = candidate
    return best


class _Enumeration:
    """Mutable workspace of the HLT strategy.

    ``table[alpha][column]`` is ``None`` while undefined and ``p`` records coset coincidences,
    ``p[alpha] == alpha`` exactly for live cosets.
    """

    def __init__(self, presentation: Presentation, max_cosets: int) -> None:
        self.columns = 2 * presentation.generator_count
        self.max_cosets = max_cosets
        self.table: List[List[Optional[int]]] = [[None] * self.columns]
        self.p = [0]

    def define(self, alpha: int, column: int) -> None:
        if len(self.table) >= self.max_cosets:
            raise CosetLimitError(self.max_cosets)
        beta = len(self.table)
        self.table.append([None] * self.columns)
        self.p.append(beta)
        self.table[alpha][column] = beta
        self.table[beta][column ^ 1] = alpha

    def rep(self, k: int) -> int:
        p = self.p
        lamda = k
        rho = p[lamda]
        while rho != lamda:
            lamda = rho
            rho = p[lamda]
        mu = k
        rho = p[mu]
        while rho != lamda:
            p[mu] = lamda
            mu = rho
            rho = p[mu]
        return lamda

    def merge(self, k: int, lamda: int, queue: List[int]) -> None:
        phi, psi = self.rep(k), self.rep(lamda)
        if phi != psi:
            mu, v = min(phi, psi), max(phi, psi)
            self.p[v] = mu
            queue.append(v)

    def coincidence(self, alpha: int, beta: int) -> None:
        table = self.table
        queue: List[int] = []
        self.merge(alpha, beta, queue)
        while queue:
            gamma = queue.pop(0)
            for column in range(self.columns):
                delta = table[gamma][column]
                if delta is None:
                    continue
                table[delta][column ^ 1] = None
                mu, nu = self.rep(gamma), self.rep(delta)
                forward = table[mu][column]
                backward = table[nu][column ^ 1]
                if forward is not None:
                    self.merge(nu, forward, queue)
                elif backward is not None:
                    self.merge(mu, backward, queue)
                else:
                    table[mu][column] = nu
                    table[nu][column ^ 1] = mu

    def scan_and_fill(self, alpha: int, word: Word) -> None:
        table = self.table
        columns = [_column(letter) for letter in word]
        f = b = alpha
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][columns[i]] is not None:
                f = table[f][columns[i]]  # type: ignore[assignment]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][columns[j] ^ 1] is not None:
                b = table[b][columns[j] ^ 1]  # type: ignore[assignment]
                j -= 1
            if j < i:
                self.coincidence(f, b)
            elif j == i:
                table[f][columns[i]] = b
                table[b][columns[i] ^ 1] = f
                return
            else:
                self.define(f, columns[i])

    def run(self, relators: Sequence[Word], subgroup_gens: Sequence[Word]) -> List[List[int]]:
        for word in subgroup_gens:
            self.scan_and_fill(0, word)
        alpha = 0
        while alpha < len(self.table):
            if self.p[alpha] == alpha:
                for relator in relators:
                    self.scan_and_fill(alpha, relator)
                    if self.p[alpha] < alpha:
                        break
                if self.p[alpha] == alpha:
                    for column in range(self.columns):
                        if self.table[alpha][column] is None:
                            self.define(alpha, column)
            alpha += 1

        live = [alpha for alpha in range(len(self.table)) if self.p[alpha] == alpha]
        renumber = {old: new for new, old in enumerate(live)}
        return [[renumber[self.rep(entry)] for entry in self.table[alpha]] for alpha in live]  # type: ignore[arg-type]


def coset_enumeration(
    p: Presentation, subgroup_gens: Sequence[Sequence[int]] = (), max_cosets: int = MAX_COSETS
) -> CosetTable:
    """Todd-Coxeter coset enumeration with the HLT strategy.

    Example:

        .. code-block:: python

            p = parse_presentation("< x y | x^2 y^3 (y*x)^5 >")
            coset_enumeration(p).index  # 60

    Args:
        p (:obj:`Presentation`): The group
        subgroup_gens (:obj:`Sequence` of :obj:`Word`, optional): Generators of the subgroup. Default is the
            trivial subgroup.
        max_cosets (:obj:`int`, optional): Limit on the number of cosets ever defined. Default is
            :data:`dessinator.defaults.MAX_COSETS`.

    Returns:
        :obj:`CosetTable`: Complete, collapsed and standardized table

    Raises:
        :obj:`dessinator.exceptions.CosetLimitError`: If the enumeration does not close within ``max_cosets``
    """
    if max_cosets < 1:
        raise CosetLimitError(max_cosets)
    words = [free_reduce(word) for word in subgroup_gens]
    for word in words:
        if any(letter == 0 or abs(letter) > p.generator_count for letter in word):
            raise PresentationSyntaxError(f"subgroup generator {list(word)} uses unknown generators")
    if p.generator_count == 0:
        return CosetTable((), (), 1)

    enumeration = _Enumeration(p, max_cosets)
    rows = enumeration.run(p.relators, words)
    LOG.debug(f"Enumeration defined {len(enumeration.table)} cosets, {len(rows)} live")
    table = standardize(CosetTable.from_rows(p.generator_names, rows))

    for relator in p.relators:
        for coset in range(table.index):
            if trace(table, coset, relator) != coset:
                raise RuntimeError(f"relator {relator} does not close at coset {coset}")
    for word in words:
        if trace(table, 0, word) != 0:
            raise RuntimeError(f"subgroup generator {word} does not fix the subgroup coset")
    LOG.info(f"Coset enumeration closed with index {table.index}")
    return table


@dataclass(frozen=True)
class SchreierGenerator:
    """A table entry outside the spanning tree.

    Attributes:
        coset (:obj:`int`): Source coset
        generator (:obj:`int`): Generator index, ``0`` based
        name (:obj:`str`): ``{generator name}_{coset}``
        word (:obj:`Word`): The subgroup element ``rep(coset) x rep(coset x)^-1`` in the ambient generators
    """

    coset: int
    generator: int
    name: str
    word: Word


def _spanning_tree(table: CosetTable) -> Tuple[Set[Tuple[int, int]], List[Word]]:
    """Tree entries ``(coset, generator)`` and a representative word per coset."""
    rows = table.rows()
    representatives: List[Optional[Word]] = [None] * table.index
    representatives[0] = ()
    tree: Set[Tuple[int, int]] = set()
    order = [0]
    position = 0
    while position < len(order):
        coset = order[position]
        for column, target in enumerate(rows[coset]):
            if representatives[target] is not None:
                continue
            representatives[target] = representatives[coset] + (_letter(column),)  # type: ignore[operator]
            tree.add((coset, column // 2) if column % 2 == 0 else (target, column // 2))
            order.append(target)
        position += 1
    return tree, [r for r in representatives if r is not None]


def schreier_generators(table: CosetTable) -> List[SchreierGenerator]:
    """One Schreier generator per ``(coset, generator)`` entry outside the breadth-first spanning tree.

    A table of index ``i`` over ``n`` generators has ``i * (n - 1) + 1`` of them.
    """
    tree, representatives = _spanning_tree(table)
    found = []
    for coset in range(table.index):
        for generator, name in enumerate(table.generator_names):
            if (coset, generator) in tree:
                continue
            target = table.actions[generator].images[coset]
            word = free_reduce(representatives[coset] + (generator + 1,) + invert_word(representatives[target]))
            found.append(SchreierGenerator(coset, generator, f"{name}_{coset}", word))
    return found


def check_table(p: Presentation, table: CosetTable) -> None:
    if table.generator_names != p.generator_names:
        raise IncompleteTableError(
            f"table generators {list(table.generator_names)} differ from {list(p.generator_names)}"
        )
    for relator in p.relators:
        for coset in range(table.index):
            if trace(table, coset, relator) != coset:
                raise IncompleteTableError(
                    f"relator {format_word(relator, p.generator_names)} does not close at coset {coset}"
                )


def _cyclic_key(word: Word) -> Word:
    candidates = []
    for w in (word, invert_word(word)):
        candidates.extend(w[i:] + w[:i] for i in range(len(w)))
    return min(candidates)


def reidemeister_schreier(p: Presentation, t: CosetTable) -> Presentation:
    """Presentation of the subgroup of ``t`` on its Schreier generators.

    Every relator is rewritten at every coset, then freely and cyclically reduced, and duplicates up to cyclic
    permutation and inversion are dropped.

    Args:
        p (:obj:`Presentation`): The ambient group
        t (:obj:`CosetTable`): A complete table of ``p``

    Returns:
        :obj:`Presentation`: Generators named ``{generator}_{coset}``

    Raises:
        :obj:`dessinator.exceptions.IncompleteTableError`: If ``t`` is not a coset table of ``p``
    """
    check_table(p, t)
    generators = schreier_generators(t)
    label = {(g.coset, g.generator): index + 1 for index, g in enumerate(generators)}

    relators: List[Word] = []
    seen: Set[Word] = set()
    for relator in p.relators:
        for start in range(t.index):
            rewritten: List[int] = []
            coset = start
            for letter in relator:
                generator = abs(letter) - 1
                if letter > 0:
                    if (coset, generator) in label:
                        rewritten.append(label[coset, generator])
                    coset = t.actions[generator].images[coset]
                else:
                    coset = t.act(coset, letter)
                    if (coset, generator) in label:
                        rewritten.append(-label[coset, generator])
            reduced = cyclic_reduce(rewritten)
            if reduced and _cyclic_key(reduced) not in seen:
                seen.add(_cyclic_key(reduced))
                relators.append(reduced)
    LOG.debug(f"Reidemeister-Schreier: {len(generators)} generators, {len(relators)} relators")
    return Presentation(tuple(g.name for g in generators), tuple(relators))


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form ``U M V = D`` of an integer matrix, without ``U``.

    Attributes:
        diagonal (:obj:`tuple` of :obj:`int`): Positive diagonal entries, each dividing the next
        pivot_columns (:obj:`tuple` of :obj:`int`): Column of ``V`` belonging to each diagonal entry
        free_columns (:obj:`tuple` of :obj:`int`): Columns of ``V`` spanning the free part
        transform (:obj:`tuple` of :obj:`tuple`): ``V``, rows indexed by the original columns
    """

    diagonal: Tuple[int, ...]
    pivot_columns: Tuple[int, ...]
    free_columns: Tuple[int, ...]
    transform: Tuple[Tuple[int, ...], ...]

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        """:obj:`tuple` of :obj:`int`: Diagonal entries greater than one"""
        return tuple(d for d in self.diagonal if d > 1)

    @property
    def free_rank(self) -> int:
        return len(self.free_columns)

    def free_coordinates(self, column: int) -> Tuple[int, ...]:
        """Image of the basis vector ``column`` in the free quotient ``Z^free_rank``."""
        return tuple(self.transform[column][c] for c in self.free_columns)


def smith_normal_form(rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> SmithForm:
    """Exact Smith normal form, pivoting on the smallest nonzero absolute value.

    Rows are stored sparsely and only the column operations are recorded.

    Args:
        rows (:obj:`Sequence` of :obj:`Sequence` of :obj:`int`): The matrix
        ncols (:obj:`int`, optional): Column count, needed when there are no rows

    Returns:
        :obj:`SmithForm`: The normal form
    """
    ncols = len(rows[0]) if ncols is None else ncols
    matrix: List[Dict[int, int]] = []
    for row in rows:
        if len(row) != ncols:
            raise DessinatorError(f"row of length {len(row)} in a matrix with {ncols} columns")
        matrix.append({c: int(v) for c, v in enumerate(row) if v})
    transform: List[Dict[int, int]] = [{c: 1} for c in range(ncols)]

    active_rows = set(range(len(matrix)))
    active_cols = set(range(ncols))

    def add_row(target: int, source: int, factor: int) -> None:
        row = matrix[target]
        for c, v in matrix[source].items():
            value = row.get(c, 0) + factor * v
            if value:
                row[c] = value
            else:
                row.pop(c, None)

    def add_column(target: int, source: int, factor: int) -> None:
        for row in matrix:
            if source in row:
                value = row.get(target, 0) + factor * row[source]
                if value:
                    row[target] = value
                else:
                    row.pop(target, None)
        column = transform[target]
        for r, v in transform[source].items():
            value = column.get(r, 0) + factor * v
            if value:
                column[r] = value
            else:
                column.pop(r, None)

    def smallest() -> Optional[Tuple[int, int]]:
        best: Optional[Tuple[int, int, int]] = None
        for r in sorted(active_rows):
            for c, v in matrix[r].items():
                if c in active_cols and (best is None or (abs(v), r, c) < best):
                    best = (abs(v), r, c)
        return None if best is None else (best[1], best[2])

    diagonal: List[int] = []
    pivot_columns: List[int] = []
    while True:
        position = smallest()
        if position is None:
            break
        pr, pc = position
        while True:
            pivot = matrix[pr][pc]
            for r in sorted(active_rows - {pr}):
                if pc in matrix[r]:
                    add_row(r, pr, -(matrix[r][pc] // pivot))
            for c in sorted(c for c in matrix[pr] if c != pc and c in active_cols):
                add_column(c, pc, -(matrix[pr][c] // pivot))
            leftovers = [(abs(matrix[r][pc]), r, pc) for r in active_rows - {pr} if pc in matrix[r]]
            leftovers += [(abs(v), pr, c) for c, v in matrix[pr].items() if c != pc and c in active_cols]
            if leftovers:
                _, pr, pc = min(leftovers)
                continue
            blocker = next(
                (
                    r
                    for r in sorted(active_rows - {pr})
                    if any(v % pivot for c, v in matrix[r].items() if c in active_cols)
                ),
                None,
            )
            if blocker is None:
                break
            add_row(pr, blocker, 1)
        if matrix[pr][pc] < 0:
            matrix[pr] = {c: -v for c, v in matrix[pr].items()}
        diagonal.append(matrix[pr][pc])
        pivot_columns.append(pc)
        active_rows.discard(pr)
        active_cols.discard(pc)

    dense = tuple(tuple(transform[c].get(r, 0) for c in range(ncols)) for r in range(ncols))
    return SmithForm(tuple(diagonal), tuple(pivot_columns), tuple(sorted(active_cols)), dense)


@dataclass(frozen=True)
class Abelianization:
    """The abelianized group ``Z^free_rank + Z/d_1 + ... + Z/d_k``.

    Attributes:
        free_rank (:obj:`int`): Rank of the free part
        torsion (:obj:`tuple` of :obj:`int`): Invariant factors ``d_1 | d_2 | ...``, each greater than one
    """

    free_rank: int
    torsion: Tuple[int, ...]

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def relation_matrix(p: Presentation) -> List[List[int]]:
    """Exponent sum of every generator in every relator."""
    rows = []
    for relator in p.relators:
        row = [0] * p.generator_count
        for letter in relator:
            row[abs(letter) - 1] += 1 if letter > 0 else -1
        rows.append(row)
    return rows


def abelianization(p: Presentation) -> Abelianization:
    """Free rank and invariant factors of ``p`` made abelian."""
    form = smith_normal_form(relation_matrix(p), p.generator_count)
    return Abelianization(form.free_rank, form.invariant_factors)


class _LowIndexSearch:
    """Depth first search over standardized partial tables with relator deductions.

    A new coset is only ever created at the first undefined entry in scan order, so every complete table
    reached is standardized at coset ``0``.
    """

    def __init__(self, p: Presentation, index: int, rng: Optional[random.Random]) -> None:
        self.p = p
        self.index = index
        self.rng = rng
        self.columns = 2 * p.generator_count
        self.relators = [tuple(_column(letter) for letter in r) for r in p.relators]

    def deduce(self, rows: List[List[Optional[int]]], count: int) -> bool:
        changed = True
        while changed:
            changed = False
            for relator in self.relators:
                for alpha in range(count):
                    f = b = alpha
                    i, j = 0, len(relator) - 1
                    while i <= j and rows[f][relator[i]] is not None:
                        f = rows[f][relator[i]]  # type: ignore[assignment]
                        i += 1
                    if i > j:
                        if f != b:
                            return False
                        continue
                    while j >= i and rows[b][relator[j] ^ 1] is not None:
                        b = rows[b][relator[j] ^ 1]  # type: ignore[assignment]
                        j -= 1
                    if j < i:
                        if f != b:
                            return False
                    elif j == i:
                        column = relator[i]
                        if rows[b][column ^ 1] is not None:
                            return False
                        rows[f][column] = b
                        rows[b][column ^ 1] = f
                        changed = True
        return True

    def first_gap(self, rows: List[List[Optional[int]]], count: int) -> Optional[Tuple[int, int]]:
        for coset in range(count):
            for column in range(self.columns):
                if rows[coset][column] is None:
                    return coset, column
        return None

    def children(
        self, rows: List[List[Optional[int]]], count: int
    ) -> List[Tuple[List[List[Optional[int]]], int]]:
        gap = self.first_gap(rows, count)
        if gap is None:
            return []
        coset, column = gap
        targets = [t for t in range(count) if rows[t][column ^ 1] is None]
        if count < self.index:
            targets.append(count)
        if self.rng is not None:
            self.rng.shuffle(targets)
        found = []
        for target in targets:
            new_rows = [row[:] for row in rows]
            new_count = count
            if target == count:
                new_rows.append([None] * self.columns)
                new_count += 1
            new_rows[coset][column] = target
            new_rows[target][column ^ 1] = coset
            if self.deduce(new_rows, new_count):
                found.append((new_rows, new_count))
        return found

    def search(self, rows: List[List[Optional[int]]], count: int, out: List[CosetTable]) -> None:
        stack = [(rows, count)]
        while stack:
            current, current_count = stack.pop()
            if self.first_gap(current, current_count) is None:
                if current_count == self.index and _is_canonical(current, self.p.generator_count):
                    out.append(CosetTable.from_rows(self.p.generator_names, current))
                continue
            stack.extend(reversed(self.children(current, current_count)))

    def frontier(self, size: int) -> List[Tuple[List[List[Optional[int]]], int]]:
        """Split the search tree breadth first until it has at least ``size`` open nodes."""
        nodes: List[Tuple[List[List[Optional[int]]], int]] = [([[None] * self.columns], 1)]
        while 0 < len(nodes) < size:
            expanded = []
            progressed = False
            for rows, count in nodes:
                kids = self.children(rows, count)
                if self.first_gap(rows, count) is None:
                    expanded.append((rows, count))
                else:
                    progressed = True
                    expanded.extend(kids)
            nodes = expanded
            if not progressed:
                break
        return nodes


def _rooted_key(rows: Sequence[Sequence[int]], root: int, generator_count: int) -> List[int]:
    order = _bfs_numbering(rows, root)
    number = {old: new for new, old in enumerate(order)}
    key = []
    for generator in range(generator_count):
        key.extend(number[rows[old][2 * generator]] for old in order)
    return key


def _is_canonical(rows: Sequence[Sequence[Optional[int]]], generator_count: int) -> bool:
    """Whether no re-rooting of the complete ``rows`` has a smaller key."""
    complete = [[int(entry) for entry in row if entry is not None] for row in rows]
    key = _rooted_key(complete, 0, generator_count)
    return all(_rooted_key(complete, root, generator_count) >= key for root in range(1, len(complete)))


def _search_subtree(job: Tuple[Presentation, int, List[List[Optional[int]]], int]) -> List[CosetTable]:
    p, index, rows, count = job
    out: List[CosetTable] = []
    _LowIndexSearch(p, index, None).search(rows, count, out)
    return out


def low_index_subgroups(
    p: Presentation, index: int, seed: Optional[int] = None, workers: int = 1
) -> List[CosetTable]:
    """One table per conjugacy class of subgroups of index exactly ``index``.

    Each table is the re-rooting with the smallest :meth:`CosetTable.key` among the tables of its class,
    the result is sorted by that key.

    Args:
        p (:obj:`Presentation`): The group
        index (:obj:`int`): The index
        seed (:obj:`int`, optional): Shuffles the order in which branches are explored, the result does not
            depend on it.
        workers (:obj:`int`, optional): Number of processes. Default is ``1``.

    Returns:
        :obj:`list` of :obj:`CosetTable`: The tables
    """
    if index < 1:
        raise DessinatorError(f"index must be positive, got {index}")
    if p.generator_count == 0:
        return [CosetTable((), (), 1)] if index == 1 else []
    rng = random.Random(seed) if seed is not None else None
    search = _LowIndexSearch(p, index, rng)
    out: List[CosetTable] = []
    if workers <= 1:
        search.search([[None] * search.columns], 1, out)
    else:
        jobs = [(p, index, rows, count) for rows, count in search.frontier(8 * workers)]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for tables in executor.map(_search_subtree, jobs):
                out.extend(tables)
    out.sort(key=CosetTable.key)
    LOG.info(f"Found {len(out)} conjugacy classes of index {index} subgroups")
    return out


def table_to_json(t: CosetTable) -> Dict[str, Any]:
    """``{"index": n, "actions": {"x": "(...)", ...}}``"""
    return {
        "index": t.index,
        "actions": {name: action.cycle_notation() for name, action in zip(t.generator_names, t.actions)},
    }


def table_from_json(data: Dict[str, Any]) -> CosetTable:
    try:
        index = int(data["index"])
        actions = data["actions"]
    except (KeyError, TypeError, ValueError) as e:
        raise IncompleteTableError(f"malformed coset table: {e}") from None
    names = tuple(actions)
    perms = tuple(Perm.parse(actions[name], index) for name in names)
    return CosetTable(names, perms, index)
