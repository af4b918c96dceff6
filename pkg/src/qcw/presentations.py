"""Group presentation DSL: parsing, words, free reduction.

The textual format, bit-exact:

    file      := group+
    group     := "group" IDENT "{" "generators:" identlist ";" "relators:" wordlist? ";" "}"
    identlist := IDENT ("," IDENT)*
    wordlist  := word ("," word)*
    word      := factor+
    factor    := IDENT ("^" INT)? | "[" word "," word "]" ("^" INT)? | "(" word ")" ("^" INT)?
    INT       := "-"? [0-9]+

Whitespace is insignificant, "#" starts a line comment, and identifiers are
ASCII letters followed by ASCII alphanumerics.

Words are stored as runs (generator index, exponent), so x^16 is a single
letter.  The commutator bracket is left-normed and means

    [a, b] = a^-1 b^-1 a b

which is used consistently by every module downstream (in particular by the
collection rule of the class-2 normal form).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

__all__ = [
    "Word",
    "Presentation",
    "parse_presentation",
    "parse_file",
    "serialize_presentation",
    "free_reduce",
    "is_trivial_in_free",
    "concat",
    "inverse",
    "power",
    "commutator",
    "free_presentation",
]


@dataclass(frozen=True)
class Word:
    """A word over generator indices, as runs of (index, exponent)."""

    letters: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        """Letter count with multiplicity (sum of |exponents|)."""
        return sum(abs(e) for _, e in self.letters)

    def runs(self) -> int:
        return len(self.letters)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)


@dataclass(frozen=True)
class Presentation:
    name: str
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]

    @property
    def rank(self) -> int:
        return len(self.generator_names)

    def __post_init__(self):
        if len(set(self.generator_names)) != len(self.generator_names):
            raise ValueError("generator names must be distinct")
        for w in self.relators:
            if w.max_generator() >= len(self.generator_names):
                raise ValueError("relator references an undeclared generator")


def free_presentation(rank: int, name: str = "F") -> Presentation:
    names = tuple(f"x{i+1}" for i in range(rank))
    return Presentation(name=name, generator_names=names, relators=())


def free_reduce(w: Word) -> Word:
    """Unique reduced form: adjacent equal-generator runs merged, zeros dropped."""
    stack: list[tuple[int, int]] = []
    for g, e in w.letters:
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            merged = stack[-1][1] + e
            stack.pop()
            if merged != 0:
                stack.append((g, merged))
        else:
            stack.append((g, e))
    return Word(tuple(stack))


def is_trivial_in_free(w: Word) -> bool:
    return len(free_reduce(w).letters) == 0


def concat(*words: Word) -> Word:
    letters: list[tuple[int, int]] = []
    for w in words:
        letters.extend(w.letters)
    return free_reduce(Word(tuple(letters)))


def inverse(w: Word) -> Word:
    return Word(tuple((g, -e) for g, e in reversed(w.letters)))


def power(w: Word, k: int) -> Word:
    """w^k; single-letter words stay O(1), longer words are repeated."""
    if k == 0:
        return Word(())
    base = w if k > 0 else inverse(w)
    n = abs(k)
    if len(base.letters) == 1:
        g, e = base.letters[0]
        return free_reduce(Word(((g, e * n),)))
    return concat(*([base] * n))


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a^-1 b^-1 a b, freely reduced."""
    return concat(inverse(a), inverse(b), a, b)


# ---------------------------------------------------------------------------
# tokenizer / recursive-descent parser

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r\n]+)
      | (?P<comment>\#[^\n]*)
      | (?P<ident>[A-Za-z][A-Za-z0-9]*)
      | (?P<int>-?[0-9]+)
      | (?P<punct>[{}\[\](),;:^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "int" | "punct" | "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, linestart = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - linestart + 1)
        kind = m.lastgroup
        value = m.group()
        if kind in ("ws", "comment"):
            nl = value.count("\n")
            if nl:
                line += nl
                linestart = m.start() + value.rindex("\n") + 1
        else:
            tokens.append(_Token(kind, value, line, m.start() - linestart + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", line, len(text) - linestart + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            self.fail(f"expected {want!r}, got {tok.text!r}")
        return self.next()

    def parse_file(self) -> list[Presentation]:
        groups = [self.parse_group()]
        while self.peek().kind != "eof":
            groups.append(self.parse_group())
        return groups

    def parse_group(self) -> Presentation:
        self.expect("ident", "group")
        name = self.expect("ident").text
        self.expect("punct", "{")
        self.expect("ident", "generators")
        self.expect("punct", ":")
        if self.peek().kind == "punct" and self.peek().text == ";":
            self.fail("empty generator list")
        gens = [self.expect("ident").text]
        while self.peek().text == ",":
            self.next()
            gens.append(self.expect("ident").text)
        if len(set(gens)) != len(gens):
            self.fail(f"duplicate generator name in group {name!r}")
        self.expect("punct", ";")
        index = {g: i for i, g in enumerate(gens)}
        self.expect("ident", "relators")
        self.expect("punct", ":")
        relators: list[Word] = []
        if not (self.peek().kind == "punct" and self.peek().text == ";"):
            relators.append(self.parse_word(index))
            while self.peek().text == ",":
                self.next()
                relators.append(self.parse_word(index))
        self.expect("punct", ";")
        self.expect("punct", "}")
        return Presentation(name=name, generator_names=tuple(gens), relators=tuple(relators))

    def parse_word(self, index: dict[str, int]) -> Word:
        factors = [self.parse_factor(index)]
        while True:
            tok = self.peek()
            if tok.kind == "ident" or (tok.kind == "punct" and tok.text in "[("):
                factors.append(self.parse_factor(index))
            else:
                break
        return concat(*factors)

    def parse_factor(self, index: dict[str, int]) -> Word:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            if tok.text not in index:
                raise ParseError(f"undeclared generator {tok.text!r}", tok.line, tok.col)
            base = Word(((index[tok.text], 1),))
        elif tok.kind == "punct" and tok.text == "[":
            self.next()
            left = self.parse_word(index)
            self.expect("punct", ",")
            right = self.parse_word(index)
            self.expect("punct", "]")
            base = commutator(left, right)
        elif tok.kind == "punct" and tok.text == "(":
            self.next()
            base = self.parse_word(index)
            self.expect("punct", ")")
        else:
            self.fail(f"expected a generator, '[' or '(', got {tok.text!r}")
        if self.peek().kind == "punct" and self.peek().text == "^":
            self.next()
            exp = int(self.expect("int").text)
            return power(base, exp)
        return base


def parse_file(text: str) -> list[Presentation]:
    """Parse a file of one or more group blocks."""
    return _Parser(text).parse_file()


def parse_presentation(text: str) -> Presentation:
    """Parse text containing exactly one group block."""
    groups = parse_file(text)
    if len(groups) != 1:
        raise ParseError(f"expected exactly one group, found {len(groups)}", 1, 1)
    return groups[0]


def serialize_word(w: Word, names: tuple[str, ...]) -> str:
    if not w.letters:
        # the grammar has no empty word; x x^-1 is the canonical spelling
        return f"{names[0]} {names[0]}^-1" if names else "()"
    parts = []
    for g, e in w.letters:
        parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
    return " ".join(parts)


def serialize_presentation(pres: Presentation) -> str:
    """Emit the DSL text; parse(serialize(p)) == p on the abstract syntax."""
    gens = ", ".join(pres.generator_names)
    rels = ", ".join(serialize_word(w, pres.generator_names) for w in pres.relators)
    return f"group {pres.name} {{ generators: {gens}; relators: {rels}; }}"
