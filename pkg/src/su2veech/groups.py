"""Free-group words, finite presentations, substitutions, and Fox calculus.

Words are tuples of (generator name, sign) with sign in {+1, -1}, kept freely
reduced.  Single-character generator names can be written compactly in word
literals (lowercase = generator, uppercase = its inverse); multi-character
names use explicit ``^-1`` / ``^k`` exponents.

``builtin`` serves the presentation/substitution datasets used throughout:
the 9-generator Platypus group, the genus-3 surface group, the pillowcase
orbifold groups, the (6,6,6,2) orbifold group, and the covering / Veech-group
substitution tables between them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

Letter = tuple[str, int]
Word = tuple[Letter, ...]


def reduce_word(letters: Iterable[Letter]) -> Word:
    """Free reduction: cancel adjacent g g^{-1} pairs."""
    out: list[Letter] = []
    for (g, e) in letters:
        if e not in (1, -1):
            raise ValueError(f"letter exponent must be +-1, got {e}")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def word_mul(*words: Word) -> Word:
    out: list[Letter] = []
    for w in words:
        for letter in w:
            if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
                out.pop()
            else:
                out.append(letter)
    return tuple(out)


def word_inverse(w: Word) -> Word:
    return tuple((g, -e) for (g, e) in reversed(w))


def word_power(w: Word, n: int) -> Word:
    if n < 0:
        return word_power(word_inverse(w), -n)
    out: Word = ()
    for _ in range(n):
        out = word_mul(out, w)
    return out


def w(text: str) -> Word:
    """Word literal.

    Tokens are whitespace separated.  A single-letter token contributes that
    generator (uppercase means inverse).  Multi-character tokens may carry an
    integer exponent: ``p1^-3``.  A run of single-letter tokens may also be
    written without spaces: ``"D f E a B c"`` == ``"DfEaBc"``.
    """
    letters: list[Letter] = []
    for token in text.split():
        name, _, exp = token.partition("^")
        k = int(exp) if exp else 1
        if _is_multichar_name(name):
            sign = 1 if k >= 0 else -1
            letters.extend([(name, sign)] * abs(k))
        elif len(name) == 1 and name.isalpha():
            base = name.lower()
            sign = 1 if name.islower() else -1
            if k < 0:
                sign, k = -sign, -k
            letters.extend([(base, sign)] * k)
        else:
            # run of single letters written without spaces
            if exp:
                raise ValueError(f"exponent on a letter run: {token!r}")
            for ch in name:
                if not ch.isalpha():
                    raise ValueError(f"bad letter {ch!r} in {token!r}")
                letters.append((ch.lower(), 1 if ch.islower() else -1))
    return reduce_word(letters)


def _is_multichar_name(name: str) -> bool:
    # multi-character generator names contain a digit or underscore
    return any(ch.isdigit() or ch == "_" for ch in name)


def word_str(word: Word) -> str:
    if not word:
        return "1"
    parts = []
    for (g, e) in word:
        if len(g) == 1:
            parts.append(g if e == 1 else g.upper())
        else:
            parts.append(g if e == 1 else f"{g}^-1")
    sep = "" if all(len(g) == 1 for g, _ in word) else " "
    return sep.join(parts)


# ---------------------------------------------------------------------------
# Presentations and substitutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    name: str = ""

    def __post_init__(self):
        for r in self.relators:
            for (g, _) in r:
                if g not in self.generators:
                    raise ValueError(f"relator uses unknown generator {g!r}")

    def gen_index(self, g: str) -> int:
        return self.generators.index(g)


@dataclass(frozen=True)
class Substitution:
    """Generator-to-word map from a source alphabet into a target alphabet."""

    source: tuple[str, ...]
    target: tuple[str, ...]
    images: dict[str, Word] = field(hash=False)
    name: str = ""

    def __post_init__(self):
        for g in self.source:
            if g not in self.images:
                raise ValueError(f"substitution is partial: no image for {g!r}")
        for g, img in self.images.items():
            for (h, _) in img:
                if h not in self.target:
                    raise ValueError(f"image of {g!r} uses unknown letter {h!r}")

    def image(self, g: str) -> Word:
        return self.images[g]

    def apply(self, word: Word) -> Word:
        out: Word = ()
        for (g, e) in word:
            if g not in self.images:
                raise ValueError(f"letter {g!r} not in source alphabet")
            img = self.images[g]
            out = word_mul(out, img if e == 1 else word_inverse(img))
        return out

    def __call__(self, word: Word) -> Word:
        return self.apply(word)

    @staticmethod
    def identity(alphabet: tuple[str, ...]) -> "Substitution":
        return Substitution(alphabet, alphabet,
                            {g: ((g, 1),) for g in alphabet}, name="id")


def compose(outer: Substitution, inner: Substitution) -> Substitution:
    """outer after inner: g -> outer(inner(g))."""
    if inner.target != outer.source:
        raise ValueError("alphabet mismatch in composition")
    images = {g: outer.apply(inner.image(g)) for g in inner.source}
    return Substitution(inner.source, outer.target, images,
                        name=f"{outer.name}*{inner.name}")


def compose_power(s: Substitution, n: int) -> Substitution:
    if s.source != s.target:
        raise ValueError("power of a non-endomorphism")
    out = Substitution.identity(s.source)
    for _ in range(n):
        out = compose(s, out)
    return out


# ---------------------------------------------------------------------------
# Fox calculus
# ---------------------------------------------------------------------------

FoxSum = dict[Word, int]  # formal Z-linear combination of words


def fox_derivative(word: Word, gen: str) -> FoxSum:
    """Free derivative d(word)/d(gen).

    Rules: d(uv) = du + u dv, dg/dg = 1, d(g^-1)/dg = -g^-1, dh/dg = 0.
    """
    out: FoxSum = {}
    prefix: Word = ()
    for (g, e) in word:
        if g == gen:
            if e == 1:
                key = prefix
                coeff = 1
            else:
                key = word_mul(prefix, ((g, -1),))
                coeff = -1
            out[key] = out.get(key, 0) + coeff
            if out[key] == 0:
                del out[key]
        prefix = word_mul(prefix, ((g, e),))
    return out


def fox_sum_str(fs: FoxSum) -> str:
    if not fs:
        return "0"
    parts = []
    for word, c in sorted(fs.items()):
        cs = {1: "", -1: "-"}.get(c, f"{c}*")
        parts.append(f"{cs}{word_str(word)}")
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Presentation file parser
# ---------------------------------------------------------------------------

class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


def parse_presentation(text: str, name: str = "") -> Presentation:
    """Parse the ``gens: ... ; rels: <word> ; <word> ; ...`` format."""
    pos = [0]
    line = [1]
    col = [1]

    def advance(n: int):
        for ch in text[pos[0]: pos[0] + n]:
            if ch == "\n":
                line[0] += 1
                col[0] = 1
            else:
                col[0] += 1
        pos[0] += n

    def skip_ws():
        while pos[0] < len(text) and text[pos[0]].isspace():
            advance(1)

    def expect(token: str):
        skip_ws()
        if not text[pos[0]:].startswith(token):
            raise PresentationSyntaxError(f"expected {token!r}", line[0], col[0])
        advance(len(token))

    def read_until(stop: str) -> str:
        skip_ws()
        start = pos[0]
        while pos[0] < len(text) and text[pos[0]] != stop:
            advance(1)
        if pos[0] >= len(text):
            raise PresentationSyntaxError(f"expected {stop!r}", line[0], col[0])
        chunk = text[start: pos[0]]
        advance(1)  # consume the stop character
        return chunk

    expect("gens:")
    gens = tuple(read_until(";").split())
    if not gens:
        raise PresentationSyntaxError("empty generator list", line[0], col[0])
    expect("rels:")
    relators = []
    while True:
        skip_ws()
        if pos[0] >= len(text):
            break
        chunk_line, chunk_col = line[0], col[0]
        chunk = read_until(";")
        if not chunk.strip():
            continue
        word = w(chunk)
        for (g, _) in word:
            if g not in gens:
                raise PresentationSyntaxError(
                    f"unknown generator {g!r} in relator", chunk_line, chunk_col)
        relators.append(word)
    return Presentation(gens, tuple(relators), name=name)


# ---------------------------------------------------------------------------
# Built-in datasets
# ---------------------------------------------------------------------------

def _plat() -> Presentation:
    # 9-generator presentation of the genus-4 Platypus surface group
    return Presentation(
        tuple("abcdefghi"),
        (w("D f E a B c"),
         w("i h g a c f G I H D E B")),
        name="plat",
    )


def _sigma3() -> Presentation:
    rel = w("x1 x2 x1^-1 x2^-1 x3 x4 x3^-1 x4^-1 x5 x6 x5^-1 x6^-1")
    return Presentation(("x1", "x2", "x3", "x4", "x5", "x6"), (rel,), name="sigma3")


def _torus2222() -> Presentation:
    gens = ("m1", "m2", "a1", "a2", "a3", "a4")
    rels = (
        w("a1^2"), w("a2^2"), w("a3^2"), w("a4^2"),
        w("m1 m2 m1^-1 m2^-1 a1 a2 a3 a4"),
    )
    return Presentation(gens, rels, name="torus2222")


def _sphere4444() -> Presentation:
    gens = ("g1", "g2", "g3", "g4")
    rels = (w("g1 g2 g3 g4"), w("g1^4"), w("g2^4"), w("g3^4"), w("g4^4"))
    return Presentation(gens, rels, name="sphere4444")


def _gamma6662() -> Presentation:
    gens = ("p1", "p2", "p3", "p4")
    rels = (w("p1 p2 p3 p4"), w("p1^6"), w("p2^6"), w("p3^6"), w("p4^2"))
    return Presentation(gens, rels, name="gamma6662")


def _phi_plat() -> Substitution:
    images = {
        "a": w("p1 p2^-1"),
        "b": w("p1^-1 p2"),
        "c": w("p1^-1 p2^-1 p1^2"),
        "d": w("p1^-3 p2 p1^2"),
        "e": w("p1 p2 p1^-2"),
        "f": w("p1^3 p2^-1 p1^-2"),
        "g": w("p1^-2 p3^-3 p1^-1"),
        "h": w("p1^-2 p3 p4 p3^2 p1^2"),
        "i": w("p1^-2 p3^-1 p4 p3^-2 p1^2"),
    }
    return Substitution(tuple("abcdefghi"), ("p1", "p2", "p3", "p4"),
                        images, name="phi_plat")


def _t2_plat() -> Substitution:
    images = {
        "a": w("c"), "b": w("d"), "c": w("f"),
        "d": w("e"), "e": w("b"), "f": w("a"),
        "g": w("d g a"),
        "h": w("d h D"),
        "i": w("d i D"),
    }
    alpha = tuple("abcdefghi")
    return Substitution(alpha, alpha, images, name="t2")


# vertical-path words used to expand the square of the second parabolic
ZETA_PATHS: dict[str, Word] = {
    "zeta1'zeta2": w("E B i h g"),
    "zeta1'zeta1": w("E B i h i g F"),
    "zeta0'zeta1": w("i g F"),
}


def _s2_plat() -> Substitution:
    images = {
        "a": w("E B i h g a B i g"),
        "b": w("B i h i g F C i g"),
        "c": w("B i h i g F D E B i h g a"),
        "d": w("i g F E B i h g a"),
        "e": w("E B i h g B i h i g F"),
        "f": w("i g E B i h i g F"),
        "g": w("B i h i g F C A G H I b e d i g F"),
        "h": w("B i g B i h i g F C A G H I b e d h i g F "
               "D E B i h g a c f G I H I b"),
        "i": w("B i h i g F C i g E B i h I b"),
    }
    alpha = tuple("abcdefghi")
    return Substitution(alpha, alpha, images, name="s2")


def _sigma3_to_torus() -> Substitution:
    # x^y denotes y x y^-1 here
    images = {
        "x1": w("a1 a2"),
        "x2": w("a3 a2"),
        "x3": w("a4 m1 a4^-1"),
        "x4": w("a4 m2 a4^-1"),
        "x5": w("m1"),
        "x6": w("m2"),
    }
    return Substitution(("x1", "x2", "x3", "x4", "x5", "x6"),
                        ("m1", "m2", "a1", "a2", "a3", "a4"),
                        images, name="sigma3_to_torus")


def _torus_to_sphere() -> Substitution:
    images = {
        "m1": w("g1 g2"),
        "m2": w("g3 g2"),
        "a1": w("g3^2"),
        "a2": w("g3^-1 g2 g3 g3^-1 g2 g3"),
        "a3": w("g3^-1 g2 g2 g2^-1 g3 g3^-1 g2 g2 g2^-1 g3"),
        "a4": w("g4^2"),
    }
    return Substitution(("m1", "m2", "a1", "a2", "a3", "a4"),
                        ("g1", "g2", "g3", "g4"),
                        images, name="torus_to_sphere")


_BUILTINS = {
    "plat": _plat,
    "sigma3": _sigma3,
    "torus2222": _torus2222,
    "sphere4444": _sphere4444,
    "gamma6662": _gamma6662,
    "phi_plat": _phi_plat,
    "t2_plat": _t2_plat,
    "s2_plat": _s2_plat,
    "sigma3_to_torus": _sigma3_to_torus,
    "torus_to_sphere": _torus_to_sphere,
}


def builtin(name: str) -> Presentation | Substitution:
    """Fetch a built-in presentation or substitution by name."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; available: {sorted(_BUILTINS)}")
    return factory()


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)
