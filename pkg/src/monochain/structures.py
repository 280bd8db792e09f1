"""Finite relational structures over domains {0..n-1}.

Representation, the line-oriented structure file format, induced
substructures, isomorphism search, canonical codes and age profiles.
All values are immutable and all operations are pure, so everything in
this module is safe to call concurrently.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import (
    CapExceededError,
    SignatureMismatchError,
    StructureParseError,
    ValidationError,
)

#: Default size cap for canonical-code computation (brute force over n!).
CODE_SIZE_CAP = 10

#: Default caps for enumerating all structures of a given size up to isomorphism.
ENUM_MAX_LABELED = 1 << 20
ENUM_MAX_CLASSES = 4096

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Signature:
    """Ordered relation symbols with arities.

    Names are identifiers, except that "<" is allowed and marks the
    distinguished order symbol that unlocks the infix formula syntax.
    """

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        for name, arity in self.symbols:
            if name != "<" and not _NAME_RE.match(name):
                raise ValidationError(f"bad symbol name {name!r}")
            if arity < 1:
                raise ValidationError(f"symbol {name}: arity must be >= 1, got {arity}")
            if name in seen:
                raise ValidationError(f"duplicate symbol name {name!r}")
            seen.add(name)

    @classmethod
    def of(cls, *symbols: tuple[str, int]) -> "Signature":
        return cls(tuple(symbols))

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def arity(self, name: str) -> int:
        for sym, ar in self.symbols:
            if sym == name:
                return ar
        raise SignatureMismatchError(f"unknown symbol {name!r}")

    def index(self, name: str) -> int:
        for i, (sym, _) in enumerate(self.symbols):
            if sym == name:
                return i
        raise SignatureMismatchError(f"unknown symbol {name!r}")

    def __contains__(self, name: object) -> bool:
        return any(sym == name for sym, _ in self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)


def parse_signature_text(text: str) -> Signature:
    """Parse a whitespace-separated list of name/arity specs, e.g. ``R/2 S/3``."""
    symbols = []
    for spec in text.split():
        m = re.match(r"(.+)/(\d+)\Z", spec)
        if m is None:
            raise ValidationError(f"bad symbol spec {spec!r}, expected name/arity")
        symbols.append((m.group(1), int(m.group(2))))
    return Signature(tuple(symbols))


@dataclass(frozen=True)
class Structure:
    """A finite relational structure: domain {0..size-1} plus one tuple
    set per symbol, aligned with the signature's symbol order."""

    signature: Signature
    size: int
    extensions: tuple[frozenset[tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValidationError("size must be >= 0")
        if len(self.extensions) != len(self.signature.symbols):
            raise ValidationError("one extension required per signature symbol")
        for (name, arity), ext in zip(self.signature.symbols, self.extensions):
            for t in ext:
                if len(t) != arity:
                    raise ValidationError(
                        f"symbol {name}: tuple {t} has length {len(t)}, arity is {arity}"
                    )
                for e in t:
                    if not (0 <= e < self.size):
                        raise ValidationError(
                            f"symbol {name}: element {e} outside domain 0..{self.size - 1}"
                        )

    @classmethod
    def of(
        cls,
        signature: Signature,
        size: int,
        tuples: Mapping[str, Iterable[tuple[int, ...]]] | None = None,
    ) -> "Structure":
        tuples = dict(tuples or {})
        for name in tuples:
            if name not in signature:
                raise ValidationError(f"extension given for unknown symbol {name!r}")
        exts = tuple(
            frozenset(tuple(t) for t in tuples.get(name, ()))
            for name, _ in signature.symbols
        )
        return cls(signature, size, exts)

    def extension(self, name: str) -> frozenset[tuple[int, ...]]:
        return self.extensions[self.signature.index(name)]

    def to_report(self) -> dict:
        return {
            "signature": [[name, arity] for name, arity in self.signature.symbols],
            "size": self.size,
            "extensions": {
                name: sorted(map(list, ext))
                for (name, _), ext in zip(self.signature.symbols, self.extensions)
            },
        }


@dataclass(frozen=True)
class Bijection:
    """A finite injective map, stored as (source, target) pairs sorted by source."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))
        sources = [s for s, _ in self.pairs]
        targets = [t for _, t in self.pairs]
        if len(set(sources)) != len(sources):
            raise ValidationError("duplicate source in bijection")
        if len(set(targets)) != len(targets):
            raise ValidationError("bijection is not injective")

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> "Bijection":
        return cls(tuple(mapping.items()))

    def to_mapping(self) -> dict[int, int]:
        return dict(self.pairs)

    def apply(self, x: int) -> int:
        for s, t in self.pairs:
            if s == x:
                return t
        raise ValidationError(f"{x} not in bijection domain")

    def inverse(self) -> "Bijection":
        return Bijection(tuple((t, s) for s, t in self.pairs))

    def is_total_permutation(self, n: int) -> bool:
        return (
            len(self.pairs) == n
            and {s for s, _ in self.pairs} == set(range(n))
            and {t for _, t in self.pairs} == set(range(n))
        )


@dataclass(frozen=True)
class CanonicalCode:
    """Deterministic structure encoding: equal codes iff isomorphic."""

    payload: bytes

    def hex_digest(self) -> str:
        return hashlib.sha256(self.payload).hexdigest()[:16]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"CanonicalCode({self.hex_digest()})"


# ---------------------------------------------------------------------------
# structure file format


def parse_structure_with_names(text: str) -> tuple[Structure, tuple[str, ...]]:
    """Parse a structure file; also return the external element names.

    Format (UTF-8, line oriented, ``#`` starts a comment):

        signature R/2 S/3
        domain 4            # or:  domain a b c d
        R: (0,1) (1,2)
        S: (0,1,2)

    With a numeric ``domain n`` line elements are the integers 0..n-1 and
    the returned name tuple is just their decimal spellings.  With a named
    domain the elements are relabelled to 0..n-1 in the listed order.
    """
    signature: Signature | None = None
    size: int | None = None
    names: tuple[str, ...] = ()
    name_to_index: dict[str, int] = {}
    tuples: dict[str, set[tuple[int, ...]]] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if signature is None:
            if not line.startswith("signature"):
                raise StructureParseError("expected 'signature' line", lineno)
            try:
                signature = parse_signature_text(line[len("signature"):])
            except ValidationError as exc:
                raise StructureParseError(str(exc), lineno) from exc
            continue
        if size is None:
            parts = line.split()
            if parts[0] != "domain" or len(parts) < 2:
                raise StructureParseError("expected 'domain' line", lineno)
            body = parts[1:]
            if len(body) == 1 and body[0].isdigit():
                size = int(body[0])
                names = tuple(str(i) for i in range(size))
            else:
                for name in body:
                    if not _NAME_RE.match(name):
                        raise StructureParseError(f"bad element name {name!r}", lineno)
                    if name in name_to_index:
                        raise StructureParseError(f"duplicate element name {name!r}", lineno)
                    name_to_index[name] = len(name_to_index)
                size = len(name_to_index)
                names = tuple(name_to_index)
            continue
        if ":" not in line:
            raise StructureParseError("expected '<symbol>: (tuples...)' line", lineno)
        sym, _, rest = line.partition(":")
        sym = sym.strip()
        if sym not in signature:
            raise StructureParseError(f"unknown symbol {sym!r}", lineno)
        arity = signature.arity(sym)
        stripped = rest
        for m in re.finditer(r"\(([^()]*)\)", rest):
            entries = [e.strip() for e in m.group(1).split(",")] if m.group(1).strip() else []
            t = []
            for entry in entries:
                if name_to_index:
                    if entry not in name_to_index:
                        raise StructureParseError(f"unknown element {entry!r}", lineno)
                    t.append(name_to_index[entry])
                else:
                    if not entry.isdigit():
                        raise StructureParseError(f"bad element {entry!r}", lineno)
                    e = int(entry)
                    if e >= size:
                        raise StructureParseError(f"element {e} outside domain 0..{size - 1}", lineno)
                    t.append(e)
            if len(t) != arity:
                raise StructureParseError(
                    f"symbol {sym}: tuple has {len(t)} entries, arity is {arity}", lineno
                )
            tuples.setdefault(sym, set()).add(tuple(t))
            stripped = stripped.replace(m.group(0), "", 1)
        if stripped.strip():
            raise StructureParseError(f"bad tuple syntax near {stripped.strip()!r}", lineno)

    if signature is None:
        raise StructureParseError("missing 'signature' line")
    if size is None:
        raise StructureParseError("missing 'domain' line")
    return Structure.of(signature, size, tuples), names


def parse_structure(text: str) -> Structure:
    """Parse a structure file, erasing external element names."""
    return parse_structure_with_names(text)[0]


def render_structure(structure: Structure, names: tuple[str, ...] | None = None) -> str:
    """Render a structure in the file format accepted by :func:`parse_structure`."""
    if names is not None and len(names) != structure.size:
        raise ValidationError("one name required per element")
    lines = [
        "signature " + " ".join(f"{n}/{a}" for n, a in structure.signature.symbols),
        "domain " + (" ".join(names) if names is not None else str(structure.size)),
    ]
    label = (lambda e: names[e]) if names is not None else str
    for (name, _), ext in zip(structure.signature.symbols, structure.extensions):
        rendered = " ".join("(" + ",".join(label(e) for e in t) + ")" for t in sorted(ext))
        lines.append(f"{name}: {rendered}".rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# substructures, isomorphism, canonical codes, ages


def induced_substructure(structure: Structure, subset: Iterable[int]) -> Structure:
    """Restrict to a nonempty subset of the domain, relabelled to 0..|H|-1
    in ascending element order."""
    elements = sorted(set(subset))
    if not elements:
        raise ValidationError("subset must be nonempty")
    for e in elements:
        if not (0 <= e < structure.size):
            raise ValidationError(f"element {e} outside domain 0..{structure.size - 1}")
    relabel = {e: i for i, e in enumerate(elements)}
    keep = set(elements)
    exts = tuple(
        frozenset(tuple(relabel[e] for e in t) for t in ext if keep.issuperset(t))
        for ext in structure.extensions
    )
    return Structure(structure.signature, len(elements), exts)


def _vertex_profile(structure: Structure) -> list[tuple[tuple[int, int, int], ...]]:
    """Per-vertex incidence counts (symbol, position, count): an
    isomorphism invariant used to prune the backtracking search."""
    profiles: list[dict[tuple[int, int], int]] = [dict() for _ in range(structure.size)]
    for s, ext in enumerate(structure.extensions):
        for t in ext:
            for pos, e in enumerate(t):
                key = (s, pos)
                profiles[e][key] = profiles[e].get(key, 0) + 1
    return [tuple(sorted((s, p, c) for (s, p), c in prof.items())) for prof in profiles]


def find_isomorphism(a: Structure, b: Structure) -> Bijection | None:
    """Search for an isomorphism from ``a`` onto ``b``.

    Returns the lexicographically least witness (ordered by the image
    tuple of 0,1,2,...) or None.  Backtracking over vertex assignments
    with incidence-profile pruning.
    """
    if a.signature != b.signature:
        raise SignatureMismatchError("structures have different signatures")
    n = a.size
    if n != b.size:
        return None
    for ea, eb in zip(a.extensions, b.extensions):
        if len(ea) != len(eb):
            return None
    prof_a = _vertex_profile(a)
    prof_b = _vertex_profile(b)
    if sorted(prof_a) != sorted(prof_b):
        return None
    if n == 0:
        return Bijection(())

    image: list[int | None] = [None] * n
    used = [False] * n
    preimage: dict[int, int] = {}

    def consistent(v: int) -> bool:
        # Check every tuple that involves v and is fully assigned, both ways.
        for ext_a, ext_b in zip(a.extensions, b.extensions):
            for t in ext_a:
                if v in t and all(image[e] is not None for e in t):
                    if tuple(image[e] for e in t) not in ext_b:
                        return False
            w = image[v]
            for t in ext_b:
                if w in t and all(e in preimage for e in t):
                    if tuple(preimage[e] for e in t) not in ext_a:
                        return False
        return True

    def backtrack(v: int) -> bool:
        if v == n:
            return True
        for w in range(n):
            if used[w] or prof_a[v] != prof_b[w]:
                continue
            image[v] = w
            used[w] = True
            preimage[w] = v
            if consistent(v) and backtrack(v + 1):
                return True
            image[v] = None
            used[w] = False
            del preimage[w]
        return False

    if backtrack(0):
        return Bijection(tuple((v, image[v]) for v in range(n)))  # type: ignore[arg-type]
    return None


@lru_cache(maxsize=32)
def _all_permutations(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=65536)
def _certificate(structure: Structure) -> tuple:
    best = None
    for perm in _all_permutations(structure.size):
        cert = tuple(
            tuple(sorted(tuple(perm[e] for e in t) for t in ext))
            for ext in structure.extensions
        )
        if best is None or cert < best:
            best = cert
    return best  # type: ignore[return-value]


def canonical_code(structure: Structure, cap: int = CODE_SIZE_CAP) -> CanonicalCode:
    """Minimal relabelling certificate over all domain permutations,
    serialized together with size and signature.  Equal codes iff the
    structures are isomorphic."""
    if structure.size > cap:
        raise CapExceededError(
            f"canonical_code: size {structure.size} exceeds cap {cap}"
        )
    payload = repr(
        (structure.size, structure.signature.symbols, _certificate(structure))
    ).encode("utf-8")
    return CanonicalCode(payload)


def age(structure: Structure, k: int) -> dict[int, frozenset[CanonicalCode]]:
    """Isomorphism classes of m-element induced substructures, for each m <= k."""
    if not (1 <= k <= structure.size):
        raise ValidationError(f"k must be in 1..{structure.size}, got {k}")
    out: dict[int, frozenset[CanonicalCode]] = {}
    for m in range(1, k + 1):
        codes = {
            canonical_code(induced_substructure(structure, subset))
            for subset in itertools.combinations(range(structure.size), m)
        }
        out[m] = frozenset(codes)
    return out


# ---------------------------------------------------------------------------
# exhaustive enumeration up to isomorphism


def enumerate_structures(
    signature: Signature,
    size: int,
    max_labeled: int = ENUM_MAX_LABELED,
    max_classes: int = ENUM_MAX_CLASSES,
) -> tuple[Structure, ...]:
    """All structures with the given signature and size, one representative
    per isomorphism class, sorted by canonical code."""
    if size < 0:
        raise ValidationError("size must be >= 0")
    total_bits = sum(size**arity for _, arity in signature.symbols)
    if 2**total_bits > max_labeled:
        raise CapExceededError(
            f"enumerate_structures: 2^{total_bits} labeled structures exceed cap {max_labeled}"
        )
    spaces = [
        tuple(itertools.product(range(size), repeat=arity))
        for _, arity in signature.symbols
    ]
    seen: dict[CanonicalCode, Structure] = {}
    for masks in itertools.product(*(range(1 << len(sp)) for sp in spaces)):
        exts = tuple(
            frozenset(sp[i] for i in range(len(sp)) if mask >> i & 1)
            for sp, mask in zip(spaces, masks)
        )
        candidate = Structure(signature, size, exts)
        code = canonical_code(candidate)
        if code not in seen:
            if len(seen) >= max_classes:
                raise CapExceededError(
                    f"enumerate_structures: more than {max_classes} isomorphism classes"
                )
            seen[code] = candidate
    return tuple(seen[c] for c in sorted(seen, key=lambda c: c.payload))


def relabel_structure(structure: Structure, perm: Iterable[int]) -> Structure:
    """Apply a domain permutation (perm[old] = new) to every extension."""
    perm = tuple(perm)
    if sorted(perm) != list(range(structure.size)):
        raise ValidationError("not a permutation of the domain")
    exts = tuple(
        frozenset(tuple(perm[e] for e in t) for t in ext)
        for ext in structure.extensions
    )
    return Structure(structure.signature, structure.size, exts)
