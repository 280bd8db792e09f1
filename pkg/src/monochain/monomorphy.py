"""Monomorphy decisions, reduct checks, and the empirical threshold sweep.

A structure is k-monomorphic when all its k-element induced substructures
are pairwise isomorphic, and monomorphic when that holds for every k up
to its size.  The sweep probes, over single-symbol structures up to a
size bound, for the smallest m such that m-monomorphy (or monomorphy up
to m, in the cumulative variant) already forces full monomorphy.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceededError, ValidationError
from .structures import (
    Signature,
    Structure,
    canonical_code,
    find_isomorphism,
    induced_substructure,
    render_structure,
)

#: Reduct checks enumerate all nonempty sub-signatures; cap the symbol count.
REDUCT_SYMBOL_CAP = 4

#: (arity -> max size) for which the sweep enumerates exhaustively.
SWEEP_EXHAUSTIVE_CAPS = {1: 12, 2: 5}

SWEEP_DEFAULT_SAMPLES = 500


def is_k_monomorphic(
    structure: Structure, k: int
) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Whether all k-element substructures are pairwise isomorphic.

    By transitivity it suffices to compare every subset against the
    lexicographically first one; the witness on failure is the
    lexicographically least offending subset pair.
    """
    if not (1 <= k <= structure.size):
        raise ValidationError(f"k must be in 1..{structure.size}, got {k}")
    subsets = itertools.combinations(range(structure.size), k)
    first = next(subsets)
    base = induced_substructure(structure, first)
    for subset in subsets:
        if find_isomorphism(base, induced_substructure(structure, subset)) is None:
            return False, (first, subset)
    return True, None


@dataclass(frozen=True)
class SizeVerdict:
    k: int
    monomorphic: bool
    class_count: int
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None

    def to_report(self) -> dict:
        return {
            "k": self.k,
            "monomorphic": self.monomorphic,
            "class_count": self.class_count,
            "witness": [list(self.witness[0]), list(self.witness[1])] if self.witness else None,
        }


@dataclass(frozen=True)
class MonomorphyReport:
    size: int
    entries: tuple[SizeVerdict, ...]

    @property
    def monomorphic(self) -> bool:
        return all(e.monomorphic for e in self.entries)

    def entry(self, k: int) -> SizeVerdict:
        return self.entries[k - 1]

    def first_failure(self) -> int | None:
        for e in self.entries:
            if not e.monomorphic:
                return e.k
        return None

    def to_report(self) -> dict:
        return {
            "size": self.size,
            "monomorphic": self.monomorphic,
            "per_k": [e.to_report() for e in self.entries],
        }


def is_monomorphic(structure: Structure) -> MonomorphyReport:
    """Verdicts, class counts, and witnesses for every k in 1..size."""
    entries = []
    for k in range(1, structure.size + 1):
        reps: list[Structure] = []
        witness = None
        first_subset: tuple[int, ...] | None = None
        for subset in itertools.combinations(range(structure.size), k):
            sub = induced_substructure(structure, subset)
            if not reps:
                first_subset = subset
                reps.append(sub)
                continue
            matched = None
            for idx, rep in enumerate(reps):
                if find_isomorphism(rep, sub) is not None:
                    matched = idx
                    break
            if matched is None:
                reps.append(sub)
            if witness is None and matched != 0:
                witness = (first_subset, subset)
        entries.append(SizeVerdict(k, witness is None, len(reps), witness))
    return MonomorphyReport(structure.size, tuple(entries))


@dataclass(frozen=True)
class ReductReport:
    """Per-reduct monomorphy verdicts.

    Monomorphy of the full structure always implies monomorphy of every
    reduct (restricting a family of isomorphic substructures stays
    isomorphic), so agreement is a consistency check; the converse can
    fail, which is not a contradiction.
    """

    monomorphic: bool
    reduct_verdicts: tuple[tuple[tuple[str, ...], bool], ...]
    agreement: bool

    def to_report(self) -> dict:
        return {
            "monomorphic": self.monomorphic,
            "reducts": [
                {"symbols": list(names), "monomorphic": verdict}
                for names, verdict in self.reduct_verdicts
            ],
            "agreement": self.agreement,
        }


def reduct(structure: Structure, names: tuple[str, ...]) -> Structure:
    """Restriction of the structure to a sub-signature."""
    keep = [(name, arity) for name, arity in structure.signature.symbols if name in names]
    return Structure.of(
        Signature(tuple(keep)),
        structure.size,
        {name: structure.extension(name) for name, _ in keep},
    )


def check_reducts(structure: Structure, symbol_cap: int = REDUCT_SYMBOL_CAP) -> ReductReport:
    """Check that monomorphy of the structure propagates to all nonempty reducts."""
    names = structure.signature.names()
    if len(names) > symbol_cap:
        raise CapExceededError(
            f"check_reducts: {len(names)} symbols exceed cap {symbol_cap}"
        )
    full = is_monomorphic(structure).monomorphic
    verdicts = []
    for r in range(1, len(names) + 1):
        for chosen in itertools.combinations(names, r):
            verdicts.append((chosen, is_monomorphic(reduct(structure, chosen)).monomorphic))
    agreement = (not full) or all(v for _, v in verdicts)
    return ReductReport(full, tuple(verdicts), agreement)


# ---------------------------------------------------------------------------
# threshold sweep


@dataclass(frozen=True)
class SweepCounterexample:
    m: int
    structure_text: str
    failing_k: int

    def to_report(self) -> dict:
        return {"m": self.m, "structure": self.structure_text, "failing_k": self.failing_k}


@dataclass(frozen=True)
class SweepVariantResult:
    variant: str  # "exact" (m-monomorphic) or "cumulative" (k-monomorphic for all k <= m)
    threshold: int | None
    exhaustive: bool
    eliminated: tuple[SweepCounterexample, ...]

    def to_report(self) -> dict:
        return {
            "variant": self.variant,
            "threshold": self.threshold,
            "exhaustive": self.exhaustive,
            "eliminated": [c.to_report() for c in self.eliminated],
        }


@dataclass(frozen=True)
class SweepReport:
    arity: int
    max_size: int
    mode: str  # "exhaustive" or "sampled"
    seed: int | None
    samples: int | None
    variants: tuple[SweepVariantResult, ...]

    def variant(self, name: str) -> SweepVariantResult:
        for v in self.variants:
            if v.variant == name:
                return v
        raise KeyError(name)

    def to_report(self) -> dict:
        return {
            "arity": self.arity,
            "max_size": self.max_size,
            "mode": self.mode,
            "seed": self.seed,
            "samples": self.samples,
            "variants": [v.to_report() for v in self.variants],
        }


def _required_ks(variant: str, m: int, size: int) -> tuple[int, ...]:
    if variant == "exact":
        return (m,) if size >= m else ()
    return tuple(range(1, min(m, size) + 1))


def _satisfies(structure: Structure, ks: tuple[int, ...]) -> bool:
    return all(is_k_monomorphic(structure, k)[0] for k in ks)


def _extensions(parent: Structure, arity: int):
    """All one-vertex extensions of a single-symbol structure."""
    new = parent.size
    base = parent.extensions[0]
    fresh = [
        t
        for t in itertools.product(range(new + 1), repeat=arity)
        if new in t
    ]
    for mask in range(1 << len(fresh)):
        added = frozenset(fresh[i] for i in range(len(fresh)) if mask >> i & 1)
        yield Structure(parent.signature, new + 1, (base | added,))


@lru_cache(maxsize=None)
def _all_classes(arity: int, size: int) -> tuple[Structure, ...]:
    """All single-symbol structures of the given size, up to isomorphism.

    Built by one-vertex extension of the previous level; k-monomorphy of
    any induced substructure is inherited, which is what makes the pruned
    sweeps below complete.
    """
    sig = Signature.of(("R", arity))
    if size == 0:
        return (Structure.of(sig, 0),)
    seen: dict[bytes, Structure] = {}
    for parent in _all_classes(arity, size - 1):
        for child in _extensions(parent, arity):
            code = canonical_code(child).payload
            if code not in seen:
                seen[code] = child
    return tuple(seen.values())


def _find_counterexample_exhaustive(
    arity: int, max_size: int, variant: str, m: int
) -> SweepCounterexample | None:
    """First structure (size >= m, up to max_size) that has the required
    monomorphy at m but fails full monomorphy.

    Levels are enumerated by one-vertex extension, pruning children that
    already miss a required k (valid because k-monomorphy is hereditary).
    """
    level: tuple[Structure, ...] | list[Structure] = _all_classes(arity, 0)
    for size in range(1, max_size + 1):
        required = _required_ks(variant, m, size)
        if not required:
            level = _all_classes(arity, size)
            continue
        seen: dict[bytes, Structure] = {}
        for parent in level:
            for child in _extensions(parent, arity):
                if not _satisfies(child, required):
                    continue
                code = canonical_code(child).payload
                if code in seen:
                    continue
                seen[code] = child
                if size >= m:
                    report = is_monomorphic(child)
                    if not report.monomorphic:
                        return SweepCounterexample(
                            m, render_structure(child), report.first_failure()  # type: ignore[arg-type]
                        )
        level = list(seen.values())
    return None


def _random_single_symbol(arity: int, size: int, rng: random.Random) -> Structure:
    sig = Signature.of(("R", arity))
    tuples = {
        t
        for t in itertools.product(range(size), repeat=arity)
        if rng.random() < 0.5
    }
    return Structure.of(sig, size, {"R": tuples})


def _find_counterexample_sampled(
    arity: int, max_size: int, variant: str, m: int, seed: int, samples: int
) -> SweepCounterexample | None:
    rng = random.Random(f"{seed}|{variant}|{m}")
    for size in range(m, max_size + 1):
        required = _required_ks(variant, m, size)
        for _ in range(samples):
            candidate = _random_single_symbol(arity, size, rng)
            if not _satisfies(candidate, required):
                continue
            report = is_monomorphic(candidate)
            if not report.monomorphic:
                return SweepCounterexample(
                    m, render_structure(candidate), report.first_failure()  # type: ignore[arg-type]
                )
    return None


def frasnay_sweep(
    arity: int,
    max_size: int,
    seed: int | None = None,
    samples: int = SWEEP_DEFAULT_SAMPLES,
) -> SweepReport:
    """Empirical probe for a monomorphy threshold over one-symbol structures.

    For each variant, reports the smallest m <= max_size such that every
    enumerated structure of size between m and max_size with the variant's
    monomorphy-at-m property is fully monomorphic, together with one
    counterexample per eliminated smaller m.  "exact" requires
    m-monomorphy only (note every size-m structure is trivially
    m-monomorphic, so this variant is typically eliminated at each m by a
    size-m structure); "cumulative" requires k-monomorphy for all k <= m.

    Enumeration is exhaustive up to caps (arity 1 and 2), else a seeded
    sample; the mode and seed are part of the report.
    """
    if arity < 1 or max_size < 1:
        raise ValidationError("arity and max_size must be >= 1")
    exhaustive = max_size <= SWEEP_EXHAUSTIVE_CAPS.get(arity, 0)
    if exhaustive:
        mode, used_seed, used_samples = "exhaustive", None, None
    else:
        mode, used_seed, used_samples = "sampled", seed if seed is not None else 0, samples

    variants = []
    for variant in ("exact", "cumulative"):
        eliminated: list[SweepCounterexample] = []
        threshold = None
        for m in range(1, max_size + 1):
            if exhaustive:
                ce = _find_counterexample_exhaustive(arity, max_size, variant, m)
            else:
                ce = _find_counterexample_sampled(
                    arity, max_size, variant, m, used_seed, used_samples  # type: ignore[arg-type]
                )
            if ce is None:
                threshold = m
                break
            eliminated.append(ce)
        variants.append(
            SweepVariantResult(variant, threshold, exhaustive, tuple(eliminated))
        )
    return SweepReport(arity, max_size, mode, used_seed, used_samples, tuple(variants))
