"""Algebraic systems: acting group + module presentation, and the exact
character-correlation oracle.

A system pairs a group descriptor (free abelian, rational vector, or the
positive rationals indexed by primes) with one of three module presentations:

* CharPModule      -- a characteristic-p quotient, membership via `ideals`;
* EvaluationModule -- a number-field evaluation of the variables at units,
                      with a level L so that u_i^(1/L) has a home;
* RationalDualModule -- the module Q with a positive rational acting by
                      multiplication (the dual of the rationals).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .ideals import IdealPresentation
from .numfield import FieldElement, NumberField, evaluate
from .ring import GF, DomainError, LaurentPoly, expvec


class InvalidTupleError(ValueError):
    """A character tuple with a zero coefficient or repeated shift."""


class UnsupportedOperationError(ValueError):
    """Operation not available for this module presentation."""


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str  # "free_abelian" | "rational_vector" | "positive_rationals"
    d: int = 0
    primes: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("free_abelian", "rational_vector", "positive_rationals"):
            raise DomainError(f"unknown group kind {self.kind!r}")

    @property
    def rank(self) -> int:
        return len(self.primes) if self.kind == "positive_rationals" else self.d


def free_abelian(d: int) -> GroupDescriptor:
    return GroupDescriptor("free_abelian", d=d)


def rational_vector(d: int) -> GroupDescriptor:
    return GroupDescriptor("rational_vector", d=d)


def positive_rationals(primes: Sequence[int]) -> GroupDescriptor:
    return GroupDescriptor("positive_rationals", primes=tuple(primes))


@dataclass(frozen=True)
class CharPModule:
    ideal: IdealPresentation

    @property
    def characteristic(self) -> int:
        return self.ideal.characteristic


@dataclass(frozen=True)
class EvaluationModule:
    field: NumberField
    assignment: Tuple[Tuple[int, FieldElement], ...]  # (variable index, unit at level L)
    level: int = 1

    @staticmethod
    def make(field: NumberField, assignment: Mapping[int, FieldElement], level: int = 1):
        return EvaluationModule(field, tuple(sorted(assignment.items())), level)

    @property
    def assignment_map(self) -> Dict[int, FieldElement]:
        return dict(self.assignment)


@dataclass(frozen=True)
class RationalDualModule:
    pass


@dataclass(frozen=True)
class AlgebraicSystem:
    group: GroupDescriptor
    module: object
    name: str = ""

    def __post_init__(self):
        if isinstance(self.module, CharPModule) and self.module.characteristic == 0:
            raise DomainError("CharP module requires positive characteristic")
        if isinstance(self.module, EvaluationModule):
            K = self.module.field
            for _, v in self.module.assignment:
                K.inv(v)  # invertibility is part of the presentation contract

    def is_nonzero(self, a) -> bool:
        m = self.module
        if isinstance(m, CharPModule):
            return not m.ideal.contains(a)
        if isinstance(m, EvaluationModule):
            return not _as_field(m, a).is_zero()
        if isinstance(m, RationalDualModule):
            return Fraction(a) != 0
        raise UnsupportedOperationError("unknown module type")


@dataclass(frozen=True)
class CharacterTuple:
    """Pairs (gamma_s, a_s) of group elements and nonzero module elements."""

    pairs: Tuple[Tuple[object, object], ...]

    def __init__(self, pairs):
        object.__setattr__(self, "pairs", tuple((g, a) for g, a in pairs))

    def validate(self, system: AlgebraicSystem):
        gammas = [g for g, _ in self.pairs]
        if len(set(map(_gamma_key, gammas))) != len(gammas):
            raise InvalidTupleError("shift elements must be pairwise distinct")
        for _, a in self.pairs:
            if not system.is_nonzero(a):
                raise InvalidTupleError("tuple coefficient is zero in the module")


def _gamma_key(g):
    if isinstance(g, (tuple, list)):
        return tuple(Fraction(x) for x in g)
    return Fraction(g)


def _as_field(module: EvaluationModule, a) -> FieldElement:
    if isinstance(a, FieldElement):
        return a
    return module.field.from_rational(Fraction(a))


def _unit_power(module: EvaluationModule, gamma) -> FieldElement:
    """The unit u^gamma: with assignment at level L, u_i^(q) = w_i^(qL)."""
    K = module.field
    out = K.one
    amap = module.assignment_map
    key = _gamma_key(gamma)
    if isinstance(key, Fraction):
        key = (key,)
    for i, q in enumerate(key):
        if q == 0:
            continue
        e = q * module.level
        if e.denominator != 1:
            raise UnsupportedOperationError(
                f"exponent {q} not supported at level {module.level}; raise the level"
            )
        if i not in amap:
            raise DomainError(f"no unit assigned to variable u{i + 1}")
        out = out * amap[i] ** int(e)
    return out


def character_correlation(system: AlgebraicSystem, tup: CharacterTuple) -> int:
    """1 iff the shifted character sum vanishes in the module, else 0.

    This bit is the Haar integral of the product of the shifted characters,
    via the orthogonality relations.
    """
    tup.validate(system)
    m = system.module
    if isinstance(m, CharPModule):
        ideal = m.ideal
        dom = GF(m.characteristic)
        total = LaurentPoly.zero(ideal.d, dom)
        for gamma, a in tup.pairs:
            shift = LaurentPoly.monomial(ideal.d, dom, _gamma_key(gamma))
            total = total + shift * a.to_domain(dom)
        return 1 if ideal.contains(total) else 0
    if isinstance(m, EvaluationModule):
        total = m.field.zero
        for gamma, a in tup.pairs:
            total = total + _unit_power(m, gamma) * _as_field(m, a)
        return 1 if total.is_zero() else 0
    if isinstance(m, RationalDualModule):
        total = Fraction(0)
        for gamma, a in tup.pairs:
            total += Fraction(gamma) * Fraction(a)
        return 1 if total == 0 else 0
    raise UnsupportedOperationError("unknown module type")


def level_embed(shape: Sequence[Sequence]) -> Tuple[int, List[Tuple[int, ...]]]:
    """Clear denominators across a shape: (L, integer shape) with shape/L intact."""
    if not shape:
        raise DomainError("empty shape")
    vectors = [expvec(v) for v in shape]
    L = 1
    for v in vectors:
        for e in v:
            L = lcm(L, e.denominator)
    embedded = [tuple(int(e * L) for e in v) for v in vectors]
    return L, embedded


def find_nonmixing_element(system: AlgebraicSystem, box: Sequence[Tuple[int, int]]):
    """A nonidentity gamma in the box fixing some nonzero module element, or None."""
    m = system.module
    ranges = [range(lo, hi + 1) for lo, hi in box]
    if isinstance(m, CharPModule):
        ideal = m.ideal
        dom = GF(m.characteristic)
        one = LaurentPoly.one(ideal.d, dom)
        probes = [
            LaurentPoly.monomial(ideal.d, dom, e)
            for e in product(range(2), repeat=ideal.d)
        ]
        probes = [g for g in probes if not ideal.contains(g)]
        for gamma in product(*ranges):
            if all(x == 0 for x in gamma):
                continue
            mono = LaurentPoly.monomial(ideal.d, dom, gamma)
            for g in probes:
                if ideal.contains((mono - one) * g):
                    return gamma
        return None
    if isinstance(m, EvaluationModule):
        for gamma in product(*ranges):
            if all(x == 0 for x in gamma):
                continue
            if _unit_power(m, gamma) == m.field.one:
                return gamma
        return None
    if isinstance(m, RationalDualModule):
        # gamma*a = a in Q forces gamma = 1: multiplication is injective.
        return None
    raise UnsupportedOperationError("unknown module type")


@dataclass(frozen=True)
class SplitSystem:
    """A positive-rationals action split as inner Z^d action x full shift."""

    inner: AlgebraicSystem
    inner_vars: Tuple[int, ...]  # indices into the prime list
    shift_primes: Tuple[int, ...]

    def project_inner(self, gamma) -> Tuple[int, ...]:
        return tuple(int(gamma[i]) for i in self.inner_vars)

    def project_shift(self, gamma) -> Tuple[int, ...]:
        inner = set(self.inner_vars)
        return tuple(int(g) for i, g in enumerate(gamma) if i not in inner)

    def restrict_coefficient(self, a: LaurentPoly) -> LaurentPoly:
        inner = set(self.inner_vars)
        for m in a.terms:
            if any(m[i] != 0 for i in range(a.d) if i not in inner):
                raise DomainError("coefficient has support on shift coordinates")
        terms = {tuple(m[i] for i in self.inner_vars): c for m, c in a.terms.items()}
        return LaurentPoly(len(self.inner_vars), a.domain, terms)

    def correlation(self, tup: CharacterTuple) -> int:
        """Correlation factored over shift fibers: 1 iff every fiber sum vanishes.

        Entries sharing a shift component form one fiber; distinct fibers are
        independent under the full-shift coordinates, and a lone entry in a
        fiber can never vanish (its coefficient is nonzero).
        """
        fibers: Dict[Tuple[int, ...], List[Tuple[Tuple[int, ...], LaurentPoly]]] = {}
        for gamma, a in tup.pairs:
            fibers.setdefault(self.project_shift(gamma), []).append(
                (self.project_inner(gamma), self.restrict_coefficient(a))
            )
        for entries in fibers.values():
            inner_tuple = CharacterTuple(entries)
            if character_correlation(self.inner, inner_tuple) == 0:
                return 0
        return 1


def split_action(
    system: AlgebraicSystem, inner_vars: Optional[Sequence[int]] = None
) -> SplitSystem:
    """Split a finitely generated positive-rationals CharP system.

    The inner system is the Z^d action on the variables the generators
    mention; the remaining prime coordinates act as a full shift.
    """
    if system.group.kind != "positive_rationals":
        raise UnsupportedOperationError("split_action needs a positive-rationals group")
    if not isinstance(system.module, CharPModule):
        raise UnsupportedOperationError("split_action needs a CharP module")
    ideal = system.module.ideal
    mentioned = set()
    for g in ideal.generators:
        for m in g.terms:
            for i, e in enumerate(m):
                if e != 0:
                    mentioned.add(i)
    if inner_vars is None:
        inner_vars = sorted(mentioned)
    else:
        inner_vars = sorted(int(i) for i in inner_vars)
        outside = mentioned - set(inner_vars)
        if outside:
            raise DomainError(
                f"generator mentions variable(s) {sorted(outside)} outside the split"
            )
    if not inner_vars:
        raise DomainError("no variables mentioned by the generators")
    index = {v: k for k, v in enumerate(inner_vars)}
    dom = GF(ideal.characteristic)
    inner_gens = []
    for g in ideal.generators:
        terms = {}
        for m, c in g.terms.items():
            key = [Fraction(0)] * len(inner_vars)
            for i, e in enumerate(m):
                if e != 0:
                    key[index[i]] = e
            terms[tuple(key)] = c
        inner_gens.append(LaurentPoly(len(inner_vars), dom, terms))
    inner_ideal = IdealPresentation(inner_gens, ideal.characteristic, d=len(inner_vars))
    inner = AlgebraicSystem(free_abelian(len(inner_vars)), CharPModule(inner_ideal))
    shift = tuple(
        p for i, p in enumerate(system.group.primes) if i not in set(inner_vars)
    )
    return SplitSystem(inner=inner, inner_vars=tuple(inner_vars), shift_primes=shift)
