"""Ideal presentations and exact membership engines in characteristic p.

Laurent membership is reduced to polynomial membership by clearing negative
exponents and saturating by the product of the variables: adjoin t with the
relation t*u1*...*ud = 1 and compute a Groebner basis in an order that
eliminates t.  The t-free part of the reduced basis is then a basis of the
saturated polynomial ideal, so normal forms of ordinary polynomials never
mention t.

A substitution engine is available as a fast path when the ideal is presented
by relations solving variables in terms of earlier ones (as for the
three-dot ideal via u2 = 1 + u1 over F_2).
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .ring import GF, DomainError, LaurentPoly

Mono = Tuple[int, ...]
PolyDict = Dict[Mono, int]


class EngineUnavailableError(ValueError):
    """No membership engine supports the requested characteristic."""


# -- internal polynomial arithmetic over F_p ---------------------------------
# Monomials are integer tuples of length nvars; the last slot is the
# saturation variable t.  The order is a block order eliminating t: compare
# the t-exponent first, then graded lex on u1 > u2 > ... > ud.

def _order_key(m: Mono):
    return (m[-1], sum(m[:-1]), m[:-1])


def _lead(f: PolyDict) -> Mono:
    return max(f, key=_order_key)


def _mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def _add_scaled(f: PolyDict, c: int, shift: Mono, g: PolyDict, p: int) -> PolyDict:
    """f + c * x^shift * g, in place on a copy of f."""
    out = dict(f)
    for m, cm in g.items():
        key = _mono_mul(m, shift)
        val = (out.get(key, 0) + c * cm) % p
        if val:
            out[key] = val
        else:
            out.pop(key, None)
    return out


def _normal_form(f: PolyDict, basis: Sequence[Tuple[Mono, int, PolyDict]], p: int) -> PolyDict:
    """Remainder of f on division by basis (each entry: lead, lead inverse, poly)."""
    rem: PolyDict = {}
    work = dict(f)
    while work:
        lt = _lead(work)
        for lm, inv_lc, g in basis:
            if _mono_divides(lm, lt):
                factor = (-work[lt] * inv_lc) % p
                shift = tuple(a - b for a, b in zip(lt, lm))
                work = _add_scaled(work, factor, shift, g, p)
                break
        else:
            rem[lt] = work.pop(lt)
    return rem


def _prepared(basis: Sequence[PolyDict], p: int):
    out = []
    for g in basis:
        lm = _lead(g)
        out.append((lm, pow(g[lm], -1, p), g))
    return out


def _buchberger(gens: Sequence[PolyDict], p: int) -> List[PolyDict]:
    basis = [dict(g) for g in gens if g]
    if not basis:
        return []
    queue: List[Tuple[int, int, int, int]] = []
    counter = 0
    for i in range(len(basis)):
        for j in range(i):
            lcm = _mono_lcm(_lead(basis[i]), _lead(basis[j]))
            heapq.heappush(queue, (sum(lcm), counter, j, i))
            counter += 1
    while queue:
        _, _, i, j = heapq.heappop(queue)
        fi, fj = basis[i], basis[j]
        li, lj = _lead(fi), _lead(fj)
        lcm = _mono_lcm(li, lj)
        if lcm == _mono_mul(li, lj):
            continue  # coprime leading monomials: S-polynomial reduces to zero
        shift_i = tuple(a - b for a, b in zip(lcm, li))
        shift_j = tuple(a - b for a, b in zip(lcm, lj))
        ci = pow(fi[li], -1, p)
        cj = pow(fj[lj], -1, p)
        s = _add_scaled({}, ci, shift_i, fi, p)
        s = _add_scaled(s, -cj % p, shift_j, fj, p)
        rem = _normal_form(s, _prepared(basis, p), p)
        if rem:
            basis.append(rem)
            k = len(basis) - 1
            for idx in range(k):
                lcm2 = _mono_lcm(_lead(basis[idx]), _lead(rem))
                heapq.heappush(queue, (sum(lcm2), counter, idx, k))
                counter += 1
    return _autoreduce(basis, p)


def _autoreduce(basis: Sequence[PolyDict], p: int) -> List[PolyDict]:
    # Drop members whose lead is divisible by another lead, then fully reduce
    # tails and normalize to monic; sort for determinism.
    leads = [(_lead(g), g) for g in basis if g]
    keep = []
    for idx, (lm, g) in enumerate(leads):
        if any(
            _mono_divides(lm2, lm) and (lm2 != lm or j < idx)
            for j, (lm2, _) in enumerate(leads)
            if j != idx
        ):
            continue
        keep.append(g)
    out = []
    for idx, g in enumerate(keep):
        others = _prepared([h for j, h in enumerate(keep) if j != idx], p)
        rem = _normal_form(g, others, p) if others else dict(g)
        if not rem:
            continue
        lm = _lead(rem)
        inv = pow(rem[lm], -1, p)
        out.append({m: (c * inv) % p for m, c in rem.items()})
    out.sort(key=lambda g: _order_key(_lead(g)))
    return out


# -- the presentation --------------------------------------------------------

class IdealPresentation:
    """Generators plus characteristic and membership-engine configuration.

    The characteristic-p constant is implicit; generators are reduced mod p on
    construction.  Engine "groebner" computes a saturated basis; engine
    "substitution" uses a supplied solution of variables by polynomials in
    strictly earlier variables.
    """

    def __init__(
        self,
        generators: Sequence[LaurentPoly],
        characteristic: int,
        d: Optional[int] = None,
        engine: str = "groebner",
        substitution: Optional[Mapping[int, LaurentPoly]] = None,
    ):
        if characteristic != 0 and characteristic > 2 ** 31:
            raise EngineUnavailableError("characteristic too large for the engine")
        self.characteristic = characteristic
        if d is None:
            if not generators:
                raise DomainError("d required when there are no generators")
            d = generators[0].d
        self.d = d
        if characteristic:
            dom = GF(characteristic)
            self.generators = tuple(g.to_domain(dom) for g in generators)
        else:
            self.generators = tuple(generators)
        for g in self.generators:
            if g.d != self.d:
                raise DomainError("generator dimension mismatch")
        if engine not in ("groebner", "substitution"):
            raise DomainError(f"unknown engine {engine!r}")
        self.engine = engine
        self.substitution = dict(substitution) if substitution else None
        if engine == "substitution":
            if not self.substitution:
                raise DomainError("substitution engine requires a substitution map")
            for var, poly in self.substitution.items():
                for m in poly.terms:
                    if any(m[i] != 0 for i in range(var, self.d)):
                        raise DomainError(
                            f"substitution for u{var + 1} must use strictly earlier variables"
                        )
        self._gb_full: Optional[List[PolyDict]] = None
        self._gb_contracted: Optional[List[PolyDict]] = None
        self._nf_cache: Dict[Mono, PolyDict] = {}

    # -- Laurent -> polynomial plumbing -------------------------------------

    def _cleared(self, f: LaurentPoly) -> PolyDict:
        """Shift f by a monomial unit so all exponents are nonnegative ints."""
        if not f.terms:
            return {}
        mins = [min(m[i] for m in f.terms) for i in range(self.d)]
        shift = [-e if e < 0 else Fraction(0) for e in mins]
        out: PolyDict = {}
        for m, c in f.terms.items():
            exps = []
            for e, s in zip(m, shift):
                v = e + s
                if v.denominator != 1:
                    raise DomainError(f"fractional exponent {v}; level-embed first")
                exps.append(int(v))
            out[tuple(exps) + (0,)] = int(c) % self.characteristic
        return {m: c for m, c in out.items() if c}

    def _to_laurent(self, poly: PolyDict) -> LaurentPoly:
        dom = GF(self.characteristic)
        return LaurentPoly(self.d, dom, {m[:-1]: c for m, c in poly.items()})

    # -- Groebner engine -----------------------------------------------------

    def _require_char_p(self):
        if not self.characteristic:
            raise EngineUnavailableError(
                "characteristic 0 has no symbolic membership engine; "
                "use an evaluation presentation"
            )

    def _full_basis(self) -> List[PolyDict]:
        if self._gb_full is None:
            self._require_char_p()
            gens = [self._cleared(g) for g in self.generators]
            sat: PolyDict = {
                tuple([1] * self.d + [1]): 1,
                tuple([0] * (self.d + 1)): self.characteristic - 1,
            }
            self._gb_full = _buchberger([g for g in gens if g] + [sat], self.characteristic)
        return self._gb_full

    def _contracted_basis(self) -> List[PolyDict]:
        if self._gb_contracted is None:
            full = self._full_basis()
            self._gb_contracted = [g for g in full if all(m[-1] == 0 for m in g)]
        return self._gb_contracted

    def groebner_basis(self) -> List[LaurentPoly]:
        """Reduced, saturated basis of the Laurent ideal, t eliminated."""
        return [self._to_laurent(g) for g in self._contracted_basis()]

    def normal_form(self, f: LaurentPoly) -> LaurentPoly:
        """Canonical remainder of the cleared lift of f; zero iff f is in the ideal."""
        self._require_char_p()
        basis = _prepared(self._contracted_basis(), self.characteristic)
        rem = _normal_form(self._cleared(f), basis, self.characteristic)
        return self._to_laurent(rem)

    def normal_form_monomial(self, exps: Sequence[int]) -> PolyDict:
        """Cached normal form of a nonnegative monomial, for linear algebra."""
        self._require_char_p()
        key = tuple(int(e) for e in exps) + (0,)
        if any(e < 0 for e in key):
            raise DomainError("normal_form_monomial needs nonnegative exponents")
        if key not in self._nf_cache:
            basis = _prepared(self._contracted_basis(), self.characteristic)
            self._nf_cache[key] = _normal_form({key: 1}, basis, self.characteristic)
        return self._nf_cache[key]

    def contains_groebner(self, f: LaurentPoly) -> bool:
        return not self.normal_form(f).terms

    # -- substitution engine -------------------------------------------------

    def contains_substitution(self, f: LaurentPoly) -> bool:
        self._require_char_p()
        if self.substitution is None:
            raise EngineUnavailableError("no substitution hint on this presentation")
        dom = GF(self.characteristic)
        work = f.to_domain(dom)
        for var in sorted(self.substitution, reverse=True):
            work = _eliminate_variable(work, var, self.substitution[var].to_domain(dom))
        return work.is_zero()

    # -- public surface ------------------------------------------------------

    def contains(self, f: LaurentPoly) -> bool:
        """Exact ideal membership of f, via the configured engine."""
        if f.d != self.d:
            raise DomainError("dimension mismatch")
        if self.engine == "substitution":
            return self.contains_substitution(f)
        return self.contains_groebner(f)

    def constant_in_ideal(self) -> bool:
        """True iff 1 lies in the ideal (trivial quotient)."""
        self._require_char_p()
        return self.contains_groebner(LaurentPoly.one(self.d, GF(self.characteristic)))

    def find_torsion_unit(self, kmax: int, var: int = 0) -> Optional[int]:
        """Smallest k <= kmax with u_var^k - 1 in the ideal, or None."""
        dom = GF(self.characteristic)
        u = LaurentPoly.variable(var, self.d, dom)
        one = LaurentPoly.one(self.d, dom)
        for k in range(1, kmax + 1):
            if self.contains(u ** k - one):
                return k
        return None


def _eliminate_variable(f: LaurentPoly, var: int, g: LaurentPoly) -> LaurentPoly:
    """Replace u_var by the polynomial g, multiplying through by g^{-B} to
    clear negative powers.  The result is zero iff the image of f is zero in
    the localization (g is nonzero in a domain there)."""
    if f.is_zero():
        return f
    exps = [m[var] for m in f.terms]
    low = min(min(exps), Fraction(0))
    acc = LaurentPoly.zero(f.d, f.domain)
    for m, c in f.terms.items():
        b = m[var] - low
        if b.denominator != 1:
            raise DomainError("fractional exponent in substitution engine")
        rest = list(m)
        rest[var] = Fraction(0)
        acc = acc + LaurentPoly.monomial(f.d, f.domain, rest, c) * g ** int(b)
    return acc


def groebner_basis(ideal: IdealPresentation) -> List[LaurentPoly]:
    return ideal.groebner_basis()


def contains(ideal: IdealPresentation, f: LaurentPoly) -> bool:
    return ideal.contains(f)


def constant_in_ideal(ideal: IdealPresentation) -> bool:
    return ideal.constant_in_ideal()


def find_torsion_unit(ideal: IdealPresentation, kmax: int, var: int = 0) -> Optional[int]:
    return ideal.find_torsion_unit(kmax, var=var)
