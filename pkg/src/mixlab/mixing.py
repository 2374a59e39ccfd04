"""Non-mixing certificates, shape search, subsum reduction and the unit
equation enumerator.

A certificate packages an order-r shape, nonzero module coefficients, a
symbolic dilation family and a finite verification transcript.  Prime-power
families in characteristic p are proof grade (the Frobenius identity makes
every dilation work); explicit lists are evidence grade: the transcript
covers a tested range only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .numfield import FieldElement, NumberField
from .ring import GF, DomainError, LaurentPoly
from .systems import (
    AlgebraicSystem,
    CharacterTuple,
    CharPModule,
    EvaluationModule,
    RationalDualModule,
    _gamma_key,
    _unit_power,
    character_correlation,
)


class CertificateError(ValueError):
    pass


class IrreducibleCertificateError(CertificateError):
    """No common proper vanishing subsum exists: nothing to reduce."""


class BudgetExceededError(RuntimeError):
    def __init__(self, message: str, region: dict):
        super().__init__(message)
        self.region = region


class EssBoundViolation(AssertionError):
    """The enumerated solution count exceeds the uniform bound (impossible
    at desk scale; raised rather than silently ignored)."""


# -- dilation families -------------------------------------------------------

@dataclass(frozen=True)
class DilationFamily:
    """Symbolic description of the infinite family a transcript samples.

    kinds:
      prime_power       -- dilate the shape by p^k        (proof grade in char p)
      explicit_list     -- dilate the shape by listed n   (evidence grade)
      consecutive_ratio -- shape (1, n, n-1) in Q_{>0}    (closed-form family)
    """

    kind: str
    p: Optional[int] = None
    dilations: Tuple[int, ...] = ()

    def shape_at(self, base_shape, n):
        if self.kind == "consecutive_ratio":
            return (Fraction(1), Fraction(n), Fraction(n - 1))
        return tuple(tuple(Fraction(x) * n for x in g) for g in base_shape)


def prime_power_family(p: int) -> DilationFamily:
    return DilationFamily("prime_power", p=p)


def explicit_family(dilations: Sequence[int]) -> DilationFamily:
    return DilationFamily("explicit_list", dilations=tuple(dilations))


def consecutive_ratio_family() -> DilationFamily:
    return DilationFamily("consecutive_ratio")


@dataclass(frozen=True)
class NonMixingCertificate:
    order: int
    shape: tuple
    coefficients: tuple
    family: DilationFamily
    transcript: Tuple[Tuple[int, int], ...]
    grade: str  # "proof" | "evidence"
    system_hash: str = ""

    def dilations(self):
        return [n for n, _ in self.transcript]


@dataclass
class VerificationReport:
    ok: bool
    lines: List[str]
    first_failure: Optional[int] = None
    separation_ok: bool = True

    def text(self) -> str:
        return "\n".join(self.lines)


def _tuple_at(cert: NonMixingCertificate, n: int) -> CharacterTuple:
    """The character tuple of the certificate at dilation n.

    A family may collide for small n (e.g. (1, n, n-1) at n = 2); colliding
    shifts are merged by summing their coefficients, and shifts whose merged
    coefficient is formally zero are dropped.
    """
    shape = cert.family.shape_at(cert.shape, n)
    merged: Dict[object, object] = {}
    order = []
    for g, a in zip(shape, cert.coefficients):
        k = _gamma_key(g)
        if k in merged:
            merged[k] = merged[k] + a
        else:
            merged[k] = a
            order.append((k, g))
    pairs = [(g, merged[k]) for k, g in order if not _default_is_zero(merged[k])]
    return CharacterTuple(pairs)


def _separation_check(cert: NonMixingCertificate) -> bool:
    """Pairwise shape differences must be pairwise distinct over the
    transcript (a finite stand-in for 'the differences go to infinity')."""
    mult = cert.family.kind == "consecutive_ratio"
    for s, t in combinations(range(cert.order), 2):
        seen = set()
        for n, _ in cert.transcript:
            shape = cert.family.shape_at(cert.shape, n)
            if mult:
                diff = Fraction(shape[s]) / Fraction(shape[t])
            else:
                diff = tuple(a - b for a, b in zip(shape[s], shape[t]))
            if diff in seen:
                return False
            seen.add(diff)
    return True


def verify_certificate(system: AlgebraicSystem, cert: NonMixingCertificate) -> VerificationReport:
    """Replay the transcript through the correlation oracle, bit for bit."""
    lines = []
    first_failure = None
    ok = True
    for n, expected in cert.transcript:
        bit = character_correlation(system, _tuple_at(cert, n))
        status = "ok" if bit == expected == 1 else "FAIL"
        lines.append(f"dilation {n}: correlation {bit} (expected {expected}) {status}")
        if status == "FAIL" and first_failure is None:
            first_failure = n
            ok = False
    sep = _separation_check(cert)
    lines.append(
        "separation: pairwise differences distinct over transcript"
        if sep
        else "separation: FAILED (differences repeat)"
    )
    lines.append(f"grade: {cert.grade} (transcript covers the tested range only)"
                 if cert.grade == "evidence"
                 else f"grade: {cert.grade}")
    return VerificationReport(ok=ok and sep, lines=lines,
                              first_failure=first_failure, separation_ok=sep)


# -- Frobenius certificates --------------------------------------------------

def frobenius_certificate(
    system: AlgebraicSystem, f: LaurentPoly, kmax: int = 6
) -> NonMixingCertificate:
    """Turn one ideal element into a non-mixing family via f^(p^k).

    Shape is the support of f, coefficients its (scalar) coefficients; the
    prime-power family is proof grade: the Frobenius identity gives every k.
    """
    if not isinstance(system.module, CharPModule):
        raise CertificateError("frobenius_certificate needs a CharP system")
    ideal = system.module.ideal
    p = ideal.characteristic
    if not ideal.contains(f):
        raise CertificateError("polynomial is not in the ideal")
    support = f.support()
    r = len(support)
    if r < 2:
        raise CertificateError("support must contain at least 2 terms")
    dom = GF(p)
    shape = tuple(tuple(e for e in m) for m in support)
    coefficients = tuple(
        LaurentPoly.constant(ideal.d, dom, f.terms[m]) for m in support
    )
    cert = NonMixingCertificate(
        order=r,
        shape=shape,
        coefficients=coefficients,
        family=prime_power_family(p),
        transcript=tuple(),
        grade="proof",
    )
    transcript = []
    for k in range(kmax + 1):
        n = p ** k
        bit = character_correlation(system, _tuple_at(cert, n))
        if bit != 1:
            raise CertificateError(f"transcript bit 0 at dilation {n}")
        transcript.append((n, 1))
    return NonMixingCertificate(
        order=r,
        shape=shape,
        coefficients=coefficients,
        family=prime_power_family(p),
        transcript=tuple(transcript),
        grade="proof",
    )


# -- exhaustive shape search in characteristic p -----------------------------

@dataclass
class SearchOutcome:
    certificates: List[NonMixingCertificate]
    region: dict

    def __iter__(self):
        return iter(self.certificates)

    def __len__(self):
        return len(self.certificates)


def _box_points(box: Sequence[Tuple[int, int]]):
    return [tuple(p) for p in product(*[range(lo, hi + 1) for lo, hi in box])]


def _canonical_shape(points) -> Tuple[Tuple[int, ...], ...]:
    mins = [min(p[i] for p in points) for i in range(len(points[0]))]
    return tuple(sorted(tuple(x - m for x, m in zip(p, mins)) for p in points))


def shape_search(
    system: AlgebraicSystem,
    r: int,
    shape_box: Sequence[Tuple[int, int]],
    coeff_window: Sequence[Tuple[int, int]],
    dilations: Sequence[int],
    kernel_combo_limit: int = 1 << 16,
) -> SearchOutcome:
    """Exhaustive kernel search for simultaneous vanishing at all dilations.

    For each r-subset of the shape box (canonicalized by translation) the
    coefficients supported on the window form unknowns of a linear system
    over F_p; kernel vectors whose blocks are all nonzero in the module are
    certificates.
    """
    if r < 2:
        raise CertificateError("order must be at least 2")
    if not isinstance(system.module, CharPModule):
        raise CertificateError("shape_search needs a CharP system")
    ideal = system.module.ideal
    if ideal.constant_in_ideal():
        raise CertificateError("quotient is trivial (unit ideal)")
    p = ideal.characteristic
    dom = GF(p)
    window = _box_points(coeff_window)
    if any(e < 0 for w in window for e in w):
        raise CertificateError("coefficient window must be nonnegative")
    # Column-reduce the window against the ideal: keep a subset of window
    # monomials whose normal forms are linearly independent.  Dropping the
    # dependent ones removes exactly the coefficient vectors that are zero in
    # the quotient, which could otherwise flood the kernel with degenerate
    # (block-in-ideal) solutions.
    nf_cols = [ideal.normal_form_monomial(w) for w in window]
    mono_keys = sorted({mu for col in nf_cols for mu in col})
    mat = [[col.get(mu, 0) for col in nf_cols] for mu in mono_keys]
    _, pivots = linalg.rref(mat, p) if mat else ([], [])
    window = [window[j] for j in pivots]
    points = _box_points(shape_box)
    shapes = sorted({_canonical_shape(c) for c in combinations(points, r)})
    region = {
        "shape_box": [list(b) for b in shape_box],
        "coeff_window": [list(b) for b in coeff_window],
        "reduced_window_size": len(window),
        "dilations": list(dilations),
        "shapes_examined": len(shapes),
        "order": r,
    }
    if not window:
        return SearchOutcome([], region)
    ncols = r * len(window)
    found: List[NonMixingCertificate] = []
    seen_vectors = set()
    for shape in shapes:
        # Column (s, w): stacked normal forms of u^(n*q_s + w) over dilations.
        col_nf: List[Dict[Tuple[int, Tuple[int, ...]], int]] = []
        for s in range(r):
            for w in window:
                col: Dict[Tuple[int, Tuple[int, ...]], int] = {}
                for n in dilations:
                    mono = tuple(n * q + e for q, e in zip(shape[s], w))
                    for mu, c in ideal.normal_form_monomial(mono).items():
                        col[(n, mu)] = c
                col_nf.append(col)
        row_keys = sorted({k for col in col_nf for k in col})
        rows = [[col.get(k, 0) for col in col_nf] for k in row_keys]
        kernel = linalg.nullspace(rows, ncols, p)
        if not kernel:
            continue
        combos = p ** len(kernel)
        if combos > kernel_combo_limit:
            raise BudgetExceededError(
                f"kernel dimension {len(kernel)} exceeds the combination budget",
                {**region, "shape": [list(q) for q in shape]},
            )
        for weights in product(range(p), repeat=len(kernel)):
            if all(w == 0 for w in weights):
                continue
            vec = [0] * ncols
            for wgt, basis_vec in zip(weights, kernel):
                if wgt:
                    vec = [(a + wgt * b) % p for a, b in zip(vec, basis_vec)]
            if not any(vec):
                continue
            # Scale so the first nonzero entry is 1 to drop scalar multiples.
            lead = next(x for x in vec if x)
            inv = pow(lead, -1, p)
            vec = tuple((x * inv) % p for x in vec)
            if (shape, vec) in seen_vectors:
                continue
            seen_vectors.add((shape, vec))
            blocks = []
            for s in range(r):
                terms = {}
                for j, w in enumerate(window):
                    c = vec[s * len(window) + j]
                    if c:
                        terms[w] = c
                blocks.append(LaurentPoly(ideal.d, dom, terms))
            if any(b.is_zero() or ideal.contains(b) for b in blocks):
                continue
            cert = NonMixingCertificate(
                order=r,
                shape=tuple(tuple(q) for q in shape),
                coefficients=tuple(blocks),
                family=explicit_family(dilations),
                transcript=tuple((n, 1) for n in dilations),
                grade="evidence",
            )
            report = verify_certificate(system, cert)
            if report.ok:
                found.append(cert)
    return SearchOutcome(found, region)


# -- subsum machinery --------------------------------------------------------

def _default_is_zero(x) -> bool:
    if isinstance(x, LaurentPoly):
        return x.is_zero()
    if isinstance(x, FieldElement):
        return x.is_zero()
    return Fraction(x) == 0


def vanishing_subsums(terms: Sequence, is_zero=None) -> List[Tuple[int, ...]]:
    """All inclusion-minimal nonempty index subsets with exactly zero sum."""
    if not 2 <= len(terms) <= 20:
        raise DomainError("term count out of range [2, 20]")
    if is_zero is None:
        is_zero = _default_is_zero
    minimal: List[Tuple[int, ...]] = []
    for size in range(1, len(terms) + 1):
        for subset in combinations(range(len(terms)), size):
            if any(set(m) <= set(subset) for m in minimal):
                continue
            total = terms[subset[0]]
            for i in subset[1:]:
                total = total + terms[i]
            if is_zero(total):
                minimal.append(subset)
    return minimal


def _shifted_terms(system: AlgebraicSystem, cert: NonMixingCertificate, n: int):
    """The module elements gamma_s(n) . a_s whose sum the transcript asserts is zero."""
    shape = cert.family.shape_at(cert.shape, n)
    m = system.module
    if isinstance(m, CharPModule):
        dom = GF(m.characteristic)
        out = []
        for gamma, a in zip(shape, cert.coefficients):
            mono = LaurentPoly.monomial(m.ideal.d, dom, gamma)
            out.append(mono * a.to_domain(dom))
        return out, lambda x: m.ideal.contains(x)
    if isinstance(m, EvaluationModule):
        out = []
        for gamma, a in zip(shape, cert.coefficients):
            a_el = a if isinstance(a, FieldElement) else m.field.from_rational(Fraction(a))
            out.append(_unit_power(m, gamma) * a_el)
        return out, lambda x: x.is_zero()
    if isinstance(m, RationalDualModule):
        out = [Fraction(g) * Fraction(a) for g, a in zip(shape, cert.coefficients)]
        return out, lambda x: x == 0
    raise CertificateError("unknown module type")


def reduce_witness(system: AlgebraicSystem, cert: NonMixingCertificate) -> NonMixingCertificate:
    """Restrict a certificate to a common proper vanishing subsum.

    Realizes the subsum reduction: a vanishing proper subsum at every
    transcript dilation witnesses non-mixing on fewer sets.
    """
    r = cert.order
    common = None
    for n, _ in cert.transcript:
        terms, is_zero = _shifted_terms(system, cert, n)
        vanishing = set()
        for size in range(1, r):
            for subset in combinations(range(r), size):
                total = terms[subset[0]]
                for i in subset[1:]:
                    total = total + terms[i]
                if is_zero(total):
                    vanishing.add(subset)
        common = vanishing if common is None else (common & vanishing)
        if not common:
            break
    if not common:
        raise IrreducibleCertificateError(
            "irreducible: no proper subsum vanishes at every transcript dilation"
        )
    if cert.family.kind == "consecutive_ratio":
        raise IrreducibleCertificateError(
            "consecutive-ratio certificates do not restrict symbolically"
        )
    subset = min(common, key=lambda s: (len(s), s))
    reduced = NonMixingCertificate(
        order=len(subset),
        shape=tuple(cert.shape[i] for i in subset),
        coefficients=tuple(cert.coefficients[i] for i in subset),
        family=cert.family,
        transcript=cert.transcript,
        grade=cert.grade,
    )
    report = verify_certificate(system, reduced)
    if not report.ok:
        raise CertificateError("reduced certificate failed re-verification")
    return reduced


# -- the uniform bound and the desk-scale enumerator -------------------------

def ess_bound_exponent(n: int, r: int) -> int:
    """The exact exponent (6n)^(3n) * (r+1); the bound itself is its exp."""
    if n < 1 or r < 0:
        raise DomainError("need n >= 1 and r >= 0")
    return (6 * n) ** (3 * n) * (r + 1)


@dataclass(frozen=True)
class UnitEquationProblem:
    field: NumberField
    coefficients: Tuple[FieldElement, ...]
    generators: Tuple[FieldElement, ...]
    box: int
    budget: int = 500_000

    @staticmethod
    def make(field: NumberField, coefficients, generators, box: int, budget: int = 500_000):
        coeffs = tuple(
            c if isinstance(c, FieldElement) else field.from_rational(Fraction(c))
            for c in coefficients
        )
        gens = tuple(
            g if isinstance(g, FieldElement) else field.from_rational(Fraction(g))
            for g in generators
        )
        if any(c.is_zero() for c in coeffs) or any(g.is_zero() for g in gens):
            raise DomainError("coefficients and generators must be nonzero")
        return UnitEquationProblem(field, coeffs, gens, box, budget)


@dataclass(frozen=True)
class UnitSolution:
    exponents: Tuple[Tuple[int, ...], ...]  # one exponent vector per x_i
    values: Tuple[FieldElement, ...]


@dataclass
class UnitEquationResult:
    solutions: List[UnitSolution]
    bound_exponent: int
    bound_ok: bool

    @property
    def count(self) -> int:
        return len(self.solutions)


def enumerate_unit_solutions(problem: UnitEquationProblem) -> UnitEquationResult:
    """All nondegenerate solutions of a1 x1 + ... + an xn = 1 in the box.

    Each x_i ranges over products of the generators with exponents bounded by
    the box; solutions with a vanishing proper subsum are discarded, and the
    count is checked against the uniform bound (in exact log form).
    """
    K = problem.field
    n = len(problem.coefficients)
    rgen = len(problem.generators)
    B = problem.box
    exps = list(product(range(-B, B + 1), repeat=rgen))
    units: Dict[FieldElement, Tuple[int, ...]] = {}
    for e in sorted(exps):
        val = K.one
        for g, k in zip(problem.generators, e):
            val = val * g ** k
        units.setdefault(val, e)  # keep the first exponent vector per group element
    unit_items = sorted(units.items(), key=lambda kv: kv[1])
    total = len(unit_items) ** n
    if total > problem.budget:
        raise BudgetExceededError(
            f"{total} combinations exceed the budget {problem.budget}",
            {"box": B, "generators": rgen, "terms": n},
        )
    one = K.one
    solutions = []
    for combo in product(unit_items, repeat=n):
        values = tuple(v for v, _ in combo)
        total_sum = K.zero
        for a, x in zip(problem.coefficients, values):
            total_sum = total_sum + a * x
        if total_sum != one:
            continue
        terms = [a * x for a, x in zip(problem.coefficients, values)]
        proper = [
            s for s in vanishing_subsums(terms) if 0 < len(s) < n
        ] if n >= 2 else []
        if proper:
            continue
        solutions.append(UnitSolution(tuple(e for _, e in combo), values))
    exponent = ess_bound_exponent(n, rgen)
    count = len(solutions)
    bound_ok = (count + 1).bit_length() <= exponent
    if not bound_ok:
        raise EssBoundViolation(
            f"log2(count+1) ~ {(count + 1).bit_length()} exceeds exponent {exponent}"
        )
    return UnitEquationResult(solutions, exponent, bound_ok)


# -- evaluation-system search (characteristic zero) --------------------------

_FILTER_PRIME = (1 << 61) - 1


def _det_mod(rows: List[List[int]], p: int) -> int:
    """Determinant mod p by Gaussian elimination; rows is a small square matrix."""
    work = [list(r) for r in rows]
    n = len(work)
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] % p), None)
        if pivot is None:
            return 0
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det = det * work[col][col] % p
        inv = pow(work[col][col], -1, p)
        for r2 in range(col + 1, n):
            f = work[r2][col] * inv % p
            if f:
                work[r2] = [(a - f * b) % p for a, b in zip(work[r2], work[col])]
    return det % p


def _fraction_kernel(rows: List[List[Fraction]], ncols: int) -> List[List[Fraction]]:
    work = [list(r) for r in rows]
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        inv = 1 / work[row][col]
        work[row] = [x * inv for x in work[row]]
        for r2 in range(len(work)):
            if r2 != row and work[r2][col] != 0:
                f = work[r2][col]
                work[r2] = [a - f * b for a, b in zip(work[r2], work[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        for rr, pc in zip(range(len(pivots)), pivots):
            vec[pc] = -work[rr][fcol]
        basis.append(vec)
    return basis


def evaluation_shape_search(
    system: AlgebraicSystem,
    r: int,
    shape_box: Sequence[Tuple[int, int]],
    dilations: Sequence[int] = (1, 2, 3, 4),
) -> SearchOutcome:
    """Search an evaluation system for coefficient vectors vanishing at every
    listed dilation simultaneously.  Bounded evidence, not proof: the region
    and dilation set are recorded alongside any finding.
    """
    if r < 2:
        raise CertificateError("order must be at least 2")
    m = system.module
    if not isinstance(m, EvaluationModule):
        raise CertificateError("evaluation_shape_search needs an Evaluation module")
    if len(dilations) < r:
        raise CertificateError(
            "need at least r dilations, otherwise the linear system is underdetermined"
        )
    points = [p for p in _box_points(shape_box) if any(p)]
    origin = tuple(0 for _ in shape_box)
    region = {
        "shape_box": [list(b) for b in shape_box],
        "dilations": list(dilations),
        "order": r,
        "note": "bounded evidence over the listed region and dilations only",
    }
    rational = m.field.degree == 1
    found: List[NonMixingCertificate] = []
    shapes_examined = 0
    if rational:
        # Precompute the modular column of each candidate point once; the
        # inner loop over shapes then only needs a small rank computation.
        value: Dict[Tuple[int, ...], Fraction] = {}
        mod_col: Dict[Tuple[int, ...], List[int]] = {}
        for q in [origin] + points:
            x = _unit_power(m, q).coeffs[0]
            value[q] = x
            res = (x.numerator % _FILTER_PRIME) * pow(
                x.denominator % _FILTER_PRIME, -1, _FILTER_PRIME
            ) % _FILTER_PRIME
            mod_col[q] = [pow(res, n, _FILTER_PRIME) for n in dilations]
    for rest in combinations(points, r - 1):
        shape = (origin,) + rest
        shapes_examined += 1
        if rational:
            # Fast modular full-rank filter; exact arithmetic on the rare misses.
            cols = [mod_col[q] for q in shape]
            square = [[col[i] for col in cols] for i in range(r)]
            if _det_mod(square, _FILTER_PRIME) != 0:
                continue
            base = [value[q] for q in shape]
            rows = [[x ** n for x in base] for n in dilations]
            kernel = _fraction_kernel(rows, r)
        else:
            base = [_unit_power(m, q) for q in shape]
            rows = []
            for n in dilations:
                rows.append([x ** n for x in base])
            kernel = _field_kernel(m.field, rows, r)
        if not kernel:
            continue
        vec = _all_nonzero_kernel_vector(kernel)
        if vec is None:
            continue
        if rational:
            from math import lcm as _lcm

            den = 1
            for x in vec:
                den = _lcm(den, Fraction(x).denominator)
            coeffs = tuple(Fraction(x) * den for x in vec)
        else:
            coeffs = tuple(vec)
        cert = NonMixingCertificate(
            order=r,
            shape=tuple(tuple(q) for q in shape),
            coefficients=coeffs,
            family=explicit_family(dilations),
            transcript=tuple((n, 1) for n in dilations),
            grade="evidence",
        )
        if verify_certificate(system, cert).ok:
            found.append(cert)
    region["shapes_examined"] = shapes_examined
    return SearchOutcome(found, region)


def _field_kernel(K: NumberField, rows, ncols):
    work = [list(r) for r in rows]
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(work)) if not work[r][col].is_zero()), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        inv = work[row][col].inv()
        work[row] = [x * inv for x in work[row]]
        for r2 in range(len(work)):
            if r2 != row and not work[r2][col].is_zero():
                f = work[r2][col]
                work[r2] = [a - f * b for a, b in zip(work[r2], work[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [K.zero] * ncols
        vec[fcol] = K.one
        for rr, pc in enumerate(pivots):
            vec[pc] = -work[rr][fcol]
        basis.append(vec)
    return basis


def _all_nonzero_kernel_vector(kernel):
    """A kernel vector with every coordinate nonzero, if one exists.

    Over an infinite field one exists iff no coordinate vanishes on the whole
    kernel; small integer combinations of the basis then find one.
    """
    ncols = len(kernel[0])
    for col in range(ncols):
        if all(_default_is_zero(vec[col]) for vec in kernel):
            return None
    for weights in product(range(0, len(kernel) + 2), repeat=len(kernel)):
        if all(w == 0 for w in weights):
            continue
        vec = []
        for i in range(ncols):
            acc = None
            for w, basis_vec in zip(weights, kernel):
                for _ in range(w):
                    acc = basis_vec[i] if acc is None else acc + basis_vec[i]
            vec.append(acc)
        if all(not _default_is_zero(x) for x in vec):
            return vec
    return None


# -- the rational-dual system ------------------------------------------------

def solve_consecutive_ratio_coefficients() -> Tuple[Fraction, Fraction, Fraction]:
    """Coefficients (a1, a2, a3) with a1*1 + a2*n + a3*(n-1) = 0 for all n.

    Derived by solving the 2x3 linear system in exact arithmetic (constant
    part and n-part must vanish separately) rather than trusting any printed
    sign pattern.
    """
    # a1 + n*a2 + (n-1)*a3 = (a1 - a3) + n*(a2 + a3)
    rows = [
        [Fraction(1), Fraction(0), Fraction(-1)],
        [Fraction(0), Fraction(1), Fraction(1)],
    ]
    kernel = _fraction_kernel(rows, 3)
    assert len(kernel) == 1
    vec = kernel[0]
    from math import lcm as _lcm

    den = 1
    for x in vec:
        den = _lcm(den, x.denominator)
    vec = [x * den for x in vec]
    if vec[0] < 0:
        vec = [-x for x in vec]
    return tuple(vec)


def rational_dual_certificate(
    system: AlgebraicSystem, n_max: int = 1000
) -> NonMixingCertificate:
    """The order-3 family (1, n, n-1) on the rational dual, transcript 2..n_max."""
    if not isinstance(system.module, RationalDualModule):
        raise CertificateError("needs a rational-dual system")
    coeffs = solve_consecutive_ratio_coefficients()
    cert = NonMixingCertificate(
        order=3,
        shape=(Fraction(1), Fraction(2), Fraction(1)),  # instance at n=2, for display
        coefficients=coeffs,
        family=consecutive_ratio_family(),
        transcript=tuple((n, 1) for n in range(2, n_max + 1)),
        grade="proof",
    )
    for n, _ in cert.transcript:
        if character_correlation(system, _tuple_at(cert, n)) != 1:
            raise CertificateError(f"family fails at n={n}")
    return cert


def rational_dual_order2_search(
    system: AlgebraicSystem, coeff_height: int = 20, shape_height: int = 50
) -> SearchOutcome:
    """Exhaustive order-2 check on the rational dual.

    Fixed nonzero coefficients force a constant ratio between the two shifts,
    so no candidate family can move apart; the search verifies this over all
    coefficient pairs of bounded height and records the exhausted region.
    """
    if not isinstance(system.module, RationalDualModule):
        raise CertificateError("needs a rational-dual system")
    region = {
        "coeff_height": coeff_height,
        "shape_height": shape_height,
        "order": 2,
    }
    ratios = set()
    for p in range(1, coeff_height + 1):
        for q in range(1, coeff_height + 1):
            ratios.add(Fraction(p, q))
    families = 0
    for rho in sorted(ratios):
        if rho == 1:
            continue  # coincident shifts are not a two-set family
        # Pairs (g, rho*g) with both of height <= shape_height satisfy
        # g*a1 + (rho*g)*a2 = 0 for a = (rho, -1); their pairwise ratio is
        # the constant rho, so the family cannot leave any finite set.
        sample = []
        for num in range(1, shape_height + 1):
            g = Fraction(num)
            h = rho * g
            if h.numerator <= shape_height and h.denominator <= shape_height:
                sample.append((g, h))
            if len(sample) >= 3:
                break
        if len(sample) < 2:
            continue
        families += 1
        a = (rho, Fraction(-1))
        for g, h in sample:
            bit = character_correlation(
                system, CharacterTuple([(g, a[0]), (h, a[1])])
            )
            if bit != 1:
                raise CertificateError("internal: constant-ratio family must correlate")
        seen = {g / h for g, h in sample}
        if len(seen) != 1:
            raise CertificateError("internal: ratio should be constant")
    region["constant_ratio_families"] = families
    region["note"] = (
        "every vanishing order-2 family has a constant shift ratio, so its "
        "differences never leave a finite set; no certificate exists"
    )
    return SearchOutcome([], region)


# -- the order-of-mixing report ---------------------------------------------

@dataclass
class SearchBudgets:
    shape_box: int = 4
    coeff_window: int = 3
    dilations: Tuple[int, ...] = (1, 2, 4, 8)
    frobenius_kmax: int = 6
    kernel_combo_limit: int = 1 << 16
    eval_box: int = 12
    eval_dilations: Tuple[int, ...] = (1, 2, 3, 4)
    rational_coeff_height: int = 20
    rational_shape_height: int = 50
    element_box: int = 5
    rational_dual_nmax: int = 1000


@dataclass
class OrderEvidence:
    order: int
    certificates: List[NonMixingCertificate] = field(default_factory=list)
    region: Optional[dict] = None
    note: str = ""


@dataclass
class MixingReport:
    system_name: str
    entries: Dict[int, OrderEvidence]
    nonmixing_element: Optional[tuple]
    least_certified_order: Optional[int]
    disclaimer: str

    def summary_lines(self) -> List[str]:
        lines = [f"system: {self.system_name or '(unnamed)'}"]
        if self.nonmixing_element is not None:
            lines.append(f"non-mixing element found: {self.nonmixing_element}")
        else:
            lines.append("no non-mixing element in the searched box")
        for r in sorted(self.entries):
            e = self.entries[r]
            if e.certificates:
                grades = {c.grade for c in e.certificates}
                lines.append(
                    f"r={r}: {len(e.certificates)} certificate(s) ({', '.join(sorted(grades))})"
                )
            else:
                lines.append(f"r={r}: no certificate in the exhausted region")
            if e.note:
                lines.append(f"  {e.note}")
        if self.least_certified_order is not None:
            lines.append(
                f"evidence that the order of mixing is below {self.least_certified_order}"
            )
        lines.append(self.disclaimer)
        return lines


def mixing_order_report(
    system: AlgebraicSystem, rmax: int, budgets: Optional[SearchBudgets] = None
) -> MixingReport:
    """Search orders 2..rmax and assemble desk-scale evidence.

    Frobenius families are proof grade; everything else is labeled as
    bounded evidence over the exhausted region.
    """
    budgets = budgets or SearchBudgets()
    m = system.module
    entries: Dict[int, OrderEvidence] = {}
    if isinstance(m, CharPModule):
        d = m.ideal.d
        box = [(0, budgets.shape_box)] * d
        window = [(0, budgets.coeff_window)] * d
        from .systems import find_nonmixing_element

        element = find_nonmixing_element(
            system, [(-budgets.element_box, budgets.element_box)] * d
        )
        for r in range(2, rmax + 1):
            ev = OrderEvidence(order=r)
            for g in m.ideal.generators:
                if len(g.support()) == r:
                    try:
                        ev.certificates.append(
                            frobenius_certificate(system, g, budgets.frobenius_kmax)
                        )
                    except CertificateError:
                        pass
            outcome = shape_search(
                system, r, box, window, budgets.dilations,
                kernel_combo_limit=budgets.kernel_combo_limit,
            )
            for c in outcome.certificates:
                if not any(
                    c.shape == c2.shape and c.coefficients == c2.coefficients
                    for c2 in ev.certificates
                ):
                    ev.certificates.append(c)
            ev.region = outcome.region
            if any(c.grade == "proof" for c in ev.certificates):
                ev.note = "prime-power family: non-mixing holds for every dilation"
            entries[r] = ev
    elif isinstance(m, EvaluationModule):
        d = len(m.assignment)
        from .systems import find_nonmixing_element

        element = find_nonmixing_element(
            system, [(-budgets.element_box, budgets.element_box)] * d
        )
        for r in range(2, rmax + 1):
            box = [(-budgets.eval_box, budgets.eval_box)] * d
            outcome = evaluation_shape_search(
                system, r, box, dilations=budgets.eval_dilations
            )
            note = (
                "no vanishing sums over the box: consistent with mixing of all "
                "orders on connected groups (bounded evidence, not proof)"
                if not outcome.certificates
                else ""
            )
            entries[r] = OrderEvidence(
                order=r, certificates=outcome.certificates,
                region=outcome.region, note=note,
            )
    elif isinstance(m, RationalDualModule):
        element = None
        for r in range(2, rmax + 1):
            if r == 2:
                outcome = rational_dual_order2_search(
                    system,
                    coeff_height=budgets.rational_coeff_height,
                    shape_height=budgets.rational_shape_height,
                )
                entries[r] = OrderEvidence(order=2, certificates=[],
                                           region=outcome.region,
                                           note=outcome.region.get("note", ""))
            elif r == 3:
                cert = rational_dual_certificate(system, budgets.rational_dual_nmax)
                entries[r] = OrderEvidence(
                    order=3, certificates=[cert],
                    note="closed-form family (1, n, n-1): holds for every n",
                )
            else:
                entries[r] = OrderEvidence(
                    order=r, certificates=[],
                    note="implied non-mixing: already not mixing on 3 sets",
                )
    else:
        raise CertificateError("unknown module type")
    least = None
    for r in sorted(entries):
        if entries[r].certificates:
            least = r
            break
    return MixingReport(
        system_name=system.name,
        entries=entries,
        nonmixing_element=element,
        least_certified_order=least,
        disclaimer=(
            "desk-scale evidence except where a symbolic family (prime power "
            "or closed form) certifies non-mixing for every dilation"
        ),
    )
