"""Poisson brackets on (Laurent) polynomial rings and their extensions.

A Poisson structure is stored as the bracket table on generator pairs; the
bracket of arbitrary elements is the unique biderivation extending the table,

    {f, g} = sum_{i<j} table(i,j) * (df/dg_i dg/dg_j - df/dg_j dg/dg_i),

evaluated in a single pass rather than by recursive Leibniz descent.
Antisymmetry and the Leibniz rule hold by construction; the Jacobi identity
on generator triples is what `jacobi_check` verifies, and it propagates to
all elements because the jacobiator of a biderivation bracket is a
triderivation.

The module also provides the two extension constructors for polynomial rings
(a single Poisson-Ore step, and the two-variable double extension built from
two such steps), localization, and Poisson-normality detection by exact
division.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .exact_poly import (
    LaurentPoly,
    Scalar,
    VarSpec,
    VarSpecMismatch,
    divide_exact,
)


class CompatibilityError(ValueError):
    """An extension precondition failed; carries the offending residual."""

    def __init__(self, message: str, pair=None, residual: Optional[LaurentPoly] = None):
        super().__init__(message)
        self.pair = pair
        self.residual = residual


@dataclass(frozen=True)
class PoissonStructure:
    """Generators plus the upper-triangular bracket table {g_i, g_j}, i < j.

    Construction does not run the Jacobi test; call `validate()` (the named
    constructors in `algebra_an` do) before trusting the structure.
    """

    varspec: VarSpec
    table: Mapping[tuple[int, int], LaurentPoly]

    def __post_init__(self):
        for (i, j), entry in self.table.items():
            if not (0 <= i < j < len(self.varspec)):
                raise ValueError(f"table key {(i, j)} is not an upper-triangular pair")
            if entry.varspec != self.varspec:
                raise VarSpecMismatch(f"table entry {(i, j)} lives over the wrong variables")

    def entry(self, i: int, j: int) -> LaurentPoly:
        """{g_i, g_j} for any pair, using antisymmetry below the diagonal."""
        if i == j:
            return LaurentPoly.zero(self.varspec)
        if i < j:
            return self.table.get((i, j), LaurentPoly.zero(self.varspec))
        return -self.table.get((j, i), LaurentPoly.zero(self.varspec))

    def generator(self, name: str) -> LaurentPoly:
        return LaurentPoly.variable(self.varspec, name)

    def bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        if f.varspec != self.varspec or g.varspec != self.varspec:
            raise VarSpecMismatch("bracket arguments over the wrong variables")
        acc = LaurentPoly.zero(self.varspec)
        for (i, j), t in self.table.items():
            dfi = f.derivative_index(i)
            dgj = g.derivative_index(j)
            part = dfi * dgj
            dfj = f.derivative_index(j)
            dgi = g.derivative_index(i)
            part = part - dfj * dgi
            if not part.is_zero():
                acc = acc + t * part
        return acc

    def bracket_names(self, a: str, b: str) -> LaurentPoly:
        return self.entry(self.varspec.index(a), self.varspec.index(b))

    def jacobiator(self, f: LaurentPoly, g: LaurentPoly, h: LaurentPoly) -> LaurentPoly:
        return (
            self.bracket(self.bracket(f, g), h)
            + self.bracket(self.bracket(g, h), f)
            + self.bracket(self.bracket(h, f), g)
        )

    def jacobi_check(self) -> bool:
        """Jacobi identity on all generator triples; sufficient for the ring."""
        n = len(self.varspec)
        gens = [self.generator(name) for name in self.varspec.names]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    if not self.jacobiator(gens[i], gens[j], gens[k]).is_zero():
                        return False
        return True

    def validate(self) -> PoissonStructure:
        if not self.jacobi_check():
            raise ValueError("bracket table violates the Jacobi identity")
        return self

    def hamiltonian(self, a: LaurentPoly) -> PoissonDerivation:
        """The derivation {a, -}."""
        return PoissonDerivation(
            self.varspec,
            {name: self.bracket(a, self.generator(name)) for name in self.varspec.names},
        )


@dataclass(frozen=True)
class PoissonDerivation:
    """A derivation given by generator images, extended by the product rule.

    The same formula extends a derivation to any localization, so `apply`
    is valid on Laurent arguments as well.
    """

    varspec: VarSpec
    images: Mapping[str, LaurentPoly]

    def __post_init__(self):
        missing = set(self.varspec.names) - set(self.images)
        if missing:
            raise ValueError(f"derivation lacks images for {sorted(missing)}")
        for name, img in self.images.items():
            if img.varspec != self.varspec:
                raise VarSpecMismatch(f"image of {name!r} over the wrong variables")

    @classmethod
    def zero(cls, varspec: VarSpec) -> PoissonDerivation:
        z = LaurentPoly.zero(varspec)
        return cls(varspec, {name: z for name in varspec.names})

    @classmethod
    def scaling(cls, varspec: VarSpec, weights: Mapping[str, Scalar]) -> PoissonDerivation:
        """g -> w_g * g on each generator (zero weight where omitted)."""
        images = {}
        for name in varspec.names:
            w = weights.get(name, 0)
            images[name] = LaurentPoly.monomial(varspec, {name: 1}, w)
        return cls(varspec, images)

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        acc = LaurentPoly.zero(self.varspec)
        for i, name in enumerate(self.varspec.names):
            img = self.images[name]
            if img.is_zero():
                continue
            d = f.derivative_index(i)
            if not d.is_zero():
                acc = acc + d * img
        return acc

    def __neg__(self) -> PoissonDerivation:
        return PoissonDerivation(self.varspec, {k: -v for k, v in self.images.items()})


def derivation_check(structure: PoissonStructure, deriv: PoissonDerivation) -> bool:
    """True iff D{g_i,g_j} = {D g_i, g_j} + {g_i, D g_j} on all generator pairs."""
    names = structure.varspec.names
    gens = {name: structure.generator(name) for name in names}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            lhs = deriv.apply(structure.entry(names.index(a), names.index(b)))
            rhs = structure.bracket(deriv.images[a], gens[b]) + structure.bracket(
                gens[a], deriv.images[b]
            )
            if lhs != rhs:
                return False
    return True


def _compat_residual(
    structure: PoissonStructure,
    alpha: PoissonDerivation,
    delta: PoissonDerivation,
    a: str,
    b: str,
) -> LaurentPoly:
    """Residual of the Ore compatibility condition on the generator pair (a, b).

    The condition ties delta to alpha:
    delta{a,b} - {delta a, b} - {a, delta b} = delta(a) alpha(b) - alpha(a) delta(b).
    """
    ga = structure.generator(a)
    gb = structure.generator(b)
    lhs = (
        delta.apply(structure.bracket(ga, gb))
        - structure.bracket(delta.images[a], gb)
        - structure.bracket(ga, delta.images[b])
    )
    rhs = delta.images[a] * alpha.images[b] - alpha.images[a] * delta.images[b]
    return lhs - rhs


def ore_extend(
    structure: PoissonStructure,
    name: str,
    alpha: PoissonDerivation,
    delta: Optional[PoissonDerivation] = None,
    invertible: bool = False,
) -> PoissonStructure:
    """Adjoin a variable x with {a, x} = alpha(a) x + delta(a).

    Requires alpha to be a Poisson derivation and (alpha, delta) to satisfy
    the compatibility condition, both checked on generator pairs (which is
    sufficient).  Failures report the offending pair and its residual.
    """
    if delta is None:
        delta = PoissonDerivation.zero(structure.varspec)
    if alpha.varspec != structure.varspec or delta.varspec != structure.varspec:
        raise VarSpecMismatch("derivations over the wrong variables")
    names = structure.varspec.names
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            ga, gb = structure.generator(a), structure.generator(b)
            res_a = (
                alpha.apply(structure.bracket(ga, gb))
                - structure.bracket(alpha.images[a], gb)
                - structure.bracket(ga, alpha.images[b])
            )
            if not res_a.is_zero():
                raise CompatibilityError(
                    f"alpha is not a Poisson derivation: residual on ({a}, {b})",
                    pair=(a, b),
                    residual=res_a,
                )
            res_d = _compat_residual(structure, alpha, delta, a, b)
            if not res_d.is_zero():
                raise CompatibilityError(
                    f"(alpha, delta) fail the compatibility condition on ({a}, {b})",
                    pair=(a, b),
                    residual=res_d,
                )
    new_vs = structure.varspec.extended(name, invertible)
    table: dict[tuple[int, int], LaurentPoly] = {
        key: entry.map_to(new_vs) for key, entry in structure.table.items()
    }
    x_index = len(new_vs) - 1
    x = LaurentPoly.variable(new_vs, name)
    for i, a in enumerate(names):
        entry = alpha.images[a].map_to(new_vs) * x + delta.images[a].map_to(new_vs)
        if not entry.is_zero():
            table[(i, x_index)] = entry
    return PoissonStructure(new_vs, table)


@dataclass(frozen=True)
class DoubleExtensionSpec:
    """Data (A; alpha, beta, c, u) for the two-variable extension.

    Requires alpha beta = beta alpha and {a, u} = (alpha + beta)(a) u.  When
    the eigenvalue d of u is supplied, additionally alpha(u) = d u,
    beta(u) = -d u and c + d != 0; then (c+d) y x + u is Poisson normal in
    the result.
    """

    base: PoissonStructure
    alpha: PoissonDerivation
    beta: PoissonDerivation
    c: Fraction
    u: LaurentPoly
    d: Optional[Fraction] = None
    y_name: str = "y"
    x_name: str = "x"

    def check(self) -> None:
        base, alpha, beta = self.base, self.alpha, self.beta
        for name in base.varspec.names:
            g = base.generator(name)
            if alpha.apply(beta.images[name]) != beta.apply(alpha.images[name]):
                raise CompatibilityError(
                    f"alpha and beta do not commute on {name!r}", pair=(name,)
                )
            lhs = base.bracket(g, self.u)
            rhs = (alpha.apply(g) + beta.apply(g)) * self.u
            if lhs != rhs:
                raise CompatibilityError(
                    f"{{a, u}} != (alpha+beta)(a) u on {name!r}",
                    pair=(name,),
                    residual=lhs - rhs,
                )
        if self.d is not None:
            if alpha.apply(self.u) != self.u.scale(self.d):
                raise CompatibilityError("alpha(u) != d u")
            if beta.apply(self.u) != self.u.scale(-self.d):
                raise CompatibilityError("beta(u) != -d u")
            if self.c + self.d == 0:
                raise CompatibilityError("c + d must be nonzero")


def double_extend(spec: DoubleExtensionSpec) -> PoissonStructure:
    """Adjoin y, x with {a,y} = alpha(a) y, {a,x} = beta(a) x, {y,x} = c y x + u.

    Realized as two single extensions: first y, then x against the extension
    of beta by beta(y) = c y together with the derivation sending y to u.
    """
    spec.check()
    step_y = ore_extend(spec.base, spec.y_name, spec.alpha)
    vs_y = step_y.varspec
    beta_images = {name: spec.beta.images[name].map_to(vs_y) for name in spec.base.varspec.names}
    beta_images[spec.y_name] = LaurentPoly.monomial(vs_y, {spec.y_name: 1}, spec.c)
    beta_prime = PoissonDerivation(vs_y, beta_images)
    zero_y = LaurentPoly.zero(vs_y)
    delta_images = {name: zero_y for name in spec.base.varspec.names}
    delta_images[spec.y_name] = spec.u.map_to(vs_y)
    delta = PoissonDerivation(vs_y, delta_images)
    return ore_extend(step_y, spec.x_name, beta_prime, delta)


def double_extension_normal_element(spec: DoubleExtensionSpec, result: PoissonStructure) -> LaurentPoly:
    """The element (c+d) y x + u inside the extension; requires d."""
    if spec.d is None:
        raise ValueError("the extension data does not carry the eigenvalue d")
    vs = result.varspec
    yx = LaurentPoly.monomial(vs, {spec.y_name: 1, spec.x_name: 1}, spec.c + spec.d)
    return yx + spec.u.map_to(vs)


def localize(structure: PoissonStructure, invert) -> PoissonStructure:
    """Allow negative exponents on the named variables; the table is unchanged.

    The biderivation formula already evaluates the localized bracket
    correctly on negative exponents; the quotient-rule identity it satisfies
    is property-tested rather than assumed.
    """
    new_vs = structure.varspec.with_inverted(invert)
    table = {key: entry.map_to(new_vs) for key, entry in structure.table.items()}
    return PoissonStructure(new_vs, table)


def is_poisson_normal(
    structure: PoissonStructure, z: LaurentPoly
) -> Optional[dict[str, LaurentPoly]]:
    """Eigen-map g -> gamma(g) with {g, z} = gamma(g) z, or None.

    Detection is by exact polynomial division of {g, z} by z for every
    generator g; z must be nonzero.
    """
    if z.is_zero():
        raise ValueError("z must be nonzero")
    out = {}
    for name in structure.varspec.names:
        quotient = divide_exact(structure.bracket(structure.generator(name), z), z)
        if quotient is None:
            return None
        out[name] = quotient
    return out
