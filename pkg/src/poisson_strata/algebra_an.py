"""The multiparameter Poisson algebra on y1, x1, ..., yn, xn.

Parameters are a skew-symmetric rational matrix gamma and two rational
vectors p, q with p_i != q_i.  The bracket table couples the i-th symplectic
pair through q_i plus a tail in the lower pairs,

    {x_i, y_i} = q_i y_i x_i + sum_{k<i} (q_k - p_k) y_k x_k,

while distinct pairs interact log-canonically.  The module also builds the
iterated two-variable extension presentation of the same algebra, the
weighted scaling action whose weight vectors have constant pair sums, the
attached matrix of log-canonical coefficients, and the confluent rewriting
systems presenting the quotients by admissible-set ideals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .admissible import AdmissibleSet
from .exact_poly import (
    LaurentPoly,
    ReductionRule,
    ReductionSystem,
    Scalar,
    VarSpec,
    reduce_poly,
)
from .poisson_core import (
    DoubleExtensionSpec,
    PoissonDerivation,
    PoissonStructure,
    double_extend,
)


def _fraction_vector(values: Sequence[Scalar]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


def _fraction_matrix(rows: Sequence[Sequence[Scalar]]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


@dataclass(frozen=True)
class PoissonParams:
    """n, the skew-symmetric coupling matrix, and the two weight vectors."""

    n: int
    gamma: tuple[tuple[Fraction, ...], ...]
    p: tuple[Fraction, ...]
    q: tuple[Fraction, ...]

    @classmethod
    def make(cls, n: int, gamma, p, q) -> PoissonParams:
        return cls(n, _fraction_matrix(gamma), _fraction_vector(p), _fraction_vector(q))

    def __post_init__(self):
        n = self.n
        if n < 0:
            raise ValueError("n must be nonnegative")
        if len(self.gamma) != n or any(len(row) != n for row in self.gamma):
            raise ValueError("gamma must be an n x n matrix")
        if len(self.p) != n or len(self.q) != n:
            raise ValueError("p and q must have length n")
        for i in range(n):
            for j in range(n):
                if self.gamma[i][j] != -self.gamma[j][i]:
                    raise ValueError(f"gamma is not skew-symmetric at ({i + 1}, {j + 1})")
        for i in range(n):
            if self.p[i] == self.q[i]:
                raise ValueError(f"p_{i + 1} and q_{i + 1} must differ")

    def truncated(self, m: int) -> PoissonParams:
        """The parameters of the subalgebra on the first m pairs."""
        return PoissonParams(
            m,
            tuple(row[:m] for row in self.gamma[:m]),
            self.p[:m],
            self.q[:m],
        )


def an_varspec(n: int) -> VarSpec:
    names = []
    for i in range(1, n + 1):
        names.append(f"y{i}")
        names.append(f"x{i}")
    return VarSpec(tuple(names))


def omega(params: PoissonParams, i: int, varspec: VarSpec | None = None) -> LaurentPoly:
    """The central-tail element: sum over k <= i of (q_k - p_k) y_k x_k.

    Index 0 gives the zero polynomial, so index-uniform callers need no
    special case.
    """
    if not 0 <= i <= params.n:
        raise IndexError(f"index {i} out of range 0..{params.n}")
    vs = varspec if varspec is not None else an_varspec(params.n)
    acc = LaurentPoly.zero(vs)
    for k in range(1, i + 1):
        acc = acc + LaurentPoly.monomial(
            vs, {f"y{k}": 1, f"x{k}": 1}, params.q[k - 1] - params.p[k - 1]
        )
    return acc


def build_an(params: PoissonParams) -> PoissonStructure:
    """The validated Poisson structure with the defining bracket table."""
    n = params.n
    vs = an_varspec(n)
    gamma, p, q = params.gamma, params.p, params.q

    def mono(coeff: Fraction, *names: str) -> LaurentPoly:
        return LaurentPoly.monomial(vs, {name: 1 for name in names}, coeff)

    table: dict[tuple[int, int], LaurentPoly] = {}

    def put(a: int, b: int, value: LaurentPoly):
        if not value.is_zero():
            table[(a, b)] = value

    for i in range(1, n + 1):
        yi, xi = 2 * i - 2, 2 * i - 1
        put(yi, xi, mono(-q[i - 1], f"y{i}", f"x{i}") - omega(params, i - 1, vs))
        for j in range(i + 1, n + 1):
            yj, xj = 2 * j - 2, 2 * j - 1
            gij = gamma[i - 1][j - 1]
            put(yi, yj, mono(gij, f"y{i}", f"y{j}"))
            put(yi, xj, mono(-(q[i - 1] + gij), f"y{i}", f"x{j}"))
            put(xi, yj, mono(p[j - 1] - gij, f"y{j}", f"x{i}"))
            put(xi, xj, mono(q[i - 1] - p[j - 1] + gij, f"x{i}", f"x{j}"))
    return PoissonStructure(vs, table).validate()


def verify_omega_identities(params: PoissonParams) -> dict:
    """Check the scaling brackets of the tail elements and their recursions.

    Verifies, symbolically: {y_i, O_j} = -q_i y_i O_j and {x_i, O_j} =
    q_i x_i O_j for i <= j, the same with p_i for i > j, {O_i, O_j} = 0, and
    the two solvings of the defining relation
    O_{i-1} = {x_i, y_i} - q_i y_i x_i and O_i = {x_i, y_i} - p_i y_i x_i.
    """
    structure = build_an(params)
    vs = structure.varspec
    n = params.n
    omegas = [omega(params, i, vs) for i in range(n + 1)]
    failures = []
    checked = 0

    def expect(cond: bool, label: str):
        nonlocal checked
        checked += 1
        if not cond:
            failures.append(label)

    for i in range(1, n + 1):
        yi = structure.generator(f"y{i}")
        xi = structure.generator(f"x{i}")
        for j in range(0, n + 1):
            rate = params.q[i - 1] if i <= j else params.p[i - 1]
            expect(
                structure.bracket(yi, omegas[j]) == (yi * omegas[j]).scale(-rate),
                f"{{y{i}, O{j}}}",
            )
            expect(
                structure.bracket(xi, omegas[j]) == (xi * omegas[j]).scale(rate),
                f"{{x{i}, O{j}}}",
            )
    for i in range(n + 1):
        for j in range(n + 1):
            expect(structure.bracket(omegas[i], omegas[j]).is_zero(), f"{{O{i}, O{j}}}")
    for i in range(1, n + 1):
        yx = LaurentPoly.monomial(vs, {f"y{i}": 1, f"x{i}": 1})
        xy_bracket = structure.bracket(structure.generator(f"x{i}"), structure.generator(f"y{i}"))
        expect(omegas[i - 1] == xy_bracket - yx.scale(params.q[i - 1]), f"O{i - 1} recursion")
        expect(omegas[i] == xy_bracket - yx.scale(params.p[i - 1]), f"O{i} recursion")
    return {"ok": not failures, "identities_checked": checked, "failures": failures}


# -- iterated presentation -------------------------------------------------


@dataclass(frozen=True)
class IteratedPresentation:
    """The chain of two-variable extensions rebuilding the algebra level by level.

    `specs[j-1]` extends the level-(j-1) structure by y_j, x_j; `structures`
    holds the cumulative results, `structures[j]` being the rebuilt level-j
    algebra (index 0 is the scalar base).
    """

    params: PoissonParams
    specs: tuple[DoubleExtensionSpec, ...]
    structures: tuple[PoissonStructure, ...]


def iterated_presentation(params: PoissonParams) -> IteratedPresentation:
    n = params.n
    gamma, p, q = params.gamma, params.p, params.q
    structure = PoissonStructure(VarSpec(()), {})
    specs = []
    structures = [structure]
    for j in range(1, n + 1):
        vs = structure.varspec
        alpha_w: dict[str, Fraction] = {}
        beta_w: dict[str, Fraction] = {}
        for i in range(1, j):
            gij = gamma[i - 1][j - 1]
            alpha_w[f"y{i}"] = gij
            alpha_w[f"x{i}"] = p[j - 1] - gij
            beta_w[f"y{i}"] = -(q[i - 1] + gij)
            beta_w[f"x{i}"] = q[i - 1] - p[j - 1] + gij
        spec = DoubleExtensionSpec(
            base=structure,
            alpha=PoissonDerivation.scaling(vs, alpha_w),
            beta=PoissonDerivation.scaling(vs, beta_w),
            c=-q[j - 1],
            u=-omega(params, j - 1, vs),
            d=p[j - 1],
            y_name=f"y{j}",
            x_name=f"x{j}",
        )
        specs.append(spec)
        structure = double_extend(spec)
        structures.append(structure)
    return IteratedPresentation(params, tuple(specs), tuple(structures))


def consistency_check(params: PoissonParams) -> dict:
    """Compare the level-by-level rebuild against the direct table, entry-exact."""
    presentation = iterated_presentation(params)
    for j in range(1, params.n + 1):
        direct = build_an(params.truncated(j))
        rebuilt = presentation.structures[j]
        names = direct.varspec.names
        for a in range(len(names)):
            for b in range(a + 1, len(names)):
                if direct.entry(a, b) != rebuilt.entry(a, b):
                    return {
                        "ok": False,
                        "level": j,
                        "entry": (names[a], names[b]),
                    }
    return {"ok": True, "levels": params.n}


# -- the weighted scaling action --------------------------------------------


KElement = tuple[Fraction, ...]


def k_element(values: Sequence[Scalar]) -> KElement:
    return _fraction_vector(values)


def k_contains(n: int, h: Sequence[Scalar]) -> bool:
    """Membership: all pair sums h_{2i-1} + h_{2i} agree."""
    h = _fraction_vector(h)
    if len(h) != 2 * n:
        return False
    sums = {h[2 * i] + h[2 * i + 1] for i in range(n)}
    return len(sums) <= 1


def k_derivation(params: PoissonParams, h: Sequence[Scalar]) -> PoissonDerivation:
    h = _fraction_vector(h)
    if not k_contains(params.n, h):
        raise ValueError(f"{h} violates the constant pair-sum condition")
    vs = an_varspec(params.n)
    weights = {}
    for i in range(1, params.n + 1):
        weights[f"y{i}"] = h[2 * i - 2]
        weights[f"x{i}"] = h[2 * i - 1]
    return PoissonDerivation.scaling(vs, weights)


def k_action(params: PoissonParams, h: Sequence[Scalar], f: LaurentPoly) -> LaurentPoly:
    """Apply the scaling derivation of the weight vector h to f."""
    return k_derivation(params, h).apply(f)


def k_basis(n: int) -> list[KElement]:
    """A basis of the weight-vector group: the all-pairs (1,0) vector plus
    the n difference vectors supported on one pair."""
    basis = [k_element([1, 0] * n)]
    for i in range(n):
        vec = [0] * (2 * n)
        vec[2 * i] = 1
        vec[2 * i + 1] = -1
        basis.append(k_element(vec))
    return basis


def level_eigen_elements(params: PoissonParams) -> tuple[KElement, KElement]:
    """The two weight vectors replicating the top-level extension derivations.

    The first acts as alpha_n on the lower pairs and fixes y_n; the second
    acts as beta_n on the lower pairs and on y_n, and scales x_n by
    q_n - p_n.
    """
    n = params.n
    if n < 1:
        raise ValueError("needs at least one pair")
    gamma, p, q = params.gamma, params.p, params.q
    f_vec: list[Fraction] = []
    g_vec: list[Fraction] = []
    for i in range(1, n):
        gin = gamma[i - 1][n - 1]
        f_vec += [gin, p[n - 1] - gin]
        g_vec += [-q[i - 1] - gin, q[i - 1] - p[n - 1] + gin]
    f_vec += [Fraction(1), p[n - 1] - 1]
    g_vec += [-q[n - 1], q[n - 1] - p[n - 1]]
    return tuple(f_vec), tuple(g_vec)


def verify_level_eigen_elements(params: PoissonParams) -> dict:
    n = params.n
    f_vec, g_vec = level_eigen_elements(params)
    failures = []
    if not k_contains(n, f_vec):
        failures.append("first vector not in the weight group")
    if not k_contains(n, g_vec):
        failures.append("second vector not in the weight group")
    presentation = iterated_presentation(params)
    spec = presentation.specs[n - 1]
    vs = an_varspec(n)
    f_der = k_derivation(params, f_vec)
    g_der = k_derivation(params, g_vec)
    for name in spec.base.varspec.names:
        g = LaurentPoly.variable(vs, name)
        if f_der.apply(g) != spec.alpha.images[name].map_to(vs):
            failures.append(f"first vector disagrees with alpha on {name}")
        if g_der.apply(g) != spec.beta.images[name].map_to(vs):
            failures.append(f"second vector disagrees with beta on {name}")
    yn = LaurentPoly.variable(vs, f"y{n}")
    xn = LaurentPoly.variable(vs, f"x{n}")
    if f_der.apply(yn) != yn:
        failures.append("first vector does not fix y_n")
    if g_der.apply(yn) != yn.scale(-params.q[n - 1]):
        failures.append("second vector disagrees with the extension on y_n")
    if g_der.apply(xn) != xn.scale(params.q[n - 1] - params.p[n - 1]):
        failures.append("second vector does not scale x_n by q_n - p_n")
    return {"ok": not failures, "failures": failures}


def log_canonical_matrix(params: PoissonParams) -> tuple[tuple[Fraction, ...], ...]:
    """The attached 2n x 2n skew-symmetric coefficient matrix.

    Entrywise it is the bracket table with the lower-pair tails dropped, so
    it defines the log-canonical Poisson algebra the stratum maps land in.
    """
    n = params.n
    gamma, p, q = params.gamma, params.p, params.q
    size = 2 * n
    m = [[Fraction(0)] * size for _ in range(size)]

    def put(a: int, b: int, value: Fraction):
        m[a][b] = value
        m[b][a] = -value

    for i in range(1, n + 1):
        yi, xi = 2 * i - 2, 2 * i - 1
        put(yi, xi, -q[i - 1])
        for j in range(i + 1, n + 1):
            yj, xj = 2 * j - 2, 2 * j - 1
            gij = gamma[i - 1][j - 1]
            put(yi, yj, gij)
            put(yi, xj, -(q[i - 1] + gij))
            put(xi, yj, p[j - 1] - gij)
            put(xi, xj, q[i - 1] - p[j - 1] + gij)
    return tuple(tuple(row) for row in m)


def quotient_system(params: PoissonParams, t_set: AdmissibleSet) -> ReductionSystem:
    """The confluent rewriting system presenting the quotient by an admissible set.

    Killed generators rewrite to zero; a tail element in the set with both of
    its generators surviving solves to a pair rule y_i x_i -> expansion of
    the lower tail, whose right side is itself reduced against the rules of
    the lower indices so every replacement is in normal form.
    """
    if t_set.n != params.n:
        raise ValueError("admissible set and parameters disagree on n")
    vs = an_varspec(params.n)
    width = len(vs)
    rules: list[ReductionRule] = []
    zero = LaurentPoly.zero(vs)

    def unit_vec(name: str) -> tuple[int, ...]:
        vec = [0] * width
        vec[vs.index(name)] = 1
        return tuple(vec)

    for i in range(1, params.n + 1):
        if t_set.y_in[i - 1]:
            rules.append(ReductionRule(unit_vec(f"y{i}"), zero))
        if t_set.x_in[i - 1]:
            rules.append(ReductionRule(unit_vec(f"x{i}"), zero))
        if t_set.omega_in[i - 1] and not t_set.y_in[i - 1] and not t_set.x_in[i - 1]:
            lead = [0] * width
            lead[vs.index(f"y{i}")] = 1
            lead[vs.index(f"x{i}")] = 1
            rhs = omega(params, i - 1, vs).scale(-1 / (params.q[i - 1] - params.p[i - 1]))
            rhs = reduce_poly(rhs, ReductionSystem(vs, tuple(rules)))
            rules.append(ReductionRule(tuple(lead), rhs))
    return ReductionSystem(vs, tuple(rules))


def random_params(n: int, rng: random.Random) -> PoissonParams:
    """Small-integer parameters with the required skew symmetry and p_i != q_i."""
    gamma = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            g = Fraction(rng.randint(-2, 2))
            gamma[i][j] = g
            gamma[j][i] = -g
    p = []
    q = []
    for _ in range(n):
        pi = rng.randint(-3, 3)
        qi = rng.randint(-3, 3)
        while qi == pi:
            qi = rng.randint(-3, 3)
        p.append(Fraction(pi))
        q.append(Fraction(qi))
    return PoissonParams(n, tuple(tuple(row) for row in gamma), tuple(p), tuple(q))
