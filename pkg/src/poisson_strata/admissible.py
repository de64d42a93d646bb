"""Admissible-set combinatorics and the stratification they index.

An admissible set is a subset of {y_i, x_i, Omega_i : i = 1..n} closed under
the biconditional: a generator of the i-th pair belongs to the set exactly
when both the i-th and (i-1)-th tail elements do (the i = 1 case reads
against Omega_1 alone).  These sets index the strata of the Poisson prime
spectrum; this module enumerates them, computes their derived data (the
divisibility-avoidance monomials of the quotient basis, the length, the
surviving normal elements, the killed target generators), estimates quotient
growth by exact monomial counting, and lays the sets out as a poset.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable


@dataclass(frozen=True)
class AdmissibleSet:
    """Membership triple over indices 1..n."""

    n: int
    y_in: tuple[bool, ...]
    x_in: tuple[bool, ...]
    omega_in: tuple[bool, ...]

    def __post_init__(self):
        if not (len(self.y_in) == len(self.x_in) == len(self.omega_in) == self.n):
            raise ValueError("membership vectors must have length n")
        if not _satisfies_conditions(self.y_in, self.x_in, self.omega_in):
            raise ValueError(f"{self.member_names()} is not admissible")

    @classmethod
    def from_names(cls, n: int, names: Iterable[str]) -> AdmissibleSet:
        y = [False] * n
        x = [False] * n
        o = [False] * n
        for name in names:
            kind, idx = parse_member_name(name)
            if not 1 <= idx <= n:
                raise ValueError(f"member {name!r} out of range for n={n}")
            {"y": y, "x": x, "Omega": o}[kind][idx - 1] = True
        return cls(n, tuple(y), tuple(x), tuple(o))

    def member_names(self) -> tuple[str, ...]:
        out = []
        for i in range(1, self.n + 1):
            if self.y_in[i - 1]:
                out.append(f"y{i}")
            if self.x_in[i - 1]:
                out.append(f"x{i}")
            if self.omega_in[i - 1]:
                out.append(f"Omega{i}")
        return tuple(out)

    def members(self) -> frozenset[str]:
        return frozenset(self.member_names())

    def is_subset_of(self, other: AdmissibleSet) -> bool:
        return self.n == other.n and self.members() <= other.members()

    def sort_key(self):
        return (self.omega_in, self.y_in, self.x_in)


def parse_member_name(name: str) -> tuple[str, int]:
    for prefix in ("Omega", "y", "x"):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return prefix, int(name[len(prefix):])
    raise ValueError(f"not a generator-set member name: {name!r}")


def _satisfies_conditions(y, x, o) -> bool:
    n = len(y)
    for i in range(1, n + 1):
        pair_in = y[i - 1] or x[i - 1]
        if i == 1:
            if pair_in != o[0]:
                return False
        else:
            if pair_in != (o[i - 1] and o[i - 2]):
                return False
    return True


def enumerate_admissible(n: int) -> list[AdmissibleSet]:
    """All admissible sets, in the canonical (omega, y, x bit-vector) order.

    Built by level recursion: a level-i set extends a level-(i-1) set either
    by nothing, by the tail element alone (only when the previous tail is
    absent), or by the tail element with one or both pair generators (only
    when the previous tail is present; at i = 1 that reads as always).
    """
    states: list[tuple[tuple[bool, ...], tuple[bool, ...], tuple[bool, ...]]] = [((), (), ())]
    for i in range(1, n + 1):
        new_states = []
        for y, x, o in states:
            prev_omega = True if i == 1 else o[-1]
            new_states.append((y + (False,), x + (False,), o + (False,)))
            if not prev_omega:
                new_states.append((y + (False,), x + (False,), o + (True,)))
            else:
                new_states.append((y + (True,), x + (False,), o + (True,)))
                new_states.append((y + (False,), x + (True,), o + (True,)))
                new_states.append((y + (True,), x + (True,), o + (True,)))
        states = new_states
    sets = [AdmissibleSet(n, y, x, o) for y, x, o in states]
    sets.sort(key=AdmissibleSet.sort_key)
    return sets


def brute_force_admissible(n: int) -> list[AdmissibleSet]:
    """Filter of all 2^(3n) membership triples; the enumeration cross-check."""
    out = []
    bools = [False, True]
    for y in product(bools, repeat=n):
        for x in product(bools, repeat=n):
            for o in product(bools, repeat=n):
                if _satisfies_conditions(y, x, o):
                    out.append(AdmissibleSet(n, y, x, o))
    out.sort(key=AdmissibleSet.sort_key)
    return out


@dataclass(frozen=True)
class DerivedSets:
    """The combinatorial companions of one admissible set.

    avoid_monomials: monomials (as name tuples) no basis monomial of the
        quotient may be divisible by.
    length_members: the members counted by length(T).
    normal_survivors: elements that stay Poisson normal and nonzero in the
        quotient; they generate the multiplicative set used to localize.
    y_survivors: the y-generators outside the set.
    eta: the target-side generators killed by the stratum maps.
    """

    avoid_monomials: tuple[tuple[str, ...], ...]
    length_members: tuple[str, ...]
    normal_survivors: tuple[str, ...]
    y_survivors: tuple[str, ...]
    eta: tuple[str, ...]


def derived_sets(t_set: AdmissibleSet) -> DerivedSets:
    n = t_set.n
    y, x, o = t_set.y_in, t_set.x_in, t_set.omega_in
    avoid: list[tuple[str, ...]] = []
    length_members: list[str] = []
    normal: list[str] = []
    y_surv: list[str] = []
    eta: list[str] = []
    for i in range(1, n + 1):
        pair_only = o[i - 1] and not y[i - 1] and not x[i - 1]
        if y[i - 1]:
            avoid.append((f"y{i}",))
            length_members.append(f"y{i}")
            eta.append(f"Y{i}")
        if x[i - 1]:
            avoid.append((f"x{i}",))
            length_members.append(f"x{i}")
            eta.append(f"X{i}")
        if pair_only:
            avoid.append((f"y{i}", f"x{i}"))
            length_members.append(f"Omega{i}")
            eta.append(f"X{i}")
        if not y[i - 1]:
            y_surv.append(f"y{i}")
        # Membership in the surviving normal set: the first pair reads off
        # plain absence; higher pairs hinge on the previous tail element, and
        # the first tail element itself is never a member.
        if i == 1:
            if not y[0]:
                normal.append("y1")
            if not x[0]:
                normal.append("x1")
        else:
            if not o[i - 2] and not o[i - 1]:
                normal.append(f"Omega{i}")
            if o[i - 2] and not y[i - 1]:
                normal.append(f"y{i}")
            if o[i - 2] and not x[i - 1]:
                normal.append(f"x{i}")
    return DerivedSets(
        avoid_monomials=tuple(avoid),
        length_members=tuple(length_members),
        normal_survivors=tuple(normal),
        y_survivors=tuple(y_surv),
        eta=tuple(eta),
    )


def length(t_set: AdmissibleSet) -> int:
    return len(derived_sets(t_set).length_members)


def gk_dimension(t_set: AdmissibleSet) -> int:
    """Growth degree of the quotient: 2n minus the length."""
    return 2 * t_set.n - length(t_set)


def _count_series(t_set: AdmissibleSet, max_degree: int) -> list[int]:
    """Cumulative counts of basis monomials of degree <= d, d = 0..max_degree.

    Basis monomials avoid divisibility by the avoidance monomials: killed
    variables do not occur, and a constrained pair never has both exponents
    positive.  Counting multiplies the per-variable generating series.
    """
    sets = derived_sets(t_set)
    killed = {m[0] for m in sets.avoid_monomials if len(m) == 1}
    pairs = sum(1 for m in sets.avoid_monomials if len(m) == 2)
    free = 2 * t_set.n - len(killed) - 2 * pairs

    def mul_series(a: list[int], b: list[int]) -> list[int]:
        out = [0] * (max_degree + 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if i + j > max_degree:
                    break
                out[i + j] += ai * bj
        return out

    geometric = [1] * (max_degree + 1)
    pair_series = [1] + [2] * max_degree
    series = [1] + [0] * max_degree
    for _ in range(free):
        series = mul_series(series, geometric)
    for _ in range(pairs):
        series = mul_series(series, pair_series)
    series = mul_series(series, geometric)  # cumulative sum
    return series


def growth_check(t_set: AdmissibleSet, max_degree: int = 12) -> dict:
    """Assert the monomial count is a polynomial of degree 2n - length.

    Exact finite differences of the cumulative counts; the transient of the
    counting series ends at the number of constrained pairs, so differences
    are taken on the tail from there.
    """
    counts = _count_series(t_set, max_degree)
    sets = derived_sets(t_set)
    pairs = sum(1 for m in sets.avoid_monomials if len(m) == 2)
    tail = counts[pairs:]
    expected = gk_dimension(t_set)
    seq = list(tail)
    degree = None
    for k in range(len(seq)):
        if all(v == 0 for v in seq):
            degree = k - 1
            break
        if len(set(seq)) == 1:
            degree = k
            break
        seq = [b - a for a, b in zip(seq, seq[1:])]
    ok = degree == expected
    return {
        "ok": ok,
        "expected_degree": expected,
        "measured_degree": degree,
        "counts": counts,
    }


def eta_injectivity(n: int) -> bool:
    """Distinct admissible sets have distinct killed-target sets."""
    sets = enumerate_admissible(n)
    images = {frozenset(derived_sets(t).eta) for t in sets}
    return len(images) == len(sets)


@dataclass(frozen=True)
class StratumLabel:
    t_set: AdmissibleSet
    eta: tuple[str, ...]
    length: int
    gk_dim: int


def stratum_poset(n: int) -> tuple[list[StratumLabel], list[tuple[int, int]]]:
    """Nodes in canonical order plus the covering edges of strict containment."""
    sets = enumerate_admissible(n)
    labels = [
        StratumLabel(t, derived_sets(t).eta, length(t), gk_dimension(t)) for t in sets
    ]
    members = [t.members() for t in sets]
    edges = []
    for a in range(len(sets)):
        for b in range(len(sets)):
            if a == b or not members[a] < members[b]:
                continue
            if any(
                members[a] < members[c] < members[b]
                for c in range(len(sets))
                if c not in (a, b)
            ):
                continue
            edges.append((a, b))
    return labels, edges


def poset_json(n: int) -> dict:
    labels, edges = stratum_poset(n)
    return {
        "n": n,
        "nodes": [
            {
                "members": list(label.t_set.member_names()),
                "eta": list(label.eta),
                "length": label.length,
                "gk_dim": label.gk_dim,
            }
            for label in labels
        ],
        "edges": [list(e) for e in edges],
    }


def poset_dot(n: int) -> str:
    labels, edges = stratum_poset(n)
    lines = ["digraph strata {", "    rankdir=BT;"]
    for k, label in enumerate(labels):
        name = ",".join(label.t_set.member_names()) or "empty"
        lines.append(
            f'    n{k} [label="{{{name}}}\\ngk={label.gk_dim}"];'
        )
    for a, b in edges:
        lines.append(f"    n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines)
