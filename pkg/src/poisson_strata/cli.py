"""Command-line entry point: config ingestion, dispatch, report emission.

Configs are JSON with every rational written as a string "a/b" (plain
integers are accepted; floats are rejected to keep the arithmetic exact).
All commands print JSON to stdout; verification failures exit nonzero with a
machine-readable error object.  The environment variable
POISSON_STRATA_STEP_BUDGET caps the rewrite step budget.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import admissible as adm
from .algebra_an import (
    PoissonParams,
    an_varspec,
    build_an,
    consistency_check,
    k_basis,
    k_derivation,
    log_canonical_matrix,
    omega,
    quotient_system,
    verify_omega_identities,
)
from .algebra_kn import (
    NCElement,
    QuantumParams,
    StepBudgetExceeded,
    commutation_matrix,
    format_nc,
    nc_multiply,
)
from .correspondence import (
    GroupContainsMinusOne,
    default_weights,
    group_character,
    stratification_report,
    verify_poisson_stratum_map,
    verify_quantum_stratum_map,
)
from .exact_poly import (
    DEFAULT_STEP_BUDGET,
    LaurentPoly,
    ReductionBudgetExceeded,
    format_poly,
    reduce_poly,
)
from .parser import EvalError, ParseError, eval_poisson, eval_quantum, parse_expr

ENV_STEP_BUDGET = "POISSON_STRATA_STEP_BUDGET"


class ConfigError(ValueError):
    pass


def _rational(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ConfigError(f"rationals must be strings or integers, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad rational literal {value!r}: {exc}") from None
    raise ConfigError(f"rationals must be strings or integers, got {value!r}")


@dataclass
class Config:
    mode: str
    poisson: Optional[PoissonParams]
    quantum: Optional[QuantumParams]
    weights: Optional[dict[int, Fraction]]
    admissible_literal: Optional[adm.AdmissibleSet]


def load_config(path: str) -> Config:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    mode = raw.get("mode")
    if mode not in ("poisson", "quantum", "paired"):
        raise ConfigError("mode must be one of poisson, quantum, paired")
    try:
        n = int(raw["n"])
        gamma = [[_rational(v) for v in row] for row in raw["gamma"]]
        p = [_rational(v) for v in raw["p"]]
        q = [_rational(v) for v in raw["q"]]
    except KeyError as exc:
        raise ConfigError(f"config is missing {exc.args[0]!r}") from None
    poisson = quantum = None
    try:
        if mode == "poisson":
            poisson = PoissonParams(n, tuple(map(tuple, gamma)), tuple(p), tuple(q))
        else:
            quantum = QuantumParams(n, tuple(map(tuple, gamma)), tuple(p), tuple(q))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    weights = None
    if raw.get("phi_weights") is not None:
        weights = {}
        for key, value in raw["phi_weights"].items():
            if not str(key).isdigit():
                raise ConfigError(f"weight keys must be primes, got {key!r}")
            weights[int(key)] = _rational(value)
    literal = None
    if raw.get("admissible") is not None:
        try:
            literal = adm.AdmissibleSet.from_names(n, raw["admissible"])
        except ValueError as exc:
            raise ConfigError(f"bad admissible literal: {exc}") from None
    if mode == "paired":
        character_params = quantum
        if weights is None:
            weights = default_weights(character_params)
        poisson = group_character(character_params, weights).induced
    return Config(mode, poisson, quantum, weights, literal)


def _step_budget() -> int:
    raw = os.environ.get(ENV_STEP_BUDGET)
    if raw is None:
        return DEFAULT_STEP_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_STEP_BUDGET} must be an integer, got {raw!r}")
    if value <= 0:
        raise ConfigError(f"{ENV_STEP_BUDGET} must be positive")
    return value


def _matrix_strings(matrix) -> list[list[str]]:
    return [[str(v) for v in row] for row in matrix]


# -- verification suites -----------------------------------------------------


def _require_poisson(config: Config) -> PoissonParams:
    if config.poisson is None:
        raise ConfigError("this command needs poisson parameters (mode poisson or paired)")
    return config.poisson


def _require_quantum(config: Config) -> QuantumParams:
    if config.quantum is None:
        raise ConfigError("this command needs quantum parameters (mode quantum or paired)")
    return config.quantum


def _random_poly(vs, rng: random.Random, max_degree=3, max_terms=3) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        mono = [0] * len(vs)
        for _ in range(rng.randint(0, max_degree)):
            mono[rng.randrange(len(vs))] += 1
        terms[tuple(mono)] = Fraction(rng.randint(-4, 4))
    return LaurentPoly(vs, terms)


def suite_jacobi(config: Config) -> dict:
    params = _require_poisson(config)
    structure = build_an(params)
    vs = structure.varspec
    rng = random.Random(7)
    ok = structure.jacobi_check()
    details = {"generator_triples": ok}
    random_ok = True
    for _ in range(50):
        f, g, h = (_random_poly(vs, rng) for _ in range(3))
        if not structure.bracket(f, f).is_zero():
            random_ok = False
        if structure.bracket(f * g, h) != f * structure.bracket(g, h) + g * structure.bracket(f, h):
            random_ok = False
        if not structure.jacobiator(f, g, h).is_zero():
            random_ok = False
    details["random_antisymmetry_leibniz_jacobi"] = random_ok
    report = consistency_check(params)
    details["iterated_rebuild"] = report["ok"]
    return {"suite": "jacobi", "ok": ok and random_ok and report["ok"], "details": details}


def suite_omega_identities(config: Config) -> dict:
    params = _require_poisson(config)
    report = verify_omega_identities(params)
    return {"suite": "lemma2.3", "ok": report["ok"], "details": report}


def suite_confluence(config: Config, trials: int = 1000) -> dict:
    params = _require_poisson(config)
    vs = an_varspec(params.n)
    budget = _step_budget()
    rng = random.Random(11)
    checked = 0
    for t_set in adm.enumerate_admissible(params.n):
        system = quotient_system(params, t_set)
        for _ in range(trials):
            f = _random_poly(vs, rng)
            base = reduce_poly(f, system, budget)
            for _ in range(2):
                other = reduce_poly(f, system, budget, rng=rng)
                if other != base:
                    return {
                        "suite": "confluence",
                        "ok": False,
                        "details": {"set": list(t_set.member_names()), "input": format_poly(f)},
                    }
            checked += 1
    return {"suite": "confluence", "ok": True, "details": {"reductions": checked}}


def suite_k_stability(config: Config) -> dict:
    params = _require_poisson(config)
    structure = build_an(params)
    vs = structure.varspec
    budget = _step_budget()
    basis = k_basis(params.n)
    failures = []
    for t_set in adm.enumerate_admissible(params.n):
        system = quotient_system(params, t_set)
        members = []
        for name in t_set.member_names():
            if name.startswith("Omega"):
                members.append((name, omega(params, int(name[5:]), vs)))
            else:
                members.append((name, LaurentPoly.variable(vs, name)))
        for name, poly in members:
            for g_name in vs.names:
                image = structure.bracket(poly, structure.generator(g_name))
                if not reduce_poly(image, system, budget).is_zero():
                    failures.append(f"{t_set.member_names()}: bracket({name}, {g_name})")
            for h in basis:
                if not reduce_poly(k_derivation(params, h).apply(poly), system, budget).is_zero():
                    failures.append(f"{t_set.member_names()}: weight action on {name}")
    return {"suite": "kstable", "ok": not failures, "details": {"failures": failures}}


def suite_associativity(config: Config, trials: int = 1000) -> dict:
    params = _require_quantum(config)
    rng = random.Random(13)
    budget = _step_budget()
    width = 2 * params.n

    def random_monomial() -> NCElement:
        mono = [0] * width
        for _ in range(rng.randint(0, 4)):
            mono[rng.randrange(width)] += 1
        return NCElement(params.n, {tuple(mono): Fraction(rng.randint(1, 4))})

    for _ in range(trials):
        f, g, h = random_monomial(), random_monomial(), random_monomial()
        left = nc_multiply(params, nc_multiply(params, f, g, budget), h, budget)
        right = nc_multiply(params, f, nc_multiply(params, g, h, budget), budget)
        if left != right:
            return {"suite": "associativity", "ok": False, "details": {"triple": repr((f, g, h))}}
    return {"suite": "associativity", "ok": True, "details": {"triples": trials}}


def suite_psi(config: Config) -> dict:
    params = _require_poisson(config)
    results = []
    ok = True
    for t_set in adm.enumerate_admissible(params.n):
        report = verify_poisson_stratum_map(params, t_set)
        ok = ok and report["ok"]
        results.append({"members": list(t_set.member_names()), "ok": report["ok"]})
    return {"suite": "psi", "ok": ok, "details": {"strata": results}}


def suite_upsilon(config: Config) -> dict:
    params = _require_quantum(config)
    results = []
    ok = True
    for t_set in adm.enumerate_admissible(params.n):
        report = verify_quantum_stratum_map(params, t_set)
        ok = ok and report["ok"]
        results.append({"members": list(t_set.member_names()), "ok": report["ok"]})
    return {"suite": "upsilon", "ok": ok, "details": {"strata": results}}


SUITES = {
    "jacobi": suite_jacobi,
    "lemma2.3": suite_omega_identities,
    "confluence": suite_confluence,
    "kstable": suite_k_stability,
    "associativity": suite_associativity,
    "psi": suite_psi,
    "upsilon": suite_upsilon,
}


def run_suite(config: Config, name: str) -> dict:
    if name == "all":
        reports = []
        for suite_name, fn in SUITES.items():
            try:
                reports.append(fn(config))
            except ConfigError as exc:
                reports.append({"suite": suite_name, "ok": None, "skipped": str(exc)})
        ran = [r for r in reports if r["ok"] is not None]
        return {
            "suite": "all",
            "ok": all(r["ok"] for r in ran),
            "summary": [{"suite": r["suite"], "ok": r["ok"]} for r in reports],
            "reports": reports,
        }
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or all")
    return SUITES[name](config)


# -- commands ------------------------------------------------------------------


def cmd_bracket(config: Config, args) -> dict:
    params = _require_poisson(config)
    structure = build_an(params)
    left = eval_poisson(parse_expr(args.left), structure, params)
    right = eval_poisson(parse_expr(args.right), structure, params)
    return {"result": format_poly(structure.bracket(left, right))}


def cmd_nf(config: Config, args) -> dict:
    params = _require_quantum(config)
    value = eval_quantum(parse_expr(args.expr), params, _step_budget())
    return {"result": format_nc(value)}


def cmd_admissible(config: Config, args) -> dict | str:
    n = config.poisson.n if config.poisson is not None else config.quantum.n
    if args.poset:
        if args.dot:
            return adm.poset_dot(n)
        return adm.poset_json(n)
    sets = adm.enumerate_admissible(n)
    if args.list:
        return {
            "n": n,
            "count": len(sets),
            "sets": [list(t.member_names()) for t in sets],
        }
    return {"n": n, "count": len(sets)}


def cmd_matrices(config: Config, args) -> dict:
    out = {}
    want_r = args.r or not (args.r or args.s)
    want_s = args.s or not (args.r or args.s)
    if want_r and config.poisson is not None:
        out["r"] = _matrix_strings(log_canonical_matrix(config.poisson))
    if want_s and config.quantum is not None:
        out["s"] = _matrix_strings(commutation_matrix(config.quantum))
    if args.r and "r" not in out:
        raise ConfigError("the log-canonical matrix needs poisson parameters")
    if args.s and "s" not in out:
        raise ConfigError("the commutation matrix needs quantum parameters")
    if not out:
        raise ConfigError("no matrix available for this mode")
    return out


def cmd_verify(config: Config, args) -> tuple[dict, int]:
    report = run_suite(config, args.suite)
    return report, 0 if report["ok"] else 1


def cmd_map_report(config: Config, args) -> dict:
    params = _require_quantum(config)
    return stratification_report(params, config.weights)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisson-strata",
        description="Exact verification toolkit for the multiparameter Poisson/quantum algebras",
    )
    parser.add_argument("--config", required=True, help="path to the JSON config")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bracket = sub.add_parser("bracket", parents=[common], help="Poisson bracket of two expressions")
    p_bracket.add_argument("left")
    p_bracket.add_argument("right")

    p_nf = sub.add_parser("nf", parents=[common], help="normal form of a quantum expression")
    p_nf.add_argument("expr")

    p_adm = sub.add_parser("admissible", parents=[common], help="admissible-set enumeration")
    group = p_adm.add_mutually_exclusive_group()
    group.add_argument("--count", action="store_true")
    group.add_argument("--list", action="store_true")
    group.add_argument("--poset", action="store_true")
    p_adm.add_argument("--dot", action="store_true", help="emit the poset as DOT")

    p_mat = sub.add_parser("matrices", parents=[common], help="attached coefficient matrices")
    p_mat.add_argument("--r", action="store_true", help="log-canonical matrix")
    p_mat.add_argument("--s", action="store_true", help="commutation matrix")

    p_verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p_verify.add_argument("suite")

    sub.add_parser("map-report", parents=[common], help="stratum-by-stratum correspondence report")
    return parser


def _emit(payload, pretty: bool):
    if isinstance(payload, str):
        print(payload)
    else:
        print(json.dumps(payload, indent=2 if pretty else None))


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "bracket":
            payload, status = cmd_bracket(config, args), 0
        elif args.command == "nf":
            payload, status = cmd_nf(config, args), 0
        elif args.command == "admissible":
            payload, status = cmd_admissible(config, args), 0
        elif args.command == "matrices":
            payload, status = cmd_matrices(config, args), 0
        elif args.command == "verify":
            payload, status = cmd_verify(config, args)
        elif args.command == "map-report":
            payload, status = cmd_map_report(config, args), 0
        else:  # pragma: no cover
            raise ConfigError(f"unknown command {args.command!r}")
    except GroupContainsMinusOne as exc:
        _emit({"error": "GroupContainsMinusOne", "message": str(exc)}, args.pretty)
        return 2
    except (
        ConfigError,
        ParseError,
        EvalError,
        OSError,
        ValueError,
        ReductionBudgetExceeded,
        StepBudgetExceeded,
    ) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.pretty)
        return 2
    _emit(payload, args.pretty)
    return status


if __name__ == "__main__":
    sys.exit(main())
