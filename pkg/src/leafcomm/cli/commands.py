"""Subcommand bodies: each takes a validated config and a seeded stream and returns an Outcome."""

from __future__ import annotations

from collections import Counter
from json import dumps
from pathlib import Path
from typing import TYPE_CHECKING

from ..core.exception import MonochromaticityError, ValidationError
from ..core.formula import truth_table
from ..core.generate import random_formula
from ..core.parser import load_formula, parse_formula, unparse
from ..counting.bruteforce import count_sat_bruteforce, count_sat_protocols
from ..counting.device import LeafDevice
from ..counting.fast import run_sat_fast
from ..counting.randomized import run_sat_randomized
from ..hardness.bounds import lb_size_bound
from ..hardness.correlation import best_parity_correlation, correlation
from ..hardness.distribution import Distribution
from ..learning.boosting import run_pac_learn_formula_xor
from ..learning.oracle import ExampleOracle
from ..polynomial.compose import build_approximation
from ..polynomial.multilinear import max_error
from ..prg.fooling import fooling_gap
from ..prg.generator import SEED_EXHAUSTIVE_BITS
from ..prg.gip_stretch import GipStretchGenerator
from ..prg.inw import InwGenerator
from ..prg.seed_length import seed_length_report
from ..prg.small_bias import BIAS_MAX_VARS, SmallBiasGenerator, max_parity_bias
from ..protocols.explicit import to_explicit
from ..protocols.randomized import (
    ERROR_INPUT_BITS,
    EXACT_RANDOM_BITS,
    RandomizedProtocol,
    protocol_error,
)
from ..tools.bits import all_inputs
from ..tools.logger import INFO1, logger
from ..tools.rational import format_rational, to_jsonable
from ..tools.schema import LoadFileWithExt, LoadJson, LoadYaml
from .report import Outcome
from .suite import run_suite

if TYPE_CHECKING:
    from collections.abc import Callable
    from typing import Any

    from numpy.random import Generator

    from ..core.formula import Formula

CONSISTENCY_MAX_SEED = 16

_load_mapping = LoadFileWithExt(yaml=LoadYaml, yml=LoadYaml, json=LoadJson)


def _require(cfg: dict[str, Any], command: str, *names: str) -> list:
    missing = [name for name in names if cfg.get(name) is None]
    if missing:
        raise ValidationError(f"{command} needs parameters: {', '.join(missing)}")
    return [cfg[name] for name in names]


def _distribution(filename: str | None, n: int) -> Distribution | None:
    if filename is None:
        return None
    return Distribution.from_mapping(n, _load_mapping(filename))


def _write_json(filename: str, data: Any) -> None:
    Path(filename).write_text(dumps(to_jsonable(data), sort_keys=True, indent=2))
    logger.log(INFO1, f"Write: {filename}")


def _device(f: Formula, cfg: dict[str, Any]) -> LeafDevice:
    return LeafDevice.from_formula(f, cfg["parties"], cfg["kind"], cfg["delta"])


def run_parse(cfg: dict[str, Any], rng: Generator) -> Outcome:
    f = load_formula(cfg["formula"], cfg["nvars"])
    text = unparse(f)
    outcome = Outcome(
        {
            "n": f.num_vars,
            "size": f.size,
            "depth": f.depth(),
            "gates": dict(sorted(Counter(gate.kind for gate in f.gates).items())),
            "formula": text,
        }
    )
    outcome.check("round_trip", parse_formula(text, f.num_vars) == f, "parse(unparse(f)) == f")
    return outcome


def run_approx(cfg: dict[str, Any], rng: Generator) -> Outcome:
    f = load_formula(cfg["formula"])
    approximation = build_approximation(f, cfg["eps"], sparse=cfg["sparse"])
    error = max_error(approximation.poly, truth_table(f))
    outcome = Outcome({**approximation.to_dict(), "measured_error": error})
    outcome.check(
        "pointwise_error", error <= cfg["eps"], f"max |p - f| = {format_rational(error)}"
    )
    if cfg["poly_output"]:
        _write_json(cfg["poly_output"], approximation.poly.to_json())
    return outcome


def _describe_leaf(gate, protocol) -> dict[str, Any]:
    leaf = {"gate": gate.unparse(), "cost": protocol.cost, "widths": list(protocol.widths)}
    if isinstance(protocol, RandomizedProtocol):
        leaf["random_bits"] = protocol.random_bits
        leaf["error_bound"] = protocol.error_bound
    return leaf


def run_protocol(cfg: dict[str, Any], rng: Generator) -> Outcome:
    f = load_formula(cfg["formula"])
    device = _device(f, cfg)
    outcome = Outcome(
        {
            "n": device.n,
            "size": device.size,
            "cost": device.cost,
            "deterministic": device.deterministic,
            "leaves": [_describe_leaf(g, p) for g, p in zip(f.gates, device.protocols)],
        }
    )
    try:
        device.check()
    except MonochromaticityError as exc:
        outcome.check("leaf_protocols", False, str(exc))
    else:
        outcome.check("leaf_protocols", True, "every leaf protocol computes its gate")
    if device.n <= ERROR_INPUT_BITS:
        for gate_id, (gate, protocol) in enumerate(zip(f.gates, device.protocols)):
            if not isinstance(protocol, RandomizedProtocol):
                continue
            if protocol.random_bits <= EXACT_RANDOM_BITS:
                # exact errors are already covered by the device check
                continue
            error = protocol_error(protocol, gate, rng=rng)
            outcome.check(
                f"leaf_{gate_id}_error",
                error.worst <= protocol.error_bound + error.half_width,
                repr(error),
            )
    if cfg["explicit_output"]:
        if not device.deterministic:
            raise ValidationError("Explicit protocols are written for deterministic devices only")
        explicit = [to_explicit(p).to_dict() for p in device.two_party_protocols()]
        _write_json(cfg["explicit_output"], explicit)
    return outcome


def run_sat(cfg: dict[str, Any], rng: Generator) -> Outcome:
    f = load_formula(cfg["formula"])
    mode = cfg["mode"]
    if mode == "brute":
        return Outcome({"count": count_sat_bruteforce(f)})
    device = _device(f, cfg)
    kwargs = {} if cfg["c"] is None else {"c": cfg["c"]}
    match mode:
        case "protocols":
            outcome = Outcome({"count": count_sat_protocols(device)})
        case "fast":
            report = run_sat_fast(
                device, cfg["nprime"], mode=cfg["poly_mode"], backend=cfg["backend"], **kwargs
            )
            outcome = Outcome(report.to_dict())
        case "randomized":
            report = run_sat_randomized(
                device,
                cfg["nprime"],
                cfg["confidence"],
                rng=rng,
                mode=cfg["poly_mode"],
                backend=cfg["backend"],
                **kwargs,
            )
            outcome = Outcome(report.to_dict())
    if cfg["verify"]:
        expected = count_sat_bruteforce(f)
        count = outcome.result["count"]
        outcome.check("bruteforce_agreement", count == expected, f"{count} vs {expected}")
    return outcome


def _bias_sweepable(g: SmallBiasGenerator) -> bool:
    return 2 * g.ell <= SEED_EXHAUSTIVE_BITS and g.out_len <= BIAS_MAX_VARS


def _generator(cfg: dict[str, Any]):
    match cfg["generator"]:
        case "small_bias":
            (n,) = _require(cfg, "prg small_bias", "n")
            if cfg["ell"] is None:
                _require(cfg, "prg small_bias", "delta")
            return SmallBiasGenerator(n, cfg["delta"], ell=cfg["ell"])
        case "inw":
            n, k, dprime, delta = _require(cfg, "prg inw", "n", "k", "dprime", "delta")
            return InwGenerator(
                n, k, dprime, delta, cfg["extractor"], passthrough=cfg["passthrough"]
            )
        case "gip_stretch":
            m, t, k = _require(cfg, "prg gip_stretch", "m", "t", "k")
            return GipStretchGenerator(m, t, k)


def run_prg(cfg: dict[str, Any], rng: Generator) -> Outcome:
    g = _generator(cfg)
    outcome = Outcome(
        {"kind": g.kind, "seed_len": g.seed_len, "out_len": g.out_len, "params": g.params}
    )
    match g:
        case SmallBiasGenerator() if _bias_sweepable(g):
            bias = max_parity_bias(g.ell, g.out_len)
            outcome.result["max_parity_bias"] = bias
            outcome.check(
                "parity_bias",
                bias <= g.bias_bound,
                f"{format_rational(bias)} <= {format_rational(g.bias_bound)}",
            )
        case GipStretchGenerator() if g.seed_len <= CONSISTENCY_MAX_SEED:
            consistent = all(g.is_consistent(int(out)) for out in g.expand_all())
            outcome.check("gip_consistency", consistent, f"all {1 << g.seed_len} seeds")
    if cfg["against"]:
        f = load_formula(cfg["against"])
        gap = fooling_gap(g, f, samples=cfg["samples"], rng=rng)
        outcome.result["fooling"] = gap.to_dict()
        if cfg["eps"] is not None:
            outcome.check("fooling_gap", gap.within(cfg["eps"]), repr(gap))
    return outcome


def run_corr(cfg: dict[str, Any], rng: Generator) -> Outcome:
    f = load_formula(cfg["f"])
    n = f.num_vars
    dist = _distribution(cfg["distribution"], n)
    table = truth_table(f)
    mask, negated, value = best_parity_correlation(table, n, dist)
    outcome = Outcome(
        {"best_parity": {"mask": hex(mask), "sign": -1 if negated else 1, "correlation": value}}
    )
    if cfg["g"]:
        g = load_formula(cfg["g"], n)
        report = correlation(table, truth_table(g), n, dist, f_id=cfg["f"], g_id=cfg["g"])
        outcome.result["correlation"] = report.to_dict()
    return outcome


def run_lbcalc(cfg: dict[str, Any], rng: Generator) -> Outcome:
    model = cfg["model"]
    if model == "size":
        bound = lb_size_bound(cfg["n"], cfg["k"], cfg["eps"], cfg["R"])
        return Outcome(
            {
                "model": "size",
                "expression": "n^2 / (k^2 16^k (R + log(n))^2 log(1/eps)^2)",
                "bound": bound,
                "note": "up to constants",
            }
        )
    params = {
        key: cfg[key] for key in ("n", "s", "eps", "c", "k", "R", "m", "t") if cfg[key] is not None
    }
    return Outcome(seed_length_report(model, params).to_dict())


def run_learn(cfg: dict[str, Any], rng: Generator) -> Outcome:
    if cfg["target"]:
        target = load_formula(cfg["target"])
    else:
        target = random_formula(cfg["n"], cfg["s"], "xor", rng=rng)
    n, s = target.num_vars, target.size
    dist = _distribution(cfg["distribution"], n)
    oracle = ExampleOracle(target, n, rng, dist)
    kwargs = {key: cfg[key] for key in ("c", "max_rounds", "train_size") if cfg[key] is not None}
    report = run_pac_learn_formula_xor(oracle, n, s, cfg["eps"], cfg["delta"], **kwargs)
    xs = all_inputs(n)
    wrong = (report.hypothesis.evaluate(xs) != truth_table(target)).astype("i8")
    true_error = (dist or Distribution.uniform(n)).expectation(wrong)
    result = report.to_dict()
    result.update(target=unparse(target), examples=oracle.drawn, error=true_error)
    outcome = Outcome(result)
    outcome.check("validation", report.validated, f"held-out error {report.validation_error}")
    outcome.check(
        "true_error", true_error <= cfg["eps"], f"{format_rational(true_error)} <= {cfg['eps']}"
    )
    return outcome


def run_suite_command(cfg: dict[str, Any], rng: Generator) -> Outcome:
    rows = run_suite(cfg["seed"], long=cfg["long"], only=cfg["only"])
    failed = [row["check"] for row in rows if not row["passed"]]
    return Outcome({"checks": len(rows), "failed": failed}, rows)


COMMAND_FUNCTIONS: dict[str, Callable[[dict[str, Any], Generator], Outcome]] = {
    "parse": run_parse,
    "approx": run_approx,
    "protocol": run_protocol,
    "sat": run_sat,
    "prg": run_prg,
    "corr": run_corr,
    "lbcalc": run_lbcalc,
    "learn": run_learn,
    "suite": run_suite_command,
}
