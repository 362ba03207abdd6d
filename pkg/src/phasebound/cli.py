"""Command-line front end: scenario runner, procedure comparison, mu sweep.

Scenario files are JSON with a versioned schema field.  All artifacts are
written with canonical formatting (sorted JSON keys, 15-significant-digit
floats, '.' decimal separator) so repeated runs are byte-identical.

Exit codes: 0 success, 2 parse failure, 3 validation failure, 4 numerical
integrity failure.  Each failure prints a one-line prefixed reason on
stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import NumericalIntegrityError, ParseError, UsageError, ValidationError
from .estimation import TrialConfig, optimal_povm, precision_trial, tensor_power_povm
from .metrology import build_report, mu_sweep
from .opalg import HermitianOperator, evolve, hermitian_eigensystem
from .procedures import (
    EXPONENTIAL_N_CAP,
    JointGenerator,
    ProcedureSpec,
    base_diagonal,
    build_generator,
    closed_form_extremes,
    snl_baseline,
)
from .states import (
    StateFamily,
    coherent_state,
    mode_number_generator,
    noon_state,
    number_operator,
    optimal_state,
    product_balanced_state,
)

SCHEMA = "metrology-scenario/1"
_PROCEDURE_KEYS = {"kind", "n_systems", "base_eigs", "body_order", "repetitions", "subsystem_dim"}
_STATE_KEYS = {"kind", "mu", "rel_phase", "n_photons", "alpha", "cutoff"}
_TRIAL_KEYS = {"phi_true", "shots_per_trial", "n_trials", "rng_seed", "search_interval", "povm"}
_SCENARIO_KEYS = {"schema", "name", "procedure", "state", "phi", "trial", "outputs"}
_OUTPUT_KEYS = {"type", "path", "grid"}


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise NumericalIntegrityError(f"non-finite value {x!r} reached serialization")
    return format(float(x), ".15g")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed float formatting, compact separators."""
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: kv[0])
        return "{" + ",".join(json.dumps(str(k)) + ":" + canonical_json(v) for k, v in items) + "}"
    raise UsageError(f"cannot serialize {type(obj).__name__}")


def _csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            elif isinstance(cell, (int, np.integer)):
                cells.append(str(int(cell)))
            else:
                cells.append(format_float(float(cell)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _expect_dict(value, label: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{label} must be a JSON object, got {type(value).__name__}")
    return value


def _check_keys(section: dict, allowed: set, label: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ParseError(f"unknown {label} keys: {sorted(unknown)}")


def load_scenario(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"scenario is not valid JSON: {exc}") from exc
    raw = _expect_dict(raw, "scenario")
    _check_keys(raw, _SCENARIO_KEYS, "scenario")
    if raw.get("schema") != SCHEMA:
        raise ParseError(f"schema must be {SCHEMA!r}, got {raw.get('schema')!r}")
    if not isinstance(raw.get("name"), str):
        raise ParseError("scenario needs a string name")
    if "state" not in raw:
        raise ParseError("scenario needs a state section")
    _check_keys(_expect_dict(raw["state"], "state"), _STATE_KEYS, "state")
    if "procedure" in raw:
        _check_keys(_expect_dict(raw["procedure"], "procedure"), _PROCEDURE_KEYS, "procedure")
    if "trial" in raw:
        _check_keys(_expect_dict(raw["trial"], "trial"), _TRIAL_KEYS, "trial")
    phi = raw.get("phi", 0.0)
    if not isinstance(phi, (int, float)) or isinstance(phi, bool):
        raise ParseError("phi must be a number")
    outputs = raw.get("outputs", [])
    if not isinstance(outputs, list):
        raise ParseError("outputs must be a list")
    for entry in outputs:
        _check_keys(_expect_dict(entry, "output"), _OUTPUT_KEYS, "output")
        if entry.get("type") not in ("report", "mu_sweep", "trial"):
            raise ParseError(f"output type must be report, mu_sweep or trial, got {entry.get('type')!r}")
        if not isinstance(entry.get("path"), str):
            raise ParseError("every output needs a string path")
        if "grid" in entry and (not isinstance(entry["grid"], int) or isinstance(entry["grid"], bool)):
            raise ParseError("output grid must be an integer")
    return raw


def _parse_alpha(value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise ParseError("alpha must be a number or a [re, im] pair")


def _build_family(section: dict) -> StateFamily:
    kwargs = dict(section)
    if "alpha" in kwargs and kwargs["alpha"] is not None:
        kwargs["alpha"] = _parse_alpha(kwargs["alpha"])
    return StateFamily(**kwargs)


def _build_spec(section: dict) -> ProcedureSpec:
    kwargs = dict(section)
    if "base_eigs" in kwargs:
        eigs = kwargs["base_eigs"]
        if not (isinstance(eigs, list) and len(eigs) == 2):
            raise ParseError("base_eigs must be a [lambda_min, lambda_max] pair")
        kwargs["base_eigs"] = (float(eigs[0]), float(eigs[1]))
    return ProcedureSpec(**kwargs)


def realize_scenario(raw: dict):
    """Scenario dict -> (spec or None, generator, probe state).

    Photonic state kinds (noon, coherent) define their own generator and
    reject a procedure section; the qubit kinds require one.
    """
    family = _build_family(raw["state"])
    spec = _build_spec(raw["procedure"]) if "procedure" in raw else None
    if family.kind in ("noon", "coherent"):
        if spec is not None:
            raise ValidationError(f"state kind {family.kind!r} defines its own generator; drop the procedure section")
        if family.kind == "noon":
            return None, mode_number_generator(family.n_photons), noon_state(family.n_photons)
        gen = number_operator(family.cutoff)
        return None, gen, coherent_state(family.alpha, family.cutoff)
    if spec is None:
        raise ValidationError(f"state kind {family.kind!r} needs a procedure section")
    gen = build_generator(spec)
    if family.kind == "optimal_mu":
        return spec, gen, optimal_state(gen, family.mu, family.rel_phase)
    base = HermitianOperator.from_diagonal(base_diagonal(spec))
    return spec, gen, product_balanced_state(spec.n_systems, hermitian_eigensystem(base))


def _resolve_povm(token: str, spec: ProcedureSpec | None, gen: JointGenerator):
    if token == "optimal":
        return optimal_povm(gen)
    if token == "site-product":
        if spec is None:
            raise ValidationError("site-product POVM needs a procedure section")
        lo, hi = spec.base_eigs
        site_gen = JointGenerator(
            HermitianOperator.from_diagonal(base_diagonal(spec)), 1, lo, hi
        )
        return tensor_power_povm(optimal_povm(site_gen), spec.n_systems)
    raise ValidationError(f"unknown povm token {token!r}; expected 'optimal' or 'site-product'")


def _build_trial_config(raw: dict, spec, gen) -> TrialConfig:
    section = dict(raw["trial"])
    for key in ("phi_true", "shots_per_trial", "n_trials", "rng_seed", "search_interval"):
        if key not in section:
            raise ParseError(f"trial section is missing {key!r}")
    interval = section["search_interval"]
    if not (isinstance(interval, list) and len(interval) == 2):
        raise ParseError("search_interval must be a [lo, hi] pair")
    povm = _resolve_povm(section.get("povm", "optimal"), spec, gen)
    return TrialConfig(
        phi_true=float(section["phi_true"]),
        shots_per_trial=int(section["shots_per_trial"]),
        n_trials=int(section["n_trials"]),
        rng_seed=int(section["rng_seed"]),
        povm=tuple(povm),
        search_interval=(float(interval[0]), float(interval[1])),
    )


def _render_output(entry: dict, raw: dict, spec, gen, probe) -> bytes:
    kind = entry["type"]
    if kind == "report":
        evolved = evolve(probe, gen.generator, float(raw.get("phi", 0.0)))
        report = build_report(evolved, gen, spec)
        return (canonical_json(report.to_dict()) + "\n").encode()
    if kind == "mu_sweep":
        grid = entry.get("grid", 101)
        if grid < 2:
            raise ValidationError("mu_sweep grid must have at least 2 points")
        rows = mu_sweep(gen, np.linspace(0.0, 1.0, grid))
        return _csv_text(["mu", "shifted_expectation", "stddev"], [list(r) for r in rows]).encode()
    if "trial" not in raw:
        raise ValidationError("scenario requests a trial artifact but has no trial section")
    config = _build_trial_config(raw, spec, gen)
    result = precision_trial(gen, probe, config)
    return (canonical_json(result.to_dict()) + "\n").encode()


def cmd_run(args) -> int:
    raw = load_scenario(args.scenario)
    spec, gen, probe = realize_scenario(raw)
    if any(entry["type"] == "trial" for entry in raw.get("outputs", [])):
        if "trial" not in raw:
            raise ValidationError("scenario requests a trial artifact but has no trial section")
        _build_trial_config(raw, spec, gen)  # all validation before any computation
    outputs = raw.get("outputs", [])
    for entry in outputs:
        parent = os.path.dirname(entry["path"]) or "."
        os.makedirs(parent, exist_ok=True)
        if not os.access(parent, os.W_OK):
            raise ValidationError(f"output directory {parent!r} is not writable")
    if args.parallel and len(outputs) > 1:
        with ThreadPoolExecutor(max_workers=len(outputs)) as pool:
            contents = list(pool.map(lambda e: _render_output(e, raw, spec, gen, probe), outputs))
    else:
        contents = [_render_output(entry, raw, spec, gen, probe) for entry in outputs]
    written = []
    try:
        for entry, blob in zip(outputs, contents):
            with open(entry["path"], "wb") as fh:
                fh.write(blob)
            written.append(entry["path"])
    except OSError:
        for path in written:
            try:
                os.unlink(path)
            except OSError:
                pass
        raise
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_estimate(args) -> int:
    raw = load_scenario(args.scenario)
    spec, gen, probe = realize_scenario(raw)
    if "trial" not in raw:
        raise ValidationError("estimate needs a trial section in the scenario")
    config = _build_trial_config(raw, spec, gen)
    result = precision_trial(gen, probe, config)
    print(canonical_json(result.to_dict()))
    return 0


def _parse_kind_token(token: str) -> tuple[str, dict]:
    name, _, arg = token.partition(":")
    if name == "linear":
        if arg:
            raise UsageError(f"linear takes no argument, got {token!r}")
        return token, {"kind": "linear"}
    if name == "kbody":
        if not arg:
            raise UsageError("kbody needs an order, e.g. kbody:2")
        return token, {"kind": "kbody", "body_order": int(arg)}
    if name == "exponential":
        if arg:
            raise UsageError(f"exponential takes no argument, got {token!r}")
        return token, {"kind": "exponential"}
    if name == "sequential":
        if not arg:
            raise UsageError("sequential needs a repetition count, e.g. sequential:3")
        return token, {"kind": "sequential-wrapped", "repetitions": int(arg)}
    raise UsageError(f"unknown kind token {token!r}")


def compare_procedures(n_range: list[int], kind_tokens: list[str], base_eigs=(0.0, 1.0)):
    """Rows (kind, N, Q, seminorm, bound_query, bound_snl) from closed forms.

    Rows whose kind cannot be built at the requested N (k > N, exponential
    past its cap) are skipped and reported; no matrices are materialized, so
    N is limited only by float range.
    """
    rows = []
    skipped = []
    for token in kind_tokens:
        token, fields = _parse_kind_token(token)
        for n in n_range:
            try:
                if fields["kind"] == "exponential" and n > EXPONENTIAL_N_CAP:
                    raise ValidationError(f"exponential kind is capped at N = {EXPONENTIAL_N_CAP}")
                spec = ProcedureSpec(n_systems=n, base_eigs=tuple(base_eigs), **fields)
                q, h_lo, h_hi = closed_form_extremes(spec)
                seminorm = h_hi - h_lo
                if seminorm <= 0:
                    raise ValidationError("flat joint spectrum")
                snl = format_float(snl_baseline(spec)[1]) if spec.kind == "linear" else ""
                rows.append([token, n, q, seminorm, 1.0 / seminorm, snl])
            except (UsageError, ValidationError) as exc:
                skipped.append(f"skipped kind={token} n={n}: {exc}")
    return rows, skipped


def cmd_compare(args) -> int:
    kinds = [tok for tok in args.kinds.split(",") if tok] if args.kinds else []
    n_range = [int(tok) for tok in args.n.split(",") if tok] if args.n else []
    base = (0.0, 1.0)
    if args.base:
        parts = args.base.split(",")
        if len(parts) != 2:
            raise UsageError("--base needs lambda_min,lambda_max")
        base = (float(parts[0]), float(parts[1]))
    rows, skipped = compare_procedures(n_range, kinds, base)
    text = _csv_text(["kind", "n", "q", "seminorm", "bound_query", "bound_snl"], rows)
    for note in skipped:
        print(note, file=sys.stderr)
    if args.out:
        parent = os.path.dirname(args.out) or "."
        os.makedirs(parent, exist_ok=True)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_sweep_mu(args) -> int:
    if args.seminorm <= 0:
        raise ValidationError("--seminorm must be positive")
    if args.grid < 2:
        raise ValidationError("--grid must be at least 2")
    gen = JointGenerator(
        HermitianOperator.from_diagonal([0.0, args.seminorm]), 1, 0.0, args.seminorm
    )
    rows = mu_sweep(gen, np.linspace(0.0, 1.0, args.grid))
    text = _csv_text(["mu", "shifted_expectation", "stddev"], [list(r) for r in rows])
    if args.out:
        parent = os.path.dirname(args.out) or "."
        os.makedirs(parent, exist_ok=True)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasebound",
        description="Resource accounting and precision bounds for quantum phase estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file and write its artifacts")
    p_run.add_argument("scenario", help="path to a scenario JSON file")
    p_run.add_argument("--parallel", action="store_true", help="render independent artifacts concurrently")
    p_run.set_defaults(func=cmd_run)

    p_est = sub.add_parser("estimate", help="run the scenario's Monte-Carlo trial, print the result")
    p_est.add_argument("scenario", help="path to a scenario JSON file")
    p_est.set_defaults(func=cmd_estimate)

    p_cmp = sub.add_parser("compare", help="closed-form comparison table across kinds and N")
    p_cmp.add_argument("--kinds", default="", help="comma list: linear, kbody:K, exponential, sequential:T")
    p_cmp.add_argument("--n", default="", help="comma list of system counts")
    p_cmp.add_argument("--base", default="", help="base eigenvalues lambda_min,lambda_max (default 0,1)")
    p_cmp.add_argument("--out", default="", help="output CSV path (default stdout)")
    p_cmp.set_defaults(func=cmd_compare)

    p_sweep = sub.add_parser("sweep-mu", help="shifted expectation and stddev over a mu grid")
    p_sweep.add_argument("--seminorm", type=float, default=1.0, help="spectral width of the generator")
    p_sweep.add_argument("--grid", type=int, default=101, help="number of mu points")
    p_sweep.add_argument("--out", default="", help="output CSV path (default stdout)")
    p_sweep.set_defaults(func=cmd_sweep_mu)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse-error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValidationError) as exc:
        print(f"validation-error: {exc}", file=sys.stderr)
        return 3
    except NumericalIntegrityError as exc:
        print(f"numerical-error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
