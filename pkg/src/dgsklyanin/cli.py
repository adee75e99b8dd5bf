"""Command line front end. Every command prints one JSON document on
stdout; logs go to stderr.

Exit codes: 0 success, 1 domain error (forbidden parameters, invalid
differential, ...), 2 usage error. Errors are also printed as JSON.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .calabi_yau import as_matrix, cy_verdict, qpl_equivalent
from .classifier import EXPECTED_KIND, Kind, classify
from .cohomology import truncated_cohomology
from .dg import DifferentialSpec, NotADifferential, check_differential
from .exact_scalars import as_rational, format_rational
from .params import CaseTag, ParameterError, case_of, parse_params, sklyanin_model, validate

SCHEMA = 1
log = logging.getLogger("dgsklyanin")

EXPECTED_DIM = {Kind.ZERO_ONLY: 0, Kind.ALPHA_BETA_GAMMA: 3, Kind.SYMMETRIC_MATRIX: 9}

# option name -> default applied after merging flags and config
DEFAULTS = {
    "a": None, "b": None, "c": None, "params": None,
    "matrix_file": None, "diag": None, "m1": None, "m2": None,
    "max_degree": 4, "samples": 100, "seed": 0, "stratum": None, "workers": 1,
    "output": None,
}


class UsageError(Exception):
    pass


class DomainError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dgsklyanin", allow_abbrev=False, description="DG structures on 3-dimensional Sklyanin algebras")
    parser.add_argument("--config", help="JSON file with option values (flags take precedence)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    # --config is also accepted after the command name
    config_opt = dict(default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    def params_opts(p):
        p.add_argument("--a")
        p.add_argument("--b")
        p.add_argument("--c")
        p.add_argument("--params", help="a,b,c")

    def diff_opts(p):
        p.add_argument("--matrix-file", help="JSON file with Mx/My/Mz or diag")
        p.add_argument("--diag", help="inline JSON 3x3 matrix M with d(x,y,z) = M(x²,y²,z²)")

    for name in ("validate", "classify", "check-diff", "cy", "cohomology"):
        p = sub.add_parser(name, allow_abbrev=False)
        params_opts(p)
        if name in ("check-diff", "cy", "cohomology"):
            diff_opts(p)
        if name == "cohomology":
            p.add_argument("--max-degree", type=int)
        p.add_argument("--output")
        p.add_argument("--config", **config_opt)
    p = sub.add_parser("iso", allow_abbrev=False)
    p.add_argument("--m1", help="JSON file or inline JSON 3x3 matrix")
    p.add_argument("--m2")
    p.add_argument("--output")
    p.add_argument("--config", **config_opt)
    p = sub.add_parser("sweep", allow_abbrev=False)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--stratum", choices=[t.value for t in CaseTag])
    p.add_argument("--workers", type=int)
    p.add_argument("--output")
    p.add_argument("--config", **config_opt)
    return parser


def _load_json(text_or_path: str):
    s = text_or_path.strip()
    if s.startswith("[") or s.startswith("{"):
        return json.loads(s)
    return json.loads(Path(s).read_text(encoding="utf-8"))


def resolve(argv: list[str]) -> argparse.Namespace:
    """Parse flags, merge a config file underneath them, fill defaults."""
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    config = {}
    if known.config:
        try:
            config = _load_json(known.config)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}")
        if not isinstance(config, dict):
            raise UsageError("config must be a JSON object")
    if not any(tok in COMMANDS for tok in rest) and "command" in config:
        rest = [str(config["command"])] + rest
    ns = build_parser().parse_args(rest)
    if ns.command is None:
        raise UsageError("missing command")
    for key, default in DEFAULTS.items():
        current = getattr(ns, key, None)
        if current is None:
            cfg = config.get(key, config.get(key.replace("_", "-")))
            setattr(ns, key, cfg if cfg is not None else default)
    return ns


def _params(ns):
    if ns.params is not None:
        try:
            return parse_params(str(ns.params))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(str(exc))
    if None in (ns.a, ns.b, ns.c):
        raise UsageError("parameters required: --a/--b/--c or --params")
    try:
        return tuple(as_rational(str(v)) for v in (ns.a, ns.b, ns.c))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc))


def _differential(ns) -> DifferentialSpec:
    try:
        if ns.diag is not None:
            data = ns.diag if isinstance(ns.diag, list) else _load_json(str(ns.diag))
            return DifferentialSpec.from_diag(data)
        if ns.matrix_file is not None:
            data = _load_json(str(ns.matrix_file))
            if isinstance(data, list):
                return DifferentialSpec.from_diag(data)
            return DifferentialSpec.from_json(data)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise UsageError(f"bad differential: {exc}")
    raise UsageError("a differential is required: --matrix-file or --diag")


def _matrix_arg(value, name):
    if value is None:
        raise UsageError(f"--{name} is required")
    try:
        data = value if isinstance(value, list) else _load_json(str(value))
        if isinstance(data, dict) and "diag" in data:
            data = data["diag"]
        return as_matrix(data)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise UsageError(f"bad matrix for --{name}: {exc}")


def _checked(triple):
    try:
        return validate(*triple)
    except ParameterError as exc:
        raise DomainError(exc.reason, str(exc))


# ---------- commands ----------

def cmd_validate(ns) -> dict:
    triple = _params(ns)
    p = _checked(triple)
    return {"input": [format_rational(v) for v in triple], "params": p.to_json(),
            "case": case_of(p).value}


def cmd_classify(ns) -> dict:
    triple = _params(ns)
    _checked(triple)
    return classify(triple).to_json()


def cmd_check_diff(ns) -> dict:
    triple = _params(ns)
    _checked(triple)
    d = _differential(ns)
    return {"differential": d.to_json(), **check_differential(d, sklyanin_model(triple)).to_json()}


def cmd_cy(ns) -> dict:
    triple = _params(ns)
    _checked(triple)
    d = _differential(ns)
    return cy_verdict(triple, d).to_json()


def cmd_iso(ns) -> dict:
    m1, m2 = _matrix_arg(ns.m1, "m1"), _matrix_arg(ns.m2, "m2")
    wit = qpl_equivalent(m1, m2)
    return {"equivalent": wit is not None, "witness": wit.to_json() if wit is not None else None}


def cmd_cohomology(ns) -> dict:
    triple = _params(ns)
    _checked(triple)
    top = int(ns.max_degree)
    if top < 0:
        raise UsageError("--max-degree must be non-negative")
    d = _differential(ns)
    alg = sklyanin_model(triple, cap=max(top + 1, 3))
    return {"max_degree": top, **truncated_cohomology(alg, d, top).to_json()}


# ---------- sweep ----------

def _nonzero(rng: random.Random) -> Fraction:
    while True:
        q = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if q:
            return q


def sample_point(rng: random.Random, stratum: CaseTag) -> tuple[Fraction, Fraction, Fraction]:
    """Rejection-sample a valid raw triple whose case tag is ``stratum``."""
    while True:
        if stratum is CaseTag.ALL_NONZERO:
            t = (_nonzero(rng), _nonzero(rng), _nonzero(rng))
        elif stratum is CaseTag.TWO_NONZERO_WITH_C:
            x = _nonzero(rng)
            t = (x, Fraction(0), _nonzero(rng)) if rng.random() < 0.5 else (Fraction(0), x, _nonzero(rng))
        elif stratum is CaseTag.C_ZERO_DISTINCT_SQUARES:
            t = (_nonzero(rng), _nonzero(rng), Fraction(0))
        elif stratum is CaseTag.C_ZERO_ANTI_DIAGONAL:
            x = _nonzero(rng)
            t = (x, -x, Fraction(0))
        else:
            x = _nonzero(rng)
            t = (x, x, Fraction(0))
        try:
            if case_of(validate(*t)) is stratum:
                return t
        except ParameterError:
            pass


def sweep_points(samples: int, seed: int, stratum: CaseTag | None = None) -> list[tuple]:
    rng = random.Random(seed)
    strata = [stratum] if stratum else list(CaseTag)
    return [sample_point(rng, strata[i % len(strata)]) for i in range(samples)]


def _classify_record(item) -> dict:
    index, triple = item
    res = classify(triple)
    expected = EXPECTED_KIND[res.case]
    return {
        "index": index,
        "params": [format_rational(v) for v in triple],
        "case": res.case.value,
        "kind": res.kind.value,
        "expected_kind": expected.value,
        "solution_dim": res.solution_dim,
        "certificate": res.certificate is not None,
    }


def sweep(samples: int, seed: int, stratum: CaseTag | None = None, workers: int = 1) -> dict:
    if samples <= 0:
        raise UsageError("--samples must be positive")
    items = list(enumerate(sweep_points(samples, seed, stratum)))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_classify_record, items, chunksize=8))
    else:
        records = [_classify_record(it) for it in items]
    records.sort(key=lambda r: r["index"])
    summary: dict[str, dict[str, int]] = {}
    anomalies = []
    for r in records:
        bucket = summary.setdefault(r["case"], {})
        bucket[r["kind"]] = bucket.get(r["kind"], 0) + 1
        want = Kind(r["expected_kind"])
        if r["kind"] != want.value or r["solution_dim"] != EXPECTED_DIM[want]:
            anomalies.append(r["index"])
    return {"samples": samples, "seed": seed, "stratum": stratum.value if stratum else None,
            "summary": summary, "anomalies": anomalies, "records": records}


def cmd_sweep(ns) -> dict:
    stratum = CaseTag(ns.stratum) if ns.stratum else None
    return sweep(int(ns.samples), int(ns.seed), stratum, max(1, int(ns.workers)))


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "check-diff": cmd_check_diff,
    "cy": cmd_cy,
    "iso": cmd_iso,
    "cohomology": cmd_cohomology,
    "sweep": cmd_sweep,
}


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    sys.stdout.write(text + "\n")
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="%(levelname)s %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    output = None
    try:
        ns = resolve(argv)
        output = ns.output
        log.info("running %s", ns.command)
        doc = {"schema": SCHEMA, "command": ns.command, **COMMANDS[ns.command](ns)}
    except UsageError as exc:
        _emit({"schema": SCHEMA, "error": "usage", "message": str(exc)}, None)
        return 2
    except DomainError as exc:
        _emit({"schema": SCHEMA, "error": exc.kind, "message": str(exc)}, output)
        return 1
    except NotADifferential as exc:
        _emit({"schema": SCHEMA, "error": "not-a-differential", "message": str(exc)}, output)
        return 1
    _emit(doc, output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
