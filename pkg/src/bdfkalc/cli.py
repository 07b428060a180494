"""Batch front end: parse a JSON job, run one computation, emit results.

One job per invocation.  Output is deterministic for identical jobs
(stable ordering everywhere, no timestamps), so results can be used as
golden files.  Exit codes: 0 success, 2 parse error, 3 validation error,
4 window error, 1 anything else; failures print a structured error
record to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass

from .degrees import Degree, Window, WindowError
from .grothendieck import (
    UnsupportedResolutionError,
    class_of,
    product,
    serre_product,
)
from .homology import (
    BettiTable,
    ChainComplexError,
    KoszulTensorComplex,
    all_variables,
    betti_table,
    euler_profile,
    homology_profile,
    torsion_dimension,
)
from .modules import (
    DirectSum,
    FreeModule,
    ModuleExpr,
    Monomial,
    MonomialIdeal,
    MonomialQuotient,
    RING_MODULE,
    RingSpec,
    RingValidationError,
    ShiftedModule,
    hilbert,
    kseries,
    validate_ring,
)
from .series import NotInvertibleError, QSeries, eq_on_window, invert, truncate

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_WINDOW = 4

COMMANDS = (
    "hilbert",
    "kseries",
    "betti",
    "torsion-dim",
    "serre",
    "koszul-verify",
    "invert",
    "euler-check",
)


class SpecError(Exception):
    """Parse failure; carries every positioned problem found."""

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{where}: {message}" for where, message in errors))


@dataclass
class JobSpec:
    command: str
    ring: RingSpec
    window: Window
    module: ModuleExpr | None = None
    module2: ModuleExpr | None = None
    series_terms: dict[Degree, int] | None = None
    sequence: tuple[int, ...] | None = None
    degree: Degree | None = None
    output: str = "json"
    characteristic: int = 0
    threads: int | None = None


def _parse_degree(data, where: str, errors: list) -> Degree | None:
    if not isinstance(data, list):
        errors.append((where, "degree must be a list of [index, coefficient] pairs"))
        return None
    entries = []
    last = 0
    for k, pair in enumerate(data):
        spot = f"{where}[{k}]"
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or any(isinstance(x, bool) or not isinstance(x, int) for x in pair)
        ):
            errors.append((spot, "expected an [index, coefficient] pair of integers"))
            return None
        index, coeff = pair
        if index <= last:
            errors.append((spot, "indices must be >= 1 and strictly increasing"))
            return None
        if coeff == 0:
            errors.append((spot, "zero coefficient violates canonical form"))
            return None
        entries.append((index, coeff))
        last = index
    return Degree(tuple(entries))


def _parse_exponents(data, num_vars: int, where: str, errors: list) -> Monomial | None:
    if not isinstance(data, list):
        errors.append((where, "generator must be a list of [position, exponent] pairs"))
        return None
    exps = []
    last = 0
    for k, pair in enumerate(data):
        spot = f"{where}[{k}]"
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or any(isinstance(x, bool) or not isinstance(x, int) for x in pair)
        ):
            errors.append((spot, "expected a [position, exponent] pair of integers"))
            return None
        pos, exp = pair
        if pos <= last:
            errors.append((spot, "positions must be >= 1 and strictly increasing"))
            return None
        if pos > num_vars:
            errors.append((spot, f"position {pos} exceeds the {num_vars} ring variables"))
            return None
        if exp <= 0:
            errors.append((spot, "exponents must be positive"))
            return None
        exps.append((pos, exp))
        last = pos
    return Monomial(tuple(exps))


def _parse_ring(data, window: Window | None, where: str, errors: list) -> RingSpec | None:
    if not isinstance(data, dict):
        errors.append((where, "ring must be an object"))
        return None
    if ("columns" in data) == ("variables" in data):
        errors.append((where, "ring needs exactly one of 'columns' or 'variables'"))
        return None
    if "columns" in data:
        columns = data["columns"]
        if not isinstance(columns, list) or any(
            isinstance(c, bool) or not isinstance(c, int) or c < 0 for c in columns
        ):
            errors.append((f"{where}.columns", "column sizes must be nonnegative integers"))
            return None
        ring = RingSpec.matrix_ring(columns)
        # columns above the window ceiling cannot touch any in-window piece
        return ring.truncated(window) if window is not None else ring
    variables = data["variables"]
    if not isinstance(variables, list):
        errors.append((f"{where}.variables", "must be a list"))
        return None
    pairs = []
    for k, item in enumerate(variables):
        spot = f"{where}.variables[{k}]"
        if not isinstance(item, dict) or "id" not in item or "degree" not in item:
            errors.append((spot, "variable needs 'id' and 'degree'"))
            return None
        if not isinstance(item["id"], str):
            errors.append((spot, "variable id must be a string"))
            return None
        deg = _parse_degree(item["degree"], f"{spot}.degree", errors)
        if deg is None:
            return None
        pairs.append((item["id"], deg))
    return RingSpec.of(pairs)


def _parse_module(data, ring: RingSpec, where: str, errors: list) -> ModuleExpr | None:
    if not isinstance(data, dict) or "node" not in data:
        errors.append((where, "module must be an object with a 'node' tag"))
        return None
    tag = data["node"]
    num_vars = len(ring.variables)
    if tag == "free":
        shifts = []
        raw = data.get("shifts")
        if not isinstance(raw, list):
            errors.append((f"{where}.shifts", "free module needs a list of shift degrees"))
            return None
        for k, item in enumerate(raw):
            deg = _parse_degree(item, f"{where}.shifts[{k}]", errors)
            if deg is None:
                return None
            shifts.append(deg)
        return FreeModule.of(shifts)
    if tag == "shift":
        inner = _parse_module(data.get("module"), ring, f"{where}.module", errors)
        by = _parse_degree(data.get("by"), f"{where}.by", errors)
        if inner is None or by is None:
            return None
        return ShiftedModule(inner, by)
    if tag == "sum":
        raw = data.get("parts")
        if not isinstance(raw, list):
            errors.append((f"{where}.parts", "sum needs a list of parts"))
            return None
        parts = []
        for k, item in enumerate(raw):
            part = _parse_module(item, ring, f"{where}.parts[{k}]", errors)
            if part is None:
                return None
            parts.append(part)
        return DirectSum.of(parts)
    if tag in ("ideal", "quotient"):
        raw = data.get("gens")
        if not isinstance(raw, list):
            errors.append((f"{where}.gens", f"{tag} needs a list of generators"))
            return None
        gens = []
        for k, item in enumerate(raw):
            gen = _parse_exponents(item, num_vars, f"{where}.gens[{k}]", errors)
            if gen is None:
                return None
            gens.append(gen)
        builder = MonomialIdeal.of if tag == "ideal" else MonomialQuotient.of
        try:
            return builder(gens)
        except ValueError as exc:
            errors.append((f"{where}.gens", str(exc)))
            return None
    errors.append((where, f"unknown module node tag {tag!r}"))
    return None


def parse_spec(
    text: str,
    command: str | None = None,
    output: str = "json",
    characteristic: int = 0,
    threads: int | None = None,
) -> JobSpec:
    """Parse and fully validate a job file; raises SpecError listing every problem."""
    errors: list[tuple[str, str]] = []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError([(f"line {exc.lineno} column {exc.colno}", exc.msg)]) from exc
    if not isinstance(data, dict):
        raise SpecError([("$", "job spec must be a JSON object")])

    chosen = command or data.get("command")
    if chosen not in COMMANDS:
        errors.append(("command", f"unknown command {chosen!r}; choose from {', '.join(COMMANDS)}"))

    window = None
    raw_window = data.get("window")
    if not isinstance(raw_window, list) or not raw_window:
        errors.append(("window", "a nonempty list of ceiling degrees is required"))
    else:
        ceiling = []
        for k, item in enumerate(raw_window):
            deg = _parse_degree(item, f"window[{k}]", errors)
            if deg is not None:
                ceiling.append(deg)
        if len(ceiling) == len(raw_window):
            window = Window.of(ceiling)

    ring = None
    if "ring" not in data:
        errors.append(("ring", "a ring is required"))
    else:
        ring = _parse_ring(data["ring"], window, "ring", errors)

    module = module2 = None
    if ring is not None and "module" in data:
        module = _parse_module(data["module"], ring, "module", errors)
    if ring is not None and "module2" in data:
        module2 = _parse_module(data["module2"], ring, "module2", errors)

    series_terms = None
    if "series" in data:
        raw = data["series"]
        if not isinstance(raw, list):
            errors.append(("series", "series must be a list of [degree, coefficient] pairs"))
        else:
            series_terms = {}
            for k, item in enumerate(raw):
                spot = f"series[{k}]"
                if not isinstance(item, list) or len(item) != 2:
                    errors.append((spot, "expected a [degree, coefficient] pair"))
                    continue
                deg = _parse_degree(item[0], f"{spot}.degree", errors)
                coeff = item[1]
                if isinstance(coeff, bool) or not isinstance(coeff, int):
                    errors.append((spot, "coefficient must be an integer"))
                    continue
                if deg is None:
                    continue
                if not deg.is_nonnegative():
                    errors.append((spot, "series terms must lie in the nonnegative orthant"))
                    continue
                if deg in series_terms:
                    errors.append((spot, f"duplicate term at degree {deg}"))
                    continue
                series_terms[deg] = coeff

    sequence = None
    if "sequence" in data:
        raw = data["sequence"]
        num_vars = len(ring.variables) if ring is not None else 0
        if not isinstance(raw, list) or any(
            isinstance(x, bool) or not isinstance(x, int) or x < 1 or x > num_vars for x in raw
        ):
            errors.append(("sequence", "sequence must list valid 1-based variable positions"))
        else:
            sequence = tuple(sorted(set(raw)))

    target_degree = None
    if "degree" in data:
        target_degree = _parse_degree(data["degree"], "degree", errors)

    # command-specific arity, checked before any computation
    if chosen in ("hilbert", "kseries", "betti", "euler-check") and module is None:
        errors.append(("module", f"{chosen} requires a module"))
    if chosen == "torsion-dim":
        if module is None:
            errors.append(("module", "torsion-dim requires a module"))
        if target_degree is None and "degree" not in data:
            errors.append(("degree", "torsion-dim requires a target degree"))
    if chosen == "serre" and (module is None or module2 is None):
        errors.append(("module", "serre requires both 'module' and 'module2'"))
    if chosen == "invert" and series_terms is None:
        errors.append(("series", "invert requires a series"))

    if errors:
        raise SpecError(errors)

    return JobSpec(
        command=chosen,
        ring=ring,
        window=window,
        module=module,
        module2=module2,
        series_terms=series_terms,
        sequence=sequence,
        degree=target_degree,
        output=output,
        characteristic=characteristic,
        threads=threads,
    )


def serialize_spec(job: JobSpec) -> str:
    """Canonical JSON for a job; parsing it back yields the same job."""
    payload: dict = {
        "command": job.command,
        "ring": {
            "variables": [
                {"id": v.name, "degree": v.degree.to_json()} for v in job.ring.variables
            ]
        },
        "window": [u.to_json() for u in job.window.ceiling],
    }
    if job.module is not None:
        payload["module"] = job.module.to_json()
    if job.module2 is not None:
        payload["module2"] = job.module2.to_json()
    if job.series_terms is not None:
        from .degrees import grlex_sorted

        payload["series"] = [
            [g.to_json(), job.series_terms[g]] for g in grlex_sorted(job.series_terms)
        ]
    if job.sequence is not None:
        payload["sequence"] = list(job.sequence)
    if job.degree is not None:
        payload["degree"] = job.degree.to_json()
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _csv_lines(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def _render_series(series, output: str, extra: dict | None = None) -> str:
    payload = series.to_json()
    if extra:
        payload.update(extra)
    if output == "json":
        return _dump_json(payload)
    if output == "csv":
        return _csv_lines(
            ["degree", "coefficient"],
            [[json.dumps(g.to_json(), separators=(",", ":")), c] for g, c in series.terms],
        )
    lines = [f"{'degree':<18} coefficient"]
    for g, c in series.terms:
        lines.append(f"{str(g):<18} {c}")
    if not series.terms:
        lines.append("(zero on this window)")
    return "\n".join(lines) + "\n"


def _render_betti(table: BettiTable, output: str) -> str:
    rows = [[i, g.to_json(), value] for i, g, value in table.rows()]
    if output == "json":
        return _dump_json({"rows": rows})
    if output == "csv":
        return _csv_lines(
            ["i", "degree", "beta"],
            [[i, json.dumps(g, separators=(",", ":")), value] for i, g, value in rows],
        )
    return str(table) + "\n"


def run_job(job: JobSpec) -> str:
    report = validate_ring(job.ring, job.window)
    if not report.ok:
        raise RingValidationError("; ".join(report.problems))
    command = job.command

    if command == "hilbert":
        return _render_series(hilbert(job.module, job.ring, job.window), job.output)

    if command == "kseries":
        return _render_series(kseries(job.module, job.ring, job.window), job.output)

    if command == "invert":
        inverse = invert(QSeries.from_terms(job.series_terms))
        return _render_series(truncate(inverse, job.window), job.output)

    if command == "betti":
        table = betti_table(
            job.module, job.ring, job.window, job.characteristic, job.threads
        )
        return _render_betti(table, job.output)

    if command == "torsion-dim":
        value = torsion_dimension(
            job.module, job.ring, job.degree, job.window, job.characteristic
        )
        payload = {
            "degree": job.degree.to_json(),
            "torsion_dimension": value,
            "projective_dimension": value,
        }
        if job.output == "json":
            return _dump_json(payload)
        if job.output == "csv":
            return _csv_lines(
                ["degree", "torsion_dimension", "projective_dimension"],
                [[json.dumps(job.degree.to_json(), separators=(",", ":")), value, value]],
            )
        return f"torsion dimension at {job.degree} = {value} (= projective dimension)\n"

    if command == "serre":
        left = serre_product(
            job.module,
            job.module2,
            job.ring,
            job.window,
            job.characteristic,
            job.threads,
        )
        right = product(
            class_of(job.module, job.ring, job.window),
            class_of(job.module2, job.ring, job.window),
        )
        matches = eq_on_window(left.series, right.series, right.series.window)
        return _render_series(
            left.series,
            job.output,
            extra={"provenance": left.provenance, "matches_tensor_product": matches},
        )

    if command == "koszul-verify":
        sequence = job.sequence or all_variables(job.ring)
        module = job.module if job.module is not None else RING_MODULE
        complex_ = KoszulTensorComplex.of(module, job.ring, sequence)
        profile = homology_profile(
            complex_, job.window, job.characteristic, job.threads
        )
        exact_positive = all(all(h == 0 for h in dims[1:]) for _, dims in profile)
        rows = [[g.to_json(), list(dims)] for g, dims in profile]
        payload = {"homology": rows, "exact_in_positive_indices": exact_positive}
        if job.output == "json":
            return _dump_json(payload)
        if job.output == "csv":
            flat = []
            for g, dims in profile:
                for i, h in enumerate(dims):
                    flat.append([json.dumps(g.to_json(), separators=(",", ":")), i, h])
            return _csv_lines(["degree", "i", "dimension"], flat)
        lines = [f"{'degree':<18} homology dimensions"]
        for g, dims in profile:
            lines.append(f"{str(g):<18} {list(dims)}")
        lines.append(f"exact in positive indices: {exact_positive}")
        return "\n".join(lines) + "\n"

    if command == "euler-check":
        sequence = job.sequence or all_variables(job.ring)
        complex_ = KoszulTensorComplex.of(job.module, job.ring, sequence)
        rows = euler_profile(complex_, job.window, job.characteristic, job.threads)
        equal = all(terms == homology for _, terms, homology in rows)
        payload = {
            "rows": [[g.to_json(), terms, homology] for g, terms, homology in rows],
            "equal": equal,
        }
        if job.output == "json":
            return _dump_json(payload)
        if job.output == "csv":
            return _csv_lines(
                ["degree", "terms", "homology"],
                [[json.dumps(g.to_json(), separators=(",", ":")), terms, homology] for g, terms, homology in rows],
            )
        lines = [f"{'degree':<18} {'terms':>8} {'homology':>10}"]
        for g, terms, homology in rows:
            lines.append(f"{str(g):<18} {terms:>8} {homology:>10}")
        lines.append(f"equal: {equal}")
        return "\n".join(lines) + "\n"

    raise ValueError(f"unhandled command {command!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bdfkalc",
        description="Exact multigraded series, Koszul homology, Betti tables, "
        "and Grothendieck-ring K-series on finite degree windows.",
    )
    parser.add_argument("--spec", required=True, help="path to the JSON job file ('-' for stdin)")
    parser.add_argument("--command", choices=COMMANDS, help="overrides the job file's command")
    parser.add_argument("--output", choices=("json", "csv", "table"), default="json")
    parser.add_argument("--threads", type=int, default=None, help="degreewise worker threads (default: all cores)")
    parser.add_argument("--char", type=int, default=0, help="coefficient field characteristic: 0 or a prime")
    return parser


def _configure_logging() -> None:
    level_name = os.environ.get("BDFKALC_LOG", "").upper()
    level = getattr(logging, level_name, None) if level_name else None
    logging.basicConfig(level=level if isinstance(level, int) else logging.WARNING)


def _emit_error(kind: str, message: str, details=None) -> None:
    record = {"error": {"kind": kind, "message": message}}
    if details:
        record["error"]["details"] = details
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = args.threads if args.threads and args.threads > 0 else (os.cpu_count() or 1)
    try:
        if args.spec == "-":
            text = sys.stdin.read()
        else:
            with open(args.spec, "r", encoding="utf-8") as handle:
                text = handle.read()
    except OSError as exc:
        _emit_error("io", str(exc))
        return EXIT_PARSE
    try:
        job = parse_spec(
            text,
            command=args.command,
            output=args.output,
            characteristic=args.char,
            threads=threads,
        )
        sys.stdout.write(run_job(job))
        return EXIT_OK
    except SpecError as exc:
        _emit_error(
            "parse",
            "job spec is invalid",
            details=[{"where": where, "message": message} for where, message in exc.errors],
        )
        return EXIT_PARSE
    except (RingValidationError, NotInvertibleError, ChainComplexError, UnsupportedResolutionError, ValueError) as exc:
        _emit_error("validation", str(exc))
        return EXIT_VALIDATION
    except WindowError as exc:
        _emit_error("window", str(exc))
        return EXIT_WINDOW
    except Exception as exc:  # pragma: no cover - defensive
        _emit_error("internal", f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
