"""Command line client for the curve-invariant service.

Runs the service in-process by default; pass --server URL to talk to a
running instance instead.  Outputs are deterministic: CSV tables carry 17
significant digits and repeated runs with the same configuration are
bit-identical.

    gaugecurves invariants --gauge randers:0.5 --curve helix1:0.5 \
        --range 0:6.2832:100 --format csv
    gaugecurves classify --gauge euclidean \
        --curve scaled:cubic:cubic_rectifier:-0.5 --range 0.25:0.85:40
    gaugecurves frame --gauge randers:0.5 --curve helix1:0.5 \
        --range 0:6.2832:200 --c1 1.0 --c2 0.0 --out frame.csv
    gaugecurves translate-check --gauge randers:0.5 --a0 0,0,0.6 \
        --curve helix1:0.5 --range 0:6.2832:50
    gaugecurves verify-gauge --gauge translated:randers:0.5:0,0,0.3 --samples 1000
    gaugecurves serve --host 127.0.0.1 --port 8000

Gauge specs are inline (euclidean | randers:b | ellipsoid:b |
translated:<base spec>:x,y,z) or a path to a JSON file; curve specs are
registry keys (helix1:b, ellipse4:b, circular_helix:R:c, cubic,
perturbed_helix:b:eps, scaled:<base>:<profile>[:args]) or a path to a CSV
file with header t,x,y,z.  Exit codes: 0 success, 2 configuration error,
3 numerical failure, 4 inadmissible translation.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from typing import Optional

import httpx

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INADMISSIBLE = 4

_TOL_NAMES = ("root", "fd_step", "residual", "class", "i4", "change", "gauge")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_CONFIG):
        super().__init__(message)
        self.code = code


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_gauge_spec(text: str) -> dict:
    """Inline gauge grammar or a JSON file path."""
    if text.endswith(".json"):
        if not os.path.exists(text):
            raise CliError(f"gauge spec file not found: {text}")
        with open(text, "r", encoding="utf-8") as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as exc:
                raise CliError(f"bad gauge JSON in {text}: {exc}") from exc

    parts = text.strip().split(":")
    kind = parts[0]
    if kind == "euclidean":
        if len(parts) != 1:
            raise CliError("euclidean gauge takes no parameters")
        return {"kind": "euclidean"}
    if kind in ("randers", "ellipsoid"):
        if len(parts) != 2:
            raise CliError(f"{kind} gauge needs exactly one parameter, e.g. {kind}:0.5")
        return {"kind": kind, "b": _parse_float(parts[1], f"{kind} parameter")}
    if kind == "translated":
        if len(parts) < 3:
            raise CliError("translated gauge spec is translated:<base spec>:x,y,z")
        base = parse_gauge_spec(":".join(parts[1:-1]))
        return {"kind": "translated", "base": base, "a0": _parse_vec(parts[-1])}
    raise CliError(f"unknown gauge kind {kind!r}")


def parse_curve_spec(text: str) -> dict:
    """Registry key, or a CSV file path loaded into inline samples."""
    if text.endswith(".csv"):
        if not os.path.exists(text):
            raise CliError(f"curve CSV not found: {text}")
        with open(text, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if [c.strip() for c in header.split(",")] != ["t", "x", "y", "z"]:
                raise CliError(f"curve CSV must start with header 't,x,y,z', got {header!r}")
            samples = []
            for lineno, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                cells = line.split(",")
                if len(cells) != 4:
                    raise CliError(f"{text}:{lineno}: expected 4 columns")
                samples.append([_parse_float(c, f"{text}:{lineno}") for c in cells])
        return {"samples": samples}
    return {"key": text}


def _parse_float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise CliError(f"bad number for {what}: {text!r}") from exc


def _parse_vec(text: str) -> list[float]:
    cells = text.split(",")
    if len(cells) != 3:
        raise CliError(f"expected x,y,z triple, got {text!r}")
    return [_parse_float(c, "vector component") for c in cells]


def parse_range(text: str) -> dict:
    cells = text.split(":")
    if len(cells) != 3:
        raise CliError(f"range must be t0:t1:n, got {text!r}")
    t0 = _parse_float(cells[0], "range t0")
    t1 = _parse_float(cells[1], "range t1")
    try:
        n = int(cells[2])
    except ValueError as exc:
        raise CliError(f"range count must be an integer, got {cells[2]!r}") from exc
    return {"t0": t0, "t1": t1, "n": n}


def parse_tols(entries: Optional[list[str]]) -> dict:
    tols: dict = {}
    for entry in entries or []:
        name, sep, value = entry.partition("=")
        if not sep:
            raise CliError(f"tolerance override must be name=value, got {entry!r}")
        if name not in _TOL_NAMES:
            raise CliError(f"unknown tolerance {name!r}; known: {', '.join(_TOL_NAMES)}")
        tols[name] = _parse_float(value, f"tolerance {name}")
    return tols


async def _post_in_process(path: str, payload: dict) -> httpx.Response:
    from .service.app import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(transport=transport, base_url="http://service") as client:
        return await client.post(path, json=payload)


def _post(args, path: str, payload: dict) -> dict:
    """POST to the service (in-process unless --server was given)."""
    try:
        if args.server:
            with httpx.Client(base_url=args.server, timeout=600.0) as client:
                resp = client.post(path, json=payload)
        else:
            resp = asyncio.run(_post_in_process(path, payload))
    except httpx.HTTPError as exc:
        raise CliError(f"service request failed: {exc}", code=EXIT_NUMERICAL) from exc

    if resp.status_code == 200:
        return resp.json()
    if resp.status_code == 422:
        raise CliError(f"invalid request: {resp.text}", code=EXIT_CONFIG)
    try:
        error = resp.json().get("error", {})
    except json.JSONDecodeError:
        error = {}
    kind = error.get("kind", "numerical")
    message = error.get("message", resp.text)
    if kind == "origin_not_interior":
        raise CliError(message, code=EXIT_INADMISSIBLE)
    if kind == "config":
        raise CliError(message, code=EXIT_CONFIG)
    raise CliError(message, code=EXIT_NUMERICAL)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            val = row[col]
            cells.append(_fmt(val) if isinstance(val, float) else str(val))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _flatten_frame_row(row: dict) -> dict:
    flat = {"t": row["t"], "s": row["s"]}
    for name in ("e1", "e2", "e3"):
        for axis, val in zip("xyz", row[name]):
            flat[f"{name}{axis}"] = val
    for name in ("k", "kstar", "w", "wstar", "res1", "res2", "res3"):
        flat[name] = row[name]
    return flat


def cmd_invariants(args) -> int:
    payload = {
        "gauge": parse_gauge_spec(args.gauge),
        "curve": parse_curve_spec(args.curve),
        "range": parse_range(args.range),
        "tolerances": parse_tols(args.tol),
    }
    result = _post(args, "/api/invariants", payload)
    if args.format == "json":
        _emit(args, json.dumps(result, indent=2) + "\n")
    else:
        _emit(args, _rows_to_csv(result["rows"], ["t", "s", "I1", "I2", "I3", "I4"]))
    return EXIT_OK


def cmd_classify(args) -> int:
    payload = {
        "gauge": parse_gauge_spec(args.gauge),
        "curve": parse_curve_spec(args.curve),
        "range": parse_range(args.range),
        "tolerances": parse_tols(args.tol),
    }
    result = _post(args, "/api/classify", payload)
    if args.format == "json":
        _emit(args, json.dumps(result, indent=2) + "\n")
    else:
        _emit(
            args,
            "{}\ni4_value={} max_deviation={} class_tol={} samples={}\n".format(
                result["verdict"],
                _fmt(result["i4_value"]),
                _fmt(result["max_deviation"]),
                _fmt(result["class_tol"]),
                result["count"],
            ),
        )
    return EXIT_OK


def cmd_frame(args) -> int:
    payload = {
        "gauge": parse_gauge_spec(args.gauge),
        "curve": parse_curve_spec(args.curve),
        "range": parse_range(args.range),
        "tolerances": parse_tols(args.tol),
        "c1": args.c1,
        "c2": args.c2,
    }
    result = _post(args, "/api/frame", payload)
    if args.format == "json":
        _emit(args, json.dumps(result, indent=2) + "\n")
    else:
        flat = [_flatten_frame_row(r) for r in result["rows"]]
        columns = (
            ["t", "s"]
            + [f"{e}{a}" for e in ("e1", "e2", "e3") for a in "xyz"]
            + ["k", "kstar", "w", "wstar", "res1", "res2", "res3"]
        )
        _emit(args, _rows_to_csv(flat, columns))
    return EXIT_OK


def cmd_translate_check(args) -> int:
    payload = {
        "gauge": parse_gauge_spec(args.gauge),
        "a0": _parse_vec(args.a0),
        "curve": parse_curve_spec(args.curve),
        "range": parse_range(args.range),
        "tolerances": parse_tols(args.tol),
    }
    result = _post(args, "/api/translate-check", payload)
    if args.format == "json":
        _emit(args, json.dumps(result, indent=2) + "\n")
    else:
        table = _rows_to_csv(
            result["rows"],
            ["invariant", "max_change_vs_base", "max_formula_vs_direct", "changed"],
        )
        status = "PASS" if result["i4_pass"] else "FAIL"
        rel = "<=" if result["i4_pass"] else ">"
        summary = "I4 invariance: {} (max |delta I4| = {} {} {})\n".format(
            status, _fmt(result["i4_max_gap"]), rel, _fmt(result["i4_tol"])
        )
        _emit(args, table + summary)
    return EXIT_OK if result["i4_pass"] else EXIT_NUMERICAL


def cmd_verify_gauge(args) -> int:
    tols = parse_tols(args.tol)
    payload = {
        "gauge": parse_gauge_spec(args.gauge),
        "samples": args.samples,
        "seed": args.seed,
    }
    if "gauge" in tols:
        payload["tol"] = tols["gauge"]
    result = _post(args, "/api/verify-gauge", payload)
    if args.format == "json":
        _emit(args, json.dumps(result, indent=2) + "\n")
    else:
        rows = [
            {"axiom": name, "max_violation": result[name]}
            for name in ("positivity", "homogeneity", "subadditivity", "euler")
        ]
        table = _rows_to_csv(rows, ["axiom", "max_violation"])
        status = "PASS" if result["passed"] else "FAIL"
        _emit(
            args,
            table
            + "gauge axioms: {} ({} samples, tol {})\n".format(
                status, result["sample_count"], _fmt(result["tol"])
            ),
        )
    return EXIT_OK if result["passed"] else EXIT_NUMERICAL


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaugecurves",
        description="Frenet-type frames and invariants for curves in gauge spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_curve: bool = True):
        p.add_argument("--gauge", required=True, help="gauge spec (inline or .json file)")
        if with_curve:
            p.add_argument("--curve", required=True, help="curve key or .csv file")
            p.add_argument(
                "--range",
                required=True,
                help="parameter grid t0:t1:n (use --range=-1:1:21 when t0 is negative)",
            )
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--server", help="base URL of a running service")
        p.add_argument(
            "--tol",
            action="append",
            metavar="NAME=VALUE",
            help=f"tolerance override; names: {', '.join(_TOL_NAMES)}",
        )

    p_inv = sub.add_parser("invariants", help="I1..I4 along a parameter grid")
    add_common(p_inv)
    p_inv.set_defaults(func=cmd_invariants)

    p_cls = sub.add_parser("classify", help="cylindrical helix / rectifying / generic")
    add_common(p_cls)
    p_cls.set_defaults(func=cmd_classify)

    p_frm = sub.add_parser("frame", help="frame vectors and curvatures along a grid")
    add_common(p_frm)
    p_frm.add_argument("--c1", type=float, default=1.0, help="frame constant c1 > 0")
    p_frm.add_argument("--c2", type=float, default=0.0, help="frame constant c2")
    p_frm.set_defaults(func=cmd_frame)

    p_tc = sub.add_parser(
        "translate-check", help="invariants under a translated unit sphere"
    )
    add_common(p_tc)
    p_tc.add_argument("--a0", required=True, help="translation vector x,y,z")
    p_tc.set_defaults(func=cmd_translate_check)

    p_vg = sub.add_parser("verify-gauge", help="sample the gauge axioms")
    add_common(p_vg, with_curve=False)
    p_vg.add_argument("--samples", type=int, default=1000)
    p_vg.add_argument("--seed", type=int, default=0)
    p_vg.set_defaults(func=cmd_verify_gauge)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
