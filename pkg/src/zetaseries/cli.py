"""Command-line client for the identity service.

By default commands run against an in-process instance of the HTTP app, so no
server needs to be started; --url points the same commands at a remote
deployment.  Exit codes: 0 pass/success, 1 failed verification, 2 usage or
domain errors (machine-readable JSON message on stderr).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Any, Optional

import httpx


def _client(url: Optional[str]) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=300.0)
    # in-process ASGI transport; TestClient drives the async app synchronously
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .api import app

    return TestClient(app)


def _fail_usage(payload: Any) -> int:
    print(json.dumps(payload), file=sys.stderr)
    return 2


def _post(client: httpx.Client, path: str, body: dict[str, Any]) -> tuple[int, Any]:
    """POST and normalize transport/HTTP errors to the exit-code contract.

    Returns (exit_code, payload); exit_code 0 means an HTTP 200 payload."""
    try:
        resp = client.post(path, json=body)
    except httpx.HTTPError as exc:
        return 2, {"error": type(exc).__name__, "message": str(exc)}
    try:
        payload = resp.json()
    except ValueError:
        payload = {"error": "BadResponse", "message": resp.text}
    if resp.status_code == 200:
        return 0, payload
    return 2, payload


def _cfg_overrides(args: argparse.Namespace) -> dict[str, Any]:
    cfg: dict[str, Any] = {}
    if getattr(args, "target", None) is not None:
        cfg["target_abs_error"] = args.target
    if getattr(args, "max_terms", None) is not None:
        cfg["max_terms"] = args.max_terms
    return cfg


_PARAM_FLAGS = [
    ("s", "s"),
    ("z", "z"),
    ("spec", "spec"),
    ("method", "method"),
    ("m", "m"),
    ("q", "q"),
    ("p", "p"),
    ("s_prime", "s_prime"),
    ("f", "f"),
    ("factors", "factors"),
    ("seq", "seq"),
    ("lam", "lam"),
]


def _params(args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for attr, key in _PARAM_FLAGS:
        value = getattr(args, attr, None)
        if value is not None:
            out[key] = value
    return out


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s", help="exponent s as a+bi")
    p.add_argument("--z", help="evaluation point z as a+bi")
    p.add_argument("--spec", help="Dirichlet spec name (ones, mobius, ...)")
    p.add_argument("--method", help="summation method: direct, abel, cesaro:k")
    p.add_argument("--m", type=int, help="derivative/log-weight order")
    p.add_argument("--q", help="weight exponent q as a+bi")
    p.add_argument("--p", help="weighted-family exponent p as a+bi")
    p.add_argument("--s-prime", dest="s_prime", help="inner exponent s' as a+bi")
    p.add_argument("--f", help="power series name (expm1, log1p, sin, ...)")
    p.add_argument("--factors", help="multi-factor list 'beta:alpha;beta:alpha'")
    p.add_argument("--seq", help="sequence spec name")
    p.add_argument("--lam", help="general Dirichlet exponent sequence name")


def _add_cfg_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target", type=float, help="target absolute error")
    p.add_argument("--max-terms", type=int, help="term budget per summation")


def _emit(payload: Any) -> None:
    print(json.dumps(payload, indent=2))


def cmd_eval(client: httpx.Client, args: argparse.Namespace) -> int:
    code, payload = _post(
        client,
        "/eval",
        {
            "identity_id": args.identity_id,
            "side": args.side,
            "params": _params(args),
            "cfg": _cfg_overrides(args),
        },
    )
    if code:
        return _fail_usage(payload)
    _emit(payload)
    return 0


def cmd_verify(client: httpx.Client, args: argparse.Namespace) -> int:
    body: dict[str, Any] = {
        "identity_id": args.identity_id,
        "params": _params(args),
        "cfg": _cfg_overrides(args),
    }
    if args.tol is not None:
        body["tolerance"] = args.tol
    code, payload = _post(client, "/verify", body)
    if code:
        return _fail_usage(payload)
    _emit(payload)
    return 1 if payload.get("status") == "fail" else 0


def cmd_suite(client: httpx.Client, args: argparse.Namespace) -> int:
    body: dict[str, Any] = {
        "include_properties": not args.no_properties,
        "cfg": _cfg_overrides(args),
    }
    if args.only is not None:
        body["only"] = args.only
    if args.tol is not None:
        body["tolerance"] = args.tol
    code, payload = _post(client, "/suite", body)
    if code:
        return _fail_usage(payload)
    text = json.dumps(payload, indent=2)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if payload.get("all_pass") else 1


def cmd_poles(client: httpx.Client, args: argparse.Namespace) -> int:
    code, payload = _post(client, "/poles", {"s": args.s, "count": args.count})
    if code:
        return _fail_usage(payload)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(payload["columns"])
        for n, re, im, mod, arg in payload["rows"]:
            # repr round-trips doubles exactly
            writer.writerow([n, repr(re), repr(im), repr(mod), repr(arg)])
    finally:
        if args.out:
            out.close()
    return 0


def cmd_residue(client: httpx.Client, args: argparse.Namespace) -> int:
    body: dict[str, Any] = {
        "spec": args.spec,
        "s": args.s,
        "n": args.n,
        "cfg": _cfg_overrides(args),
    }
    if args.q is not None:
        body["q"] = args.q
    if args.m is not None:
        body["m"] = args.m
    code, payload = _post(client, "/residue", body)
    if code:
        return _fail_usage(payload)
    _emit(payload)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("zetaseries.api:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetaseries",
        description="Evaluate and verify partial-fraction / zeta-series identities.",
    )
    parser.add_argument("--url", help="remote service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one side of an identity")
    p.add_argument("side", choices=["lhs", "rhs"])
    p.add_argument("identity_id")
    _add_param_flags(p)
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="evaluate both sides and compare")
    p.add_argument("identity_id")
    _add_param_flags(p)
    _add_cfg_flags(p)
    p.add_argument("--tol", type=float, help="comparison tolerance")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("suite", help="run the acceptance corpus and property checks")
    p.add_argument("--tol", type=float, help="override per-entry tolerance")
    p.add_argument("--only", help="run a single corpus entry (e.g. 7.13)")
    p.add_argument("--report", help="also write the JSON report to this path")
    p.add_argument("--no-properties", action="store_true")
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("poles", help="export pole locations as CSV")
    p.add_argument("--s", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("residue", help="measure the residue at z = -n^s")
    p.add_argument("--spec", default="ones")
    p.add_argument("--s", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", help="weight exponent for the weighted variant")
    p.add_argument("--m", type=int, help="log-weight order for the weighted variant")
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_residue)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    with _client(args.url) as client:
        return args.func(client, args)


if __name__ == "__main__":
    sys.exit(main())
