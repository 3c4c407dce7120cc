"""HTTP service over the identity catalog: evaluation, verification, the
acceptance suite, and pole/residue measurement.

All endpoints are POST with JSON bodies; complex parameters travel as
"a+bi" strings and are parsed server-side.  Domain violations map to
HTTP 400 with a machine-readable {"error": <type>, "message": <text>} body.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import corpus, poles
from .core import EvalConfig, default_config, parse_complex, require_finite
from .errors import DomainError, ZetaSeriesError
from .specs import get_spec

app = FastAPI(title="zetaseries", version="0.1.0")


class ConfigOverrides(BaseModel):
    """Optional overrides applied on top of the server default EvalConfig."""

    target_abs_error: Optional[float] = None
    max_terms: Optional[int] = None
    euler_maclaurin_order: Optional[int] = None

    def resolve(self) -> EvalConfig:
        cfg = default_config()
        updates = {
            k: v
            for k, v in (
                ("target_abs_error", self.target_abs_error),
                ("max_terms", self.max_terms),
                ("euler_maclaurin_order", self.euler_maclaurin_order),
            )
            if v is not None
        }
        try:
            return replace(cfg, **updates) if updates else cfg
        except ValueError as exc:
            raise DomainError(str(exc)) from exc


class EvalRequest(BaseModel):
    identity_id: str
    side: str
    params: dict[str, Any] = Field(default_factory=dict)
    cfg: ConfigOverrides = Field(default_factory=ConfigOverrides)


class VerifyRequest(BaseModel):
    identity_id: str
    params: dict[str, Any] = Field(default_factory=dict)
    tolerance: float = corpus.DEFAULT_TOLERANCE
    cfg: ConfigOverrides = Field(default_factory=ConfigOverrides)


class SuiteRequest(BaseModel):
    only: Optional[str] = None
    tolerance: Optional[float] = None
    include_properties: bool = True
    cfg: ConfigOverrides = Field(default_factory=ConfigOverrides)


class PolesRequest(BaseModel):
    s: str
    count: int = 10


class ResidueRequest(BaseModel):
    spec: str = "ones"
    s: str
    n: int
    q: Optional[str] = None
    m: Optional[int] = None
    cfg: ConfigOverrides = Field(default_factory=ConfigOverrides)


@app.exception_handler(ZetaSeriesError)
async def _domain_error_handler(request: Request, exc: ZetaSeriesError):
    return JSONResponse(
        status_code=400,
        content={"error": type(exc).__name__, "message": str(exc)},
    )


@app.exception_handler(ValueError)
async def _value_error_handler(request: Request, exc: ValueError):
    # parse failures for complex literals etc. count as usage errors
    return JSONResponse(
        status_code=400,
        content={"error": "ValueError", "message": str(exc)},
    )


@app.get("/health")
async def health() -> dict[str, str]:
    return {"status": "ok", "version": app.version}


@app.post("/eval")
def eval_endpoint(req: EvalRequest) -> dict[str, Any]:
    result = corpus.eval_side(req.identity_id, req.side, req.params, req.cfg.resolve())
    return corpus._sumresult_dict(result)


@app.post("/verify")
def verify_endpoint(req: VerifyRequest) -> dict[str, Any]:
    report = corpus.verify(
        req.identity_id, req.params, tolerance=req.tolerance, cfg=req.cfg.resolve()
    )
    return report.to_dict()


@app.post("/suite")
def suite_endpoint(req: SuiteRequest) -> dict[str, Any]:
    return corpus.run_suite(
        cfg=req.cfg.resolve(),
        only=req.only,
        tolerance=req.tolerance,
        include_properties=req.include_properties,
    )


@app.post("/poles")
def poles_endpoint(req: PolesRequest) -> dict[str, Any]:
    s = require_finite(parse_complex(req.s), "s")
    if s.real <= 1.0:
        raise DomainError("pole export requires Re(s) > 1")
    rows = poles.spiral_export(s, req.count)
    return {
        "columns": ["n", "re", "im", "abs", "arg"],
        "rows": [[r[0], r[1], r[2], r[3], r[4]] for r in rows],
    }


def _pair(value: Optional[complex]) -> Optional[list[float]]:
    if value is None:
        return None
    # +0.0 normalizes negative zeros out of the JSON
    return [corpus._round15(value.real + 0.0), corpus._round15(value.imag + 0.0)]


@app.post("/residue")
def residue_endpoint(req: ResidueRequest) -> dict[str, Any]:
    s = require_finite(parse_complex(req.s), "s")
    if s.real <= 1.0:
        raise DomainError("residue measurement requires Re(s) > 1")
    weighted = None
    if req.q is not None or req.m is not None:
        weighted = (parse_complex(req.q or "0"), int(req.m or 0))
    record = poles.residue(get_spec(req.spec), s, req.n, req.cfg.resolve(), weighted=weighted)
    return {
        "n": record.n,
        "location": _pair(record.location),
        "expected_residue": _pair(record.expected_residue),
        "measured_residue": _pair(record.measured_residue),
        "abs_error": corpus._round15(record.abs_error),
    }
