"""Identity catalog, verification reports and the acceptance corpus.

An identity_id names a family (order-p, weighted, derivative, multi-factor,
dirichlet, compose, dirichlet-compose, general-dirichlet, sequence); both
sides of each family can be evaluated independently and compared.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Mapping, Optional

import numpy as np

from . import series
from .core import EvalConfig, SumResult, default_config, parse_complex
from .errors import (
    BoundaryError,
    DomainError,
    PoleError,
    RadiusError,
    ZetaSeriesError,
)
from .specs import (
    POWER_SERIES,
    get_general_dirichlet,
    get_sequence,
    get_spec,
)
from .summation import DIRECT, SummationMethod

IDENTITY_IDS = (
    "order-p",
    "weighted",
    "derivative",
    "multi-factor",
    "dirichlet",
    "compose",
    "dirichlet-compose",
    "general-dirichlet",
    "sequence",
)

DEFAULT_TOLERANCE = 1e-8


def _round15(x: float) -> float:
    return float(f"{x:.15g}")


def _sumresult_dict(r: SumResult) -> dict[str, Any]:
    return {
        "value": [_round15(r.value.real), _round15(r.value.imag)],
        "err": _round15(r.abs_error_estimate),
        "terms": r.terms_used,
        "method": r.method,
    }


@dataclass(frozen=True)
class IdentityReport:
    identity_id: str
    lhs: Optional[SumResult]
    rhs: Optional[SumResult]
    abs_discrepancy: float
    rel_discrepancy: float
    tolerance: float
    status: str  # "pass" | "fail" | "skipped(<Reason>)"

    def to_dict(self) -> dict[str, Any]:
        return {
            "identity_id": self.identity_id,
            "lhs": _sumresult_dict(self.lhs) if self.lhs is not None else None,
            "rhs": _sumresult_dict(self.rhs) if self.rhs is not None else None,
            "abs_discrepancy": None
            if math.isnan(self.abs_discrepancy)
            else _round15(self.abs_discrepancy),
            "rel_discrepancy": None
            if math.isnan(self.rel_discrepancy)
            else _round15(self.rel_discrepancy),
            "tolerance": _round15(self.tolerance),
            "status": self.status,
        }


def make_report(
    identity_id: str, lhs: SumResult, rhs: SumResult, tolerance: float
) -> IdentityReport:
    disc = abs(lhs.value - rhs.value)
    scale = max(abs(lhs.value), abs(rhs.value))
    rel = disc / scale if scale > 0 else 0.0
    budget = lhs.abs_error_estimate + rhs.abs_error_estimate + tolerance
    status = "pass" if disc <= budget else "fail"
    return IdentityReport(identity_id, lhs, rhs, disc, rel, tolerance, status)


def skipped_report(identity_id: str, reason: str, tolerance: float) -> IdentityReport:
    return IdentityReport(
        identity_id, None, None, math.nan, math.nan, tolerance, f"skipped({reason})"
    )


# ---------------------------------------------------------------------------
# Parameter dispatch


def _cplx(value: Any, default: complex | None = None) -> complex:
    if value is None:
        if default is None:
            raise DomainError("missing required complex parameter")
        return default
    if isinstance(value, str):
        return parse_complex(value)
    return complex(value)


def _parse_factors(value: Any) -> list[tuple[complex, complex]]:
    """Factors as "beta:alpha;beta:alpha" or an iterable of pairs."""
    if value is None:
        raise DomainError("multi-factor identity needs a 'factors' parameter")
    if isinstance(value, str):
        pairs = []
        for chunk in value.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                beta_s, alpha_s = chunk.split(":")
            except ValueError:
                raise DomainError(
                    f"cannot parse factor {chunk!r}, expected 'beta:alpha'"
                ) from None
            pairs.append((parse_complex(beta_s), parse_complex(alpha_s)))
        return pairs
    return [(_cplx(b), _cplx(a)) for b, a in value]


def eval_side(
    identity_id: str,
    side: str,
    params: Mapping[str, Any],
    cfg: EvalConfig | None = None,
) -> SumResult:
    """Evaluate one side of a catalog identity from untyped parameters."""
    if cfg is None:
        cfg = default_config()
    if side not in ("lhs", "rhs"):
        raise DomainError(f"side must be 'lhs' or 'rhs', got {side!r}")
    lhs = side == "lhs"
    method = SummationMethod.parse(str(params.get("method", "direct")))
    z = _cplx(params.get("z"), 0.0 + 0.0j)

    if identity_id in ("order-p", "dirichlet"):
        spec = get_spec(str(params.get("spec", "ones")))
        s = _cplx(params.get("s"))
        if lhs:
            return series.lhs_partial_fraction(spec, s, z, cfg)
        return series.rhs_zeta_series(spec, s, z, method, cfg)

    if identity_id == "weighted":
        m = int(params.get("m", 0))
        q = _cplx(params.get("q"), 0.0 + 0.0j)
        p = _cplx(params.get("p", params.get("s")))
        if lhs:
            return series.lhs_weighted_series(m, q, p, z, cfg)
        return series.rhs_weighted_series(m, q, p, z, method, cfg)

    if identity_id == "derivative":
        spec = get_spec(str(params.get("spec", "ones")))
        s = _cplx(params.get("s"))
        m = int(params.get("m", 0))
        if lhs:
            return series.lhs_derivative(spec, s, z, m, cfg)
        return series.rhs_derivative(spec, s, z, m, method, cfg)

    if identity_id == "multi-factor":
        spec = get_spec(str(params.get("spec", "ones")))
        factors = _parse_factors(params.get("factors"))
        if lhs:
            return series.multi_factor_lhs(factors, spec, z, cfg)
        return series.multi_factor_rhs(factors, spec, z, cfg)

    if identity_id == "compose":
        f = POWER_SERIES.get(str(params.get("f", "expm1")))
        if f is None:
            raise DomainError(f"unknown power series {params.get('f')!r}")
        s = _cplx(params.get("s"))
        if lhs:
            return series.compose_lhs(f, s, z, cfg)
        return series.compose_rhs(f, s, z, method, cfg)

    if identity_id == "dirichlet-compose":
        f = POWER_SERIES.get(str(params.get("f", "expm1")))
        if f is None:
            raise DomainError(f"unknown power series {params.get('f')!r}")
        g = get_spec(str(params.get("spec", "ones")))
        s = _cplx(params.get("s"))
        s_prime = _cplx(params.get("s_prime"), 0.0 + 0.0j)
        if lhs:
            return series.dirichlet_compose_lhs(f, g, s, s_prime, z, cfg)
        return series.dirichlet_compose_rhs(f, g, s, s_prime, z, cfg)

    if identity_id == "general-dirichlet":
        f = POWER_SERIES.get(str(params.get("f", "expm1")))
        if f is None:
            raise DomainError(f"unknown power series {params.get('f')!r}")
        gd = get_general_dirichlet(str(params.get("lam", "linear")))
        s = _cplx(params.get("s"))
        if lhs:
            return series.general_dirichlet_lhs(f, gd, s, z, cfg)
        return series.general_dirichlet_rhs(f, gd, s, z, cfg)

    if identity_id == "sequence":
        seq = get_sequence(str(params.get("seq", "nsq-plus-n")))
        if lhs:
            return series.sequence_lhs(seq, z, cfg)
        return series.sequence_rhs(seq, z, method, cfg)

    raise DomainError(f"unknown identity id {identity_id!r}")


def verify(
    identity_id: str,
    params: Mapping[str, Any],
    tolerance: float = DEFAULT_TOLERANCE,
    cfg: EvalConfig | None = None,
) -> IdentityReport:
    """Evaluate both sides and compare; guard trips produce a skipped report."""
    try:
        lhs = eval_side(identity_id, "lhs", params, cfg)
        rhs = eval_side(identity_id, "rhs", params, cfg)
    except (BoundaryError, PoleError, RadiusError) as exc:
        return skipped_report(identity_id, type(exc).__name__, tolerance)
    return make_report(identity_id, lhs, rhs, tolerance)


# ---------------------------------------------------------------------------
# Acceptance corpus (the paper's worked examples, 7.1 - 7.14)

_CORPUS: list[tuple[str, str, dict[str, Any], float]] = [
    ("7.1", "order-p", {"s": "2", "z": "1", "method": "cesaro:1"}, 1e-6),
    ("7.2", "order-p", {"s": "3", "z": "1", "method": "cesaro:1"}, 1e-6),
    ("7.3", "derivative", {"s": "2", "z": "1", "m": 1, "method": "cesaro:2"}, 1e-5),
    ("7.4", "compose", {"f": "log1p", "s": "2", "z": "1", "method": "abel"}, 1e-6),
    ("7.5", "compose", {"f": "expm1", "s": "2", "z": "1"}, 1e-9),
    ("7.6", "compose", {"f": "sin", "s": "2", "z": "0.5"}, 1e-9),
    ("7.7", "dirichlet", {"spec": "mobius", "s": "2", "z": "0.5"}, 1e-8),
    ("7.8", "dirichlet", {"spec": "von-mangoldt", "s": "2", "z": "0.5"}, 1e-8),
    ("7.9", "dirichlet", {"spec": "totient", "s": "3", "z": "0.5"}, 1e-8),
    ("7.10", "dirichlet", {"spec": "beta", "s": "2", "z": "0.5"}, 1e-9),
    ("7.10b", "dirichlet", {"spec": "beta-shifted", "s": "2", "z": "0.5"}, 1e-9),
    ("7.11", "order-p", {"s": "2", "z": "-0.25"}, 1e-12),
    ("7.12", "order-p", {"s": "2", "z": "-0.0625"}, 1e-12),
    ("7.13", "order-p", {"s": "4", "z": "1", "method": "abel"}, 1e-10),
    ("7.14", "sequence", {"seq": "nsq-plus-n", "z": "1"}, 1e-10),
]


def corpus_entries() -> list[tuple[str, str, dict[str, Any], float]]:
    return [(cid, ident, dict(p), tol) for cid, ident, p, tol in _CORPUS]


# ---------------------------------------------------------------------------
# Randomized identity-equivalence property checks

_PROPERTY_SEED = 20260824
_PROPERTY_COUNT = 50

_PROPERTY_SPECS = ("ones", "mobius", "von-mangoldt", "totient", "beta", "char:3:1", "char:5:2")


def _property_case(i: int, rng: np.random.Generator) -> tuple[str, dict[str, Any]]:
    """Deterministic admissible parameter draw for property check i."""
    z_angle = rng.uniform(0, 2 * math.pi)
    z_mod = rng.uniform(0.05, 0.9)
    z = z_mod * complex(math.cos(z_angle), math.sin(z_angle))
    z_str = f"{z.real:.6f}{z.imag:+.6f}i"
    family = i % 7
    if family == 0:
        spec = _PROPERTY_SPECS[i // 7 % len(_PROPERTY_SPECS)]
        s = rng.uniform(1.3, 3.5) + (2.0 if spec == "totient" else 0.0)
        return "order-p", {"spec": spec, "s": f"{s:.6f}", "z": z_str}
    if family == 1:
        m = int(rng.integers(1, 4))
        s = rng.uniform(1.5, 3.0)
        return "derivative", {"s": f"{s:.6f}", "z": z_str, "m": m}
    if family == 2:
        m = int(rng.integers(0, 3))
        q = rng.uniform(0.0, 1.0)
        p = q + rng.uniform(1.3, 2.5)
        return "weighted", {"m": m, "q": f"{q:.6f}", "p": f"{p:.6f}", "z": z_str}
    if family == 3:
        b1 = rng.uniform(1.5, 3.0)
        b2 = rng.uniform(1.5, 3.0)
        a1 = rng.uniform(0.2, 1.0)
        a2 = rng.uniform(-1.0, -0.2)
        factors = f"{b1:.6f}:{a1:.6f};{b2:.6f}:{a2:.6f}"
        return "multi-factor", {"factors": factors, "z": z_str}
    if family == 4:
        f = ("expm1", "log1p", "sin")[i // 7 % 3]
        s = rng.uniform(1.3, 3.0)
        return "compose", {"f": f, "s": f"{s:.6f}", "z": z_str}
    if family == 5:
        spec = ("mobius", "beta", "von-mangoldt")[i // 7 % 3]
        s = rng.uniform(1.3, 2.5)
        sp = rng.uniform(0.0, 1.0)
        return "dirichlet-compose", {
            "f": "expm1", "spec": spec, "s": f"{s:.6f}", "s_prime": f"{sp:.6f}",
            "z": z_str,
        }
    seq = ("nsq-plus-n", "nsq", "ncube")[i // 7 % 3]
    return "sequence", {"seq": seq, "z": z_str}


def property_reports(cfg: EvalConfig | None = None) -> list[IdentityReport]:
    rng = np.random.default_rng(_PROPERTY_SEED)
    reports = []
    for i in range(_PROPERTY_COUNT):
        identity_id, params = _property_case(i, rng)
        rep = verify(identity_id, params, tolerance=1e-10, cfg=cfg)
        reports.append(
            IdentityReport(
                f"prop-{i:02d}:{identity_id}", rep.lhs, rep.rhs,
                rep.abs_discrepancy, rep.rel_discrepancy, rep.tolerance, rep.status,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# Suite driver


def run_suite(
    cfg: EvalConfig | None = None,
    only: Optional[str] = None,
    tolerance: Optional[float] = None,
    include_properties: bool = True,
) -> dict[str, Any]:
    """Run the acceptance corpus (optionally a single entry) plus the
    randomized property checks; deterministic, sorted report assembly."""
    entries = corpus_entries()
    if only is not None:
        entries = [e for e in entries if e[0] == only]
        if not entries:
            raise DomainError(f"no corpus entry named {only!r}")
        include_properties = False

    def run_entry(entry):
        cid, identity_id, params, tol = entry
        if tolerance is not None:
            tol = tolerance
        # evaluate each side at the entry's own tolerance; boundary methods
        # cannot reach the default 1e-12 target
        entry_cfg = (cfg if cfg is not None else default_config()).with_target(tol)
        try:
            rep = verify(identity_id, params, tolerance=tol, cfg=entry_cfg)
        except ZetaSeriesError as exc:
            return cid, skipped_report(identity_id, type(exc).__name__, tol)
        return cid, rep

    with ThreadPoolExecutor(max_workers=4) as pool:
        tagged = list(pool.map(run_entry, entries))
    reports = [
        IdentityReport(
            f"{cid}:{rep.identity_id}", rep.lhs, rep.rhs, rep.abs_discrepancy,
            rep.rel_discrepancy, rep.tolerance, rep.status,
        )
        for cid, rep in tagged
    ]
    if include_properties:
        reports.extend(property_reports(cfg))
    reports.sort(key=lambda r: r.identity_id)

    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for rep in reports:
        key = rep.status if rep.status in counts else "skipped"
        counts[key] += 1
    return {
        "reports": [r.to_dict() for r in reports],
        "summary": {**counts, "total": len(reports)},
        "all_pass": counts["fail"] == 0 and counts["skipped"] == 0,
    }
