"""Command-line front end: job files in, deterministic reports out.

Every invocation runs one task, either described by a JSON job file or
assembled from subcommand flags, and prints one report.  The certificate
section of a report is a function of the input alone (hashes of the
canonicalized result, no timestamps), so two runs on the same input are
byte-identical there.  Exit codes: 0 verified/success, 2 refuted or
mismatch with witness, 3 not-found-within-bounds or unstabilized,
1 input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from importlib import resources

import jsonschema

from . import __version__
from .birational import (check_v_axioms, hodge_ideal_zero, jump_value,
                         jumping_numbers, lct, multiplier_monomial,
                         summand_comparison_report, vfil_on_ring,
                         vfil_summand, INFINITE_THRESHOLD)
from .fs import (B_VAR, FeqSpec, parse_feq_file, verify_feq_formal,
                 verify_feq_specialized)
from .charp import test_ideal_monomial, test_ideal_summand
from .graded import GradedOperator, apply_graded, certify_denominators
from .monomial import MonomialIdeal
from .multipoly import MultiPoly, PolyParseError, parse_poly
from .semigroup import (Semigroup, check_preserves_subring,
                        parse_semigroup_file, restrict_operator)
from .solver import (AnsatzCapError, AnsatzSpec, BsResult,
                     NotFoundWithinBounds, divide_by_s_plus_one,
                     minimal_exponent, mustata_lift, search_feq,
                     NO_FINITE_ROOT)
from .weyl import apply_weyl, parse_weyl, preserves_ideal, weyl_to_str

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REFUTED = 2
EXIT_UNRESOLVED = 3

TASKS = ("verify-feq", "bs-search", "restrict-op", "check-extensible",
         "test-ideal", "multiplier", "lct", "jumping-numbers", "vfil",
         "hodge0", "compare-summand", "mustata-check")


class JobError(ValueError):
    pass


_BOUNDS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "max_order": {"type": "integer", "minimum": 0},
        "max_coeff_degree": {"type": "integer", "minimum": 0},
        "max_s_degree": {"type": "integer", "minimum": 0},
        "max_b_degree": {"type": "integer", "minimum": 0},
    },
    "required": ["max_order", "max_coeff_degree", "max_s_degree",
                 "max_b_degree"],
}

_GENS = {"type": "array",
         "items": {"type": "array", "items": {"type": "integer",
                                              "minimum": 0}}}

_PAYLOAD_SCHEMAS = {
    "verify-feq": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "feq_file": {"type": "string"},
            "feq_text": {"type": "string"},
            "mode": {"enum": ["formal", "specialized", "both"]},
        },
    },
    "bs-search": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "ring": {"type": "array", "items": {"type": "string"}},
            "f": {"type": "array", "items": {"type": "string"}},
            "g": {"type": "string"},
            "kind": {"enum": ["principal", "relative", "bmsMulti"]},
            "c_vectors": {"type": "array",
                          "items": {"type": "array",
                                    "items": {"type": "integer"}}},
            "bounds": _BOUNDS_SCHEMA,
            "semigroup_file": {"type": "string"},
            "semigroup_text": {"type": "string"},
        },
        "required": ["ring", "f", "bounds"],
    },
    "mustata-check": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "ring": {"type": "array", "items": {"type": "string"}},
            "f": {"type": "array", "items": {"type": "string"}},
            "c_vectors": {"type": "array",
                          "items": {"type": "array",
                                    "items": {"type": "integer"}}},
            "tuple_bounds": _BOUNDS_SCHEMA,
            "lift_bounds": _BOUNDS_SCHEMA,
        },
        "required": ["ring", "f", "c_vectors", "tuple_bounds",
                     "lift_bounds"],
    },
    "restrict-op": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "ring": {"type": "array", "items": {"type": "string"}},
            "semigroup_file": {"type": "string"},
            "semigroup_text": {"type": "string"},
            "operator": {"type": "string"},
            "arguments": {"type": "array", "items": {"type": "string"}},
        },
        "required": ["ring", "operator", "arguments"],
    },
    "check-extensible": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "ring": {"type": "array", "items": {"type": "string"}},
            "semigroup_file": {"type": "string"},
            "semigroup_text": {"type": "string"},
            "operator": {"type": "string"},
            "degree_bound": {"type": "integer", "minimum": 0},
        },
        "required": ["ring", "operator", "degree_bound"],
    },
    "test-ideal": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "prime": {"type": "integer", "minimum": 2},
            "lambda": {"type": "string"},
            "e_max": {"type": "integer", "minimum": 1},
            "ideal": _GENS,
            "semigroup_file": {"type": "string"},
            "semigroup_text": {"type": "string"},
        },
        "required": ["prime", "lambda", "ideal"],
    },
    "multiplier": {
        "type": "object", "additionalProperties": False,
        "properties": {"ideal": _GENS, "lambda": {"type": "string"}},
        "required": ["ideal", "lambda"],
    },
    "lct": {
        "type": "object", "additionalProperties": False,
        "properties": {"ideal": _GENS},
        "required": ["ideal"],
    },
    "jumping-numbers": {
        "type": "object", "additionalProperties": False,
        "properties": {"ideal": _GENS, "up_to": {"type": "string"}},
        "required": ["ideal", "up_to"],
    },
    "vfil": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "ideal": _GENS,
            "alpha": {"type": "string"},
            "semigroup_file": {"type": "string"},
            "semigroup_text": {"type": "string"},
            "check_axioms_window": {"type": "string"},
        },
        "required": ["ideal", "alpha"],
    },
    "hodge0": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "ring": {"type": "array", "items": {"type": "string"}},
            "f": {"type": "string"},
            "lambda": {"type": "string"},
        },
        "required": ["ring", "f", "lambda"],
    },
    "compare-summand": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "ideal": _GENS,
            "lambda": {"type": "string"},
            "semigroup_file": {"type": "string"},
            "semigroup_text": {"type": "string"},
        },
        "required": ["ideal", "lambda"],
    },
}

JOB_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "_description": {"type": "string"},
        "version": {"const": "1"},
        "task": {"enum": list(TASKS)},
        "payload": {"type": "object"},
    },
    "required": ["version", "task", "payload"],
}


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _certificate(result: dict) -> dict:
    digest = hashlib.sha256(canonical_json(result).encode()).hexdigest()
    return {"result_sha256": digest, "tool_version": __version__}


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise JobError(f"bad rational literal {text!r}: {exc}") from None


def _ideal_from_payload(gens, dim=None) -> MonomialIdeal:
    if not gens:
        raise JobError("empty generator list")
    dim = len(gens[0]) if dim is None else dim
    return MonomialIdeal.from_generators(dim, [tuple(g) for g in gens])


def _load_semigroup(payload: dict, base_dir) -> Semigroup | None:
    if "semigroup_text" in payload:
        return parse_semigroup_file(payload["semigroup_text"])
    if "semigroup_file" in payload:
        path = payload["semigroup_file"]
        text = _read_input_file(path, base_dir)
        return parse_semigroup_file(text)
    return None


def _read_input_file(path: str, base_dir) -> str:
    import os
    candidates = [path]
    if base_dir is not None:
        candidates.append(os.path.join(base_dir, path))
    candidates.append(str(_fixture_dir() / path))
    for cand in candidates:
        if os.path.exists(cand):
            with open(cand, encoding="utf-8") as fh:
                return fh.read()
    raise JobError(f"input file not found: {path}")


def _fixture_dir():
    return resources.files("bsfe") / "fixtures"


# ---------------------------------------------------------------------------
# Task handlers: each returns (result_payload: dict, exit_code: int)
# ---------------------------------------------------------------------------


def _feq_to_report(spec: FeqSpec) -> dict:
    ops = {}
    for c, op in sorted(spec.operators.items()):
        key = "(" + ",".join(str(x) for x in c) + ")"
        ops[key] = (weyl_to_str(op) if hasattr(op, "terms")
                    else _graded_to_str(op))
    return {
        "kind": spec.kind,
        "b": str(spec.b_poly),
        "g": None if spec.g is None else str(spec.g),
        "operators": ops,
    }


def _graded_to_str(op: GradedOperator) -> str:
    pieces = []
    for p in op.pieces:
        shift = ",".join(str(s) for s in p.shift)
        pieces.append(f"shift ({shift}); num {p.num}; den {p.den}")
    return " | ".join(pieces)


def _run_verify_feq(payload: dict, base_dir) -> tuple[dict, int]:
    if "feq_text" in payload:
        text = payload["feq_text"]
    elif "feq_file" in payload:
        text = _read_input_file(payload["feq_file"], base_dir)
    else:
        raise JobError("verify-feq needs feq_file or feq_text")
    mode = payload.get("mode", "both")
    spec, ctx, presentation = parse_presented_feq(text)
    result = {"equation": _feq_to_report(spec), "mode": mode,
              "ring_presentation": presentation.describe()}
    code = EXIT_OK
    if presentation.is_ambient() and mode in ("formal", "both"):
        formal = verify_feq_formal(spec, ctx)
        result["formal"] = {"verified": formal.verified}
        if not formal.verified:
            result["formal"]["discrepancy"] = str(formal.discrepancy)
            code = EXIT_REFUTED
    elif mode == "formal":
        raise JobError(
            "formal verification needs the ambient polynomial ring; this "
            "fixture declares a quotient or graded presentation")
    if mode in ("specialized", "both"):
        cert = presentation.certification()
        if cert is not None:
            result["presentation_certificate"] = cert["report"]
            if not cert["ok"]:
                result["specialized"] = {
                    "verified": False,
                    "reason": "presentation certificate failed"}
                return result, EXIT_REFUTED
        special = verify_feq_specialized(
            spec, ctx, apply_at=presentation.apply_at(),
            normalize=presentation.normalize())
        result["specialized"] = {"verified": special.verified,
                                 "grid_bound": special.grid_bound}
        if not special.verified:
            result["specialized"]["witness_t"] = list(special.witness_t)
            code = EXIT_REFUTED
    return result, code


def _bounds_from_payload(bounds: dict, max_unknowns: int) -> AnsatzSpec:
    return AnsatzSpec(bounds["max_order"], bounds["max_coeff_degree"],
                      bounds["max_s_degree"], bounds["max_b_degree"],
                      max_unknowns=max_unknowns)


def _run_bs_search(payload: dict, base_dir,
                   max_unknowns: int) -> tuple[dict, int]:
    ring = payload["ring"]
    f_tuple = [parse_poly(text, ring) for text in payload["f"]]
    g = parse_poly(payload["g"], ring) if "g" in payload else None
    kind = payload.get("kind", "principal" if len(f_tuple) == 1
                       else "bmsMulti")
    if "c_vectors" in payload:
        c_vectors = tuple(tuple(c) for c in payload["c_vectors"])
    elif len(f_tuple) == 1:
        c_vectors = ((1,),)
    else:
        raise JobError("c_vectors required for several f entries")
    ansatz = _bounds_from_payload(payload["bounds"], max_unknowns)
    ansatz.kind = kind
    ansatz.c_vectors = c_vectors
    ansatz.subring = _load_semigroup(payload, base_dir)
    outcome = search_feq(f_tuple, g, ansatz, ring)
    if isinstance(outcome, NotFoundWithinBounds):
        return ({"found": False,
                 "message": outcome.message,
                 "infeasible_degrees": outcome.infeasible_degrees,
                 "unknowns": outcome.unknown_count},
                EXIT_UNRESOLVED)
    alpha = minimal_exponent(outcome.b_poly)
    return ({"found": True,
             "b": str(outcome.b_poly),
             "witness": _feq_to_report(outcome.witness),
             "certificate_verified": outcome.certificate_verified,
             "minimal_within_bounds": outcome.minimal_within_bounds,
             "infeasible_degrees": outcome.infeasible_degrees,
             "unknowns": outcome.unknown_count,
             "minimal_exponent": ("no-finite-root"
                                  if alpha is NO_FINITE_ROOT
                                  else str(alpha))},
            EXIT_OK)


def _run_mustata_check(payload: dict, base_dir,
                       max_unknowns: int) -> tuple[dict, int]:
    ring = payload["ring"]
    f_tuple = [parse_poly(text, ring) for text in payload["f"]]
    tuple_ansatz = _bounds_from_payload(payload["tuple_bounds"],
                                        max_unknowns)
    tuple_ansatz.kind = "bmsMulti"
    tuple_ansatz.c_vectors = tuple(tuple(c) for c in payload["c_vectors"])
    tuple_result = search_feq(f_tuple, None, tuple_ansatz, ring)
    result: dict = {}
    if isinstance(tuple_result, NotFoundWithinBounds):
        result["tuple_search"] = {"found": False,
                                  "message": tuple_result.message}
        return result, EXIT_UNRESOLVED
    result["tuple_search"] = {"found": True, "b": str(tuple_result.b_poly)}
    h, new_vars = mustata_lift(f_tuple, ring)
    result["lift"] = {"h": str(h), "ring": list(new_vars)}
    lift_ansatz = _bounds_from_payload(payload["lift_bounds"], max_unknowns)
    lift_result = search_feq([h], None, lift_ansatz, new_vars)
    if isinstance(lift_result, NotFoundWithinBounds):
        result["lift_search"] = {"found": False,
                                 "message": lift_result.message}
        return result, EXIT_UNRESOLVED
    result["lift_search"] = {"found": True, "b": str(lift_result.b_poly)}
    s_plus_one = parse_poly("s+1", [B_VAR])
    predicted = s_plus_one * tuple_result.b_poly
    agree = predicted == lift_result.b_poly
    result["identity"] = {
        "(s+1)*b_tuple": str(predicted),
        "b_lift": str(lift_result.b_poly),
        "agree": agree,
    }
    return result, EXIT_OK if agree else EXIT_REFUTED


def _run_restrict_op(payload: dict, base_dir) -> tuple[dict, int]:
    ring = payload["ring"]
    semigroup = _load_semigroup(payload, base_dir)
    if semigroup is None:
        raise JobError("restrict-op needs a semigroup")
    op = parse_weyl(payload["operator"], ring)
    restricted = restrict_operator(semigroup, op)
    images = []
    for text in payload["arguments"]:
        arg = parse_poly(text, ring)
        images.append({"argument": str(arg),
                       "image": str(restricted.apply(arg))})
    return {"operator": weyl_to_str(op), "images": images}, EXIT_OK


def _run_check_extensible(payload: dict, base_dir) -> tuple[dict, int]:
    ring = payload["ring"]
    semigroup = _load_semigroup(payload, base_dir)
    if semigroup is None:
        raise JobError("check-extensible needs a semigroup")
    op = parse_weyl(payload["operator"], ring)
    report = check_preserves_subring(semigroup, op,
                                     payload["degree_bound"])
    result = {
        "operator": weyl_to_str(op),
        "preserved_up_to_bound": report.preserved,
        "exact": report.exact,
        "degree_bound": report.degree_bound,
        "notes": report.notes or [],
    }
    if not report.preserved:
        result["counterexample"] = list(report.counterexample)
        result["image"] = str(report.image)
        return result, EXIT_REFUTED
    return result, EXIT_OK


def _run_test_ideal(payload: dict, base_dir) -> tuple[dict, int]:
    p = payload["prime"]
    lam = _fraction(payload["lambda"])
    e_max = payload.get("e_max", 4)
    semigroup = _load_semigroup(payload, base_dir)
    if semigroup is None:
        ideal = _ideal_from_payload(payload["ideal"])
        report = test_ideal_monomial(ideal, lam, p, e_max)
        result = {
            "prime": p, "lambda": str(lam),
            "levels": [[list(g) for g in level.gens]
                       for level in report.levels],
            "generators": [list(g) for g in report.ideal.gens],
            "stabilized_at": report.stabilized_at,
        }
        return result, (EXIT_OK if report.stabilized_at is not None
                        else EXIT_UNRESOLVED)
    report = test_ideal_summand(semigroup, [tuple(g) for g in
                                            payload["ideal"]],
                                lam, p, e_max)
    result = {
        "prime": p, "lambda": str(lam),
        "retraction_generators": [list(g) for g in report.retraction_gens],
        "intrinsic_generators": (None if report.intrinsic_gens is None
                                 else [list(g)
                                       for g in report.intrinsic_gens]),
        "intrinsic_route": report.intrinsic_route,
        "match": report.match,
        "hypotheses_hold": report.hypotheses_hold,
        "hypothesis_failures": report.reasons,
    }
    return result, (EXIT_REFUTED if report.match is False else EXIT_OK)


def _run_multiplier(payload: dict) -> tuple[dict, int]:
    ideal = _ideal_from_payload(payload["ideal"])
    lam = _fraction(payload["lambda"])
    out = multiplier_monomial(ideal, lam)
    return ({"lambda": str(lam),
             "generators": [list(g) for g in out.gens]}, EXIT_OK)


def _run_lct(payload: dict) -> tuple[dict, int]:
    ideal = _ideal_from_payload(payload["ideal"])
    value = lct(ideal)
    return ({"lct": ("infinite" if value is INFINITE_THRESHOLD
                     else str(value))}, EXIT_OK)


def _run_jumping_numbers(payload: dict) -> tuple[dict, int]:
    ideal = _ideal_from_payload(payload["ideal"])
    up_to = _fraction(payload["up_to"])
    values = jumping_numbers(ideal, up_to)
    return ({"up_to": str(up_to),
             "jumping_numbers": [str(v) for v in values]}, EXIT_OK)


def _run_vfil(payload: dict, base_dir) -> tuple[dict, int]:
    alpha = _fraction(payload["alpha"])
    semigroup = _load_semigroup(payload, base_dir)
    gens = [tuple(g) for g in payload["ideal"]]
    result: dict = {"alpha": str(alpha)}
    if semigroup is None:
        ideal = _ideal_from_payload(payload["ideal"])
        out = vfil_on_ring(ideal, alpha)
        result["generators"] = [list(g) for g in out.gens]
        if "check_axioms_window" in payload:
            step = _fraction(payload["check_axioms_window"])
            window = {}
            a = Fraction(0)
            while a <= alpha + 1:
                window[a] = vfil_on_ring(ideal, a)
                a += step
            axioms = check_v_axioms(window, ideal)
            result["axioms"] = {
                name: {"passed": rep.passed, "failures": rep.failures,
                       "notes": rep.notes}
                for name, rep in axioms.items()}
            if not all(rep.passed for rep in axioms.values()):
                return result, EXIT_REFUTED
    else:
        out = vfil_summand(semigroup, gens, alpha)
        result["generators"] = [list(g) for g in out]
    return result, EXIT_OK


def _run_hodge0(payload: dict) -> tuple[dict, int]:
    ring = payload["ring"]
    f = parse_poly(payload["f"], ring)
    lam = _fraction(payload["lambda"])
    out = hodge_ideal_zero(f, lam)
    return ({"f": str(f), "lambda": str(lam),
             "generators": [list(g) for g in out.gens]}, EXIT_OK)


def _run_compare_summand(payload: dict, base_dir) -> tuple[dict, int]:
    semigroup = _load_semigroup(payload, base_dir)
    if semigroup is None:
        raise JobError("compare-summand needs a semigroup")
    lam = _fraction(payload["lambda"])
    report = summand_comparison_report(
        semigroup, [tuple(g) for g in payload["ideal"]], lam)
    result = {
        "lambda": str(lam),
        "intersection_generators": [list(g)
                                    for g in report.intersection_gens],
        "intrinsic_generators": (None if report.intrinsic_gens is None
                                 else [list(g)
                                       for g in report.intrinsic_gens]),
        "intrinsic_route": report.intrinsic_route,
        "match": report.match,
        "hypotheses_hold": report.hypotheses_hold,
        "hypothesis_failures": report.reasons,
    }
    if report.note:
        result["note"] = report.note
    return result, (EXIT_REFUTED if report.match is False else EXIT_OK)


# ---------------------------------------------------------------------------
# Ring presentations inside functional-equation fixtures
# ---------------------------------------------------------------------------


class RingPresentation:
    """Ambient ring, monomial quotient, or graded-operator domain."""

    def __init__(self, ctx, quotient: MonomialIdeal | None = None,
                 domain=None, weyl_ops=None):
        self.ctx = ctx
        self.quotient = quotient
        self.domain = domain
        self.weyl_ops = weyl_ops or {}

    def is_ambient(self) -> bool:
        return self.quotient is None and self.domain is None

    def describe(self) -> str:
        if self.quotient is not None:
            return (f"quotient by the monomial ideal "
                    f"{self.quotient}")
        if self.domain is not None:
            return f"monomial subalgebra with gaps {self.domain.gaps}"
        return "ambient polynomial ring"

    def certification(self) -> dict | None:
        if self.quotient is not None:
            reports = {}
            ok = True
            for c, op in self.weyl_ops.items():
                cert = preserves_ideal(op, self.quotient)
                reports[str(c)] = {"preserves_ideal": cert.preserves}
                if not cert.preserves:
                    reports[str(c)]["witness_exponent"] = list(
                        cert.witness_exponent)
                    ok = False
            return {"ok": ok, "report": reports}
        if self.domain is not None:
            return {"ok": True, "report": {"denominators":
                                           "certified nonvanishing"}}
        return None

    def normalize(self):
        if self.quotient is None:
            return None
        ideal = self.quotient

        def nf(p: MultiPoly) -> MultiPoly:
            kept = {e: c for e, c in p.terms.items()
                    if not ideal.contains(e)}
            return MultiPoly(p.vars, kept)
        return nf

    def apply_at(self):
        if self.domain is None:
            return None
        domain = self.domain

        def apply(op, t, poly):
            if isinstance(op, GradedOperator):
                return apply_graded(op, poly, domain)
            return apply_weyl(op, poly, list(t))
        return apply


def parse_presented_feq(text: str):
    """Functional-equation fixture plus optional ring presentation.

    Beyond the base format, accepts ``quotient: <poly gens>`` (monomial
    quotient, operators checked against the log condition), ``domain:
    gaps n1 n2 ..`` and ``gop (c): shift ..; num ..; den ..`` lines for
    graded operators on a monomial subalgebra.
    """
    from .graded import GradedPiece, NumericalSemigroup

    base_lines = []
    quotient_gens = []
    gap_list = None
    gop_lines = []
    ring = None
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped.startswith("ring:"):
            ring = stripped.split(":", 1)[1].split()
        if stripped.startswith("quotient:"):
            quotient_gens.append(stripped.split(":", 1)[1].strip())
        elif stripped.startswith("domain:"):
            value = stripped.split(":", 1)[1].split()
            if value[0] != "gaps":
                raise JobError("domain line must be 'domain: gaps n1 ..'")
            gap_list = tuple(int(x) for x in value[1:])
        elif stripped.startswith("gop"):
            gop_lines.append(stripped)
        else:
            base_lines.append(raw)
    if gop_lines and ring is None:
        raise JobError("graded operator fixture is missing the ring line")

    ops_extra = {}
    for line in gop_lines:
        head, body = line.split(":", 1)
        vec = head[3:].strip()
        c = tuple(int(x) for x in vec[1:-1].split(","))
        fields = {}
        for part in body.split(";"):
            kw, val = part.strip().split(None, 1)
            fields[kw] = val.strip()
        shift = tuple(int(x) for x in fields["shift"].split(","))
        num = parse_poly(fields["num"], ring)
        den = parse_poly(fields["den"], ring)
        piece = GradedPiece(shift, num, den)
        if c in ops_extra:
            ops_extra[c] = GradedOperator(tuple(ring),
                                          ops_extra[c].pieces + (piece,))
        else:
            ops_extra[c] = GradedOperator(tuple(ring), [piece])

    spec, ctx = parse_feq_file("\n".join(base_lines),
                               extra_operators=ops_extra)
    weyl_ops = {c: op for c, op in spec.operators.items()
                if not isinstance(op, GradedOperator)}

    quotient = None
    if quotient_gens:
        gens = []
        for gtext in quotient_gens:
            poly = parse_poly(gtext, ctx.xvars)
            if not poly.is_monomial():
                raise JobError("quotient generators must be monomials")
            gens.append(next(iter(poly.terms)))
        quotient = MonomialIdeal.from_generators(len(ctx.xvars), gens)
    domain = None
    if gap_list is not None:
        domain = NumericalSemigroup(gap_list)
        for op in ops_extra.values():
            certify_denominators(op, domain)
    return spec, ctx, RingPresentation(ctx, quotient, domain, weyl_ops)


# ---------------------------------------------------------------------------
# Dispatch, fixtures, reports
# ---------------------------------------------------------------------------


def run_job_dict(job: dict, base_dir=None,
                 max_unknowns: int = 20000) -> tuple[dict, int]:
    try:
        jsonschema.validate(job, JOB_SCHEMA)
        task = job["task"]
        payload = job["payload"]
        jsonschema.validate(payload, _PAYLOAD_SCHEMAS[task])
    except jsonschema.ValidationError as exc:
        raise JobError(f"job validation failed: {exc.message}") from None
    started = time.monotonic()
    if task == "verify-feq":
        result, code = _run_verify_feq(payload, base_dir)
    elif task == "bs-search":
        result, code = _run_bs_search(payload, base_dir, max_unknowns)
    elif task == "mustata-check":
        result, code = _run_mustata_check(payload, base_dir, max_unknowns)
    elif task == "restrict-op":
        result, code = _run_restrict_op(payload, base_dir)
    elif task == "check-extensible":
        result, code = _run_check_extensible(payload, base_dir)
    elif task == "test-ideal":
        result, code = _run_test_ideal(payload, base_dir)
    elif task == "multiplier":
        result, code = _run_multiplier(payload)
    elif task == "lct":
        result, code = _run_lct(payload)
    elif task == "jumping-numbers":
        result, code = _run_jumping_numbers(payload)
    elif task == "vfil":
        result, code = _run_vfil(payload, base_dir)
    elif task == "hodge0":
        result, code = _run_hodge0(payload)
    elif task == "compare-summand":
        result, code = _run_compare_summand(payload, base_dir)
    else:  # pragma: no cover - schema forbids
        raise JobError(f"unknown task {task}")
    elapsed = time.monotonic() - started
    report = {
        "task": task,
        "result": result,
        "certificate": _certificate(result),
        "exit_code": code,
        "timing_seconds": round(elapsed, 6),
    }
    return report, code


def run_job(path: str, max_unknowns: int = 20000) -> tuple[dict, int]:
    import os
    try:
        with open(path, encoding="utf-8") as fh:
            job = json.load(fh)
    except OSError as exc:
        raise JobError(f"cannot read job file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise JobError(
            f"job parse error at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from None
    return run_job_dict(job, base_dir=os.path.dirname(os.path.abspath(path)),
                        max_unknowns=max_unknowns)


def list_fixtures() -> list[dict]:
    catalog = []
    root = _fixture_dir()
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.startswith("."):
            continue
        description = ""
        text = entry.read_text(encoding="utf-8")
        for line in text.splitlines():
            if line.startswith("# description:"):
                description = line.split(":", 1)[1].strip()
                break
            if line.strip().startswith('"_description"'):
                description = line.split(":", 1)[1].strip().strip('",')
                break
        catalog.append({"name": entry.name, "description": description})
    return catalog


def _print_report(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
        return

    def walk(prefix: str, value) -> None:
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}{k}.", value[k])
        elif isinstance(value, list):
            print(f"{prefix[:-1]}: {value}")
        else:
            print(f"{prefix[:-1]}: {value}")

    walk("", report)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"],
                        default="json")
    common.add_argument("--threads", type=int, default=1,
                        help="reserved; evaluation is sequential and "
                             "deterministic")
    common.add_argument("--max-unknowns", type=int, default=20000)
    parser = argparse.ArgumentParser(
        prog="bsfe",
        parents=[common],
        description="Exact functional-equation and singularity-invariant "
                    "calculator for monomial and toric data")
    parser.add_argument("--job", help="run a JSON job file")
    sub = parser.add_subparsers(dest="command")

    def add(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    run_p = add("run", help="run a JSON job file")
    run_p.add_argument("job_path")

    add("list-fixtures", help="catalog of shipped inputs")

    feq = add("verify-feq", help="check a functional equation")
    feq.add_argument("--feq", required=True, help="fixture file path")
    feq.add_argument("--mode", choices=["formal", "specialized", "both"],
                     default="both")

    search = add("bs-search", help="search for a functional equation")
    search.add_argument("--ring", required=True,
                        help="space-separated variables")
    search.add_argument("--f", action="append", required=True)
    search.add_argument("--g")
    search.add_argument("--kind",
                        choices=["principal", "relative", "bmsMulti"])
    search.add_argument("--c", action="append", default=[],
                        help="c-vector like 1,0 (repeatable)")
    search.add_argument("--max-order", type=int, required=True)
    search.add_argument("--max-coeff-degree", type=int, required=True)
    search.add_argument("--max-s-degree", type=int, required=True)
    search.add_argument("--max-b-degree", type=int, required=True)
    search.add_argument("--semigroup", help="semigroup file")

    ti = add("test-ideal", help="positive-characteristic route")
    ti.add_argument("--prime", type=int, required=True)
    ti.add_argument("--lambda", dest="lam", required=True)
    ti.add_argument("--e-max", type=int, default=4)
    ti.add_argument("--ideal", required=True,
                    help="generators like 2,0;0,2")
    ti.add_argument("--semigroup")

    for name, needs_lambda in (("multiplier", True), ("lct", False)):
        p = add(name)
        p.add_argument("--ideal", required=True)
        if needs_lambda:
            p.add_argument("--lambda", dest="lam", required=True)

    jn = add("jumping-numbers")
    jn.add_argument("--ideal", required=True)
    jn.add_argument("--up-to", required=True)

    vf = add("vfil")
    vf.add_argument("--ideal", required=True)
    vf.add_argument("--alpha", required=True)
    vf.add_argument("--semigroup")
    vf.add_argument("--check-axioms-window",
                    help="step size for an axiom check window")

    h0 = add("hodge0")
    h0.add_argument("--ring", required=True)
    h0.add_argument("--f", required=True)
    h0.add_argument("--lambda", dest="lam", required=True)

    cs = add("compare-summand")
    cs.add_argument("--ideal", required=True)
    cs.add_argument("--lambda", dest="lam", required=True)
    cs.add_argument("--semigroup", required=True)

    ro = add("restrict-op")
    ro.add_argument("--ring", required=True)
    ro.add_argument("--semigroup", required=True)
    ro.add_argument("--op", required=True)
    ro.add_argument("--arg", action="append", required=True)

    ce = add("check-extensible")
    ce.add_argument("--ring", required=True)
    ce.add_argument("--semigroup", required=True)
    ce.add_argument("--op", required=True)
    ce.add_argument("--degree-bound", type=int, required=True)

    mc = add("mustata-check")
    mc.add_argument("--ring", required=True)
    mc.add_argument("--f", action="append", required=True)
    mc.add_argument("--c", action="append", required=True)
    mc.add_argument("--tuple-max-order", type=int, required=True)
    mc.add_argument("--lift-max-order", type=int, required=True)
    mc.add_argument("--max-coeff-degree", type=int, default=2)
    mc.add_argument("--max-s-degree", type=int, default=2)
    mc.add_argument("--max-b-degree", type=int, default=4)
    return parser


def _parse_gens(text: str) -> list[list[int]]:
    return [[int(x) for x in part.split(",")] for part in text.split(";")]


def _job_from_args(args) -> dict | None:
    cmd = args.command
    if cmd == "verify-feq":
        return {"version": "1", "task": "verify-feq",
                "payload": {"feq_file": args.feq, "mode": args.mode}}
    if cmd == "bs-search":
        payload = {
            "ring": args.ring.split(),
            "f": args.f,
            "bounds": {"max_order": args.max_order,
                       "max_coeff_degree": args.max_coeff_degree,
                       "max_s_degree": args.max_s_degree,
                       "max_b_degree": args.max_b_degree},
        }
        if args.g:
            payload["g"] = args.g
        if args.kind:
            payload["kind"] = args.kind
        if args.c:
            payload["c_vectors"] = [[int(x) for x in c.split(",")]
                                    for c in args.c]
        if args.semigroup:
            payload["semigroup_file"] = args.semigroup
        return {"version": "1", "task": "bs-search", "payload": payload}
    if cmd == "test-ideal":
        payload = {"prime": args.prime, "lambda": args.lam,
                   "e_max": args.e_max, "ideal": _parse_gens(args.ideal)}
        if args.semigroup:
            payload["semigroup_file"] = args.semigroup
        return {"version": "1", "task": "test-ideal", "payload": payload}
    if cmd == "multiplier":
        return {"version": "1", "task": "multiplier",
                "payload": {"ideal": _parse_gens(args.ideal),
                            "lambda": args.lam}}
    if cmd == "lct":
        return {"version": "1", "task": "lct",
                "payload": {"ideal": _parse_gens(args.ideal)}}
    if cmd == "jumping-numbers":
        return {"version": "1", "task": "jumping-numbers",
                "payload": {"ideal": _parse_gens(args.ideal),
                            "up_to": args.up_to}}
    if cmd == "vfil":
        payload = {"ideal": _parse_gens(args.ideal), "alpha": args.alpha}
        if args.semigroup:
            payload["semigroup_file"] = args.semigroup
        if args.check_axioms_window:
            payload["check_axioms_window"] = args.check_axioms_window
        return {"version": "1", "task": "vfil", "payload": payload}
    if cmd == "hodge0":
        return {"version": "1", "task": "hodge0",
                "payload": {"ring": args.ring.split(), "f": args.f,
                            "lambda": args.lam}}
    if cmd == "compare-summand":
        return {"version": "1", "task": "compare-summand",
                "payload": {"ideal": _parse_gens(args.ideal),
                            "lambda": args.lam,
                            "semigroup_file": args.semigroup}}
    if cmd == "restrict-op":
        return {"version": "1", "task": "restrict-op",
                "payload": {"ring": args.ring.split(),
                            "semigroup_file": args.semigroup,
                            "operator": args.op,
                            "arguments": args.arg}}
    if cmd == "check-extensible":
        return {"version": "1", "task": "check-extensible",
                "payload": {"ring": args.ring.split(),
                            "semigroup_file": args.semigroup,
                            "operator": args.op,
                            "degree_bound": args.degree_bound}}
    if cmd == "mustata-check":
        bounds = {"max_coeff_degree": args.max_coeff_degree,
                  "max_s_degree": args.max_s_degree,
                  "max_b_degree": args.max_b_degree}
        return {"version": "1", "task": "mustata-check",
                "payload": {
                    "ring": args.ring.split(),
                    "f": args.f,
                    "c_vectors": [[int(x) for x in c.split(",")]
                                  for c in args.c],
                    "tuple_bounds": dict(bounds,
                                         max_order=args.tuple_max_order),
                    "lift_bounds": dict(bounds,
                                        max_order=args.lift_max_order),
                }}
    return None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        if args.command == "list-fixtures":
            catalog = list_fixtures()
            report = {"task": "list-fixtures",
                      "result": {"fixtures": catalog},
                      "certificate": _certificate({"fixtures": catalog}),
                      "exit_code": EXIT_OK, "timing_seconds": 0.0}
            _print_report(report, args.format)
            return EXIT_OK
        if args.command == "run" or (args.command is None and args.job):
            path = args.job_path if args.command == "run" else args.job
            report, code = run_job(path, max_unknowns=args.max_unknowns)
            _print_report(report, args.format)
            return code
        job = _job_from_args(args)
        if job is None:
            parser.print_help()
            return EXIT_INPUT
        report, code = run_job_dict(job, max_unknowns=args.max_unknowns)
        _print_report(report, args.format)
        return code
    except (JobError, PolyParseError, AnsatzCapError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
