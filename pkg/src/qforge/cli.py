"""Command-line front end.

qforge <command> --lattice <file|catalog:NAME> --n-bound <int>
       [--target-signature r,s] [--height-bound B] [--budget B]
       [--seed S] [--verify] [--out report.json]

Reports are JSON with every numeric claim accompanied by a re-runnable
verification command; identical inputs and flags yield byte-identical
reports apart from the timings block. Exit codes: 0 success,
2 precondition, 3 search exhausted, 4 internal inconsistency.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
import time

from . import __version__, catalog, forge, glue, isom, jsonio
from .errors import QforgeError
from .jsonio import (
    dump_json,
    encode_fraction_matrix,
    encode_int,
    encode_matrix,
    encode_place,
    encode_vector,
    lattice_to_obj,
    load_lattice_file,
)
from .lattice import (
    QuadLattice,
    all_values_divisible_by,
    enumerate_values,
    min_nonzero_abs,
    saturate,
    saturation_index,
    signature,
    span,
)
from .limits import DEFAULT_LIMITS, SearchLimits
from .padic import invariant_triple, rationally_equivalent
from .forge import SmallnessCertificate, verify_certificate


def _load_lattice(spec: str) -> QuadLattice:
    if spec.startswith("catalog:"):
        return catalog.resolve(spec[len("catalog:"):])
    return load_lattice_file(spec)


def _lattice_hash(latt: QuadLattice) -> str:
    blob = json.dumps(encode_matrix(latt.gram), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _limits_from_args(args) -> SearchLimits:
    kw = {}
    if getattr(args, "height_bound", None):
        kw["enum_height"] = args.height_bound
        kw["enum_height_highrank"] = args.height_bound
    if getattr(args, "budget", None):
        kw["enum_budget"] = args.budget
        kw["vector_budget"] = min(args.budget, DEFAULT_LIMITS.vector_budget * 10)
    return dataclasses.replace(DEFAULT_LIMITS, **kw)


def _triple_obj(t) -> dict:
    return {
        "signature": list(t.signature),
        "disc_squarefree": encode_int(t.disc),
        "minus_places": [encode_place(p) for p in t.minus_places],
    }


def _certificate_obj(cert: SmallnessCertificate) -> dict:
    return {
        "p": cert.p,
        "alpha": [encode_int(cert.alpha1), encode_int(cert.alpha2)],
        "beta": [encode_int(cert.beta1), encode_int(cert.beta2)],
        "n": [cert.n1, cert.n2],
    }


def _certificate_from_obj(obj) -> SmallnessCertificate:
    return SmallnessCertificate(
        p=jsonio.decode_int(obj["p"]),
        alpha1=jsonio.decode_int(obj["alpha"][0]),
        alpha2=jsonio.decode_int(obj["alpha"][1]),
        beta1=jsonio.decode_int(obj["beta"][0]),
        beta2=jsonio.decode_int(obj["beta"][1]),
        n1=jsonio.decode_int(obj["n"][0]),
        n2=jsonio.decode_int(obj["n"][1]),
    )


def _classification_obj(cls) -> dict:
    out = {"tag": cls.tag.value}
    if cls.order is not None:
        out["order"] = cls.order
    if cls.quasi_unipotent_order is not None:
        out["quasi_unipotent_order"] = cls.quasi_unipotent_order
    if cls.fixed_isotropic is not None:
        out["fixed_isotropic"] = encode_vector(cls.fixed_isotropic)
    if cls.dominant_factor is not None:
        out["dominant_factor_ascending"] = [encode_int(c) for c in cls.dominant_factor]
    if cls.dominant_interval is not None:
        out["dominant_root_between"] = [
            jsonio.encode_fraction(cls.dominant_interval[0]),
            jsonio.encode_fraction(cls.dominant_interval[1]),
        ]
    if cls.cyclotomic_orders:
        out["cyclotomic_factors"] = [list(t) for t in cls.cyclotomic_orders]
    if cls.preserves_positive_cone is not None:
        out["preserves_positive_cone"] = cls.preserves_positive_cone
    return out


# ---------------------------------------------------------------------------
# Report-producing commands


def cmd_hyperbolic(args) -> dict:
    latt = _load_lattice(args.lattice)
    limits = _limits_from_args(args)
    t0 = time.monotonic()
    result = forge.find_rank2_avoiding(latt, args.n_bound, limits)
    sub_latt = result.lattice.as_lattice(label="constructed rank-2")
    iso = isom.find_hyperbolic(sub_latt)
    cls = isom.classify(iso)
    height = limits.enum_height
    smallest, witness = min_nonzero_abs(sub_latt, height, budget=limits.enum_budget)
    divisible, _ = all_values_divisible_by(
        sub_latt, result.certificate.p, height, budget=limits.enum_budget
    )
    elapsed = time.monotonic() - t0
    report = {
        "tool": {"name": "qforge", "version": __version__},
        "mode": "hyperbolic",
        "input": {
            "lattice": args.lattice,
            "label": latt.label,
            "hash": _lattice_hash(latt),
            "rank": latt.rank,
            "n_bound": args.n_bound,
            "seed": args.seed,
        },
        "sublattice": {
            "basis": [encode_vector(v) for v in result.lattice.basis],
            "gram": encode_matrix(result.lattice.gram()),
            "v1": encode_vector(result.v1),
            "w": encode_vector(result.w),
            "certificate": _certificate_obj(result.certificate),
            "certificate_valid": verify_certificate(result.certificate, args.n_bound),
            "saturation_index_of_span": 1,
        },
        "isometry": {
            "matrix": encode_matrix(iso.matrix),
            "classification": _classification_obj(cls),
        },
        "oracle": {
            "height": height,
            "min_nonzero_abs": encode_int(smallest) if smallest is not None else None,
            "min_witness": encode_vector(witness) if witness else None,
            "all_values_divisible_by_p": divisible,
        },
        "checks": [
            f"qforge certify --certificate <sublattice.certificate> --n-bound {args.n_bound}",
            "qforge classify --lattice <sublattice.gram> --matrix <isometry.matrix>",
            f"qforge enumerate --lattice <sublattice.gram> --height-bound {height}",
        ],
    }
    report["timings"] = {"seconds": round(elapsed, 3)}
    return report


def cmd_parabolic(args) -> dict:
    latt = _load_lattice(args.lattice)
    limits = _limits_from_args(args)
    t0 = time.monotonic()
    rep = glue.embed_pipeline(latt, args.n_bound, limits)
    out: dict = {
        "tool": {"name": "qforge", "version": __version__},
        "mode": "parabolic",
        "input": {
            "lattice": args.lattice,
            "label": latt.label,
            "hash": _lattice_hash(latt),
            "rank": latt.rank,
            "n_bound": args.n_bound,
            "seed": args.seed,
        },
        "extension": {
            "b": [encode_int(rep.extension.b0), encode_int(rep.extension.b1),
                  encode_int(rep.extension.b2)],
            "target_signature": list(rep.extension.target_signature),
            "augmented_triple": _triple_obj(rep.extension.augmented_triple),
            "standard_triple": _triple_obj(rep.extension.standard_triple),
            "triples_equal": rep.extension.augmented_triple
            == rep.extension.standard_triple,
        },
        "certificate_level": rep.certificate_level,
    }
    if rep.certificate_level:
        out["note"] = (
            "explicit embedding witness exceeded the search budget; "
            "invariant-level certificates only"
        )
    else:
        glue_data = rep.glue
        out["embedding"] = {
            "matrix": encode_fraction_matrix(rep.embedding),
            "index_d": encode_int(rep.index_d),
            "d_squared_n": encode_int(rep.index_d**2 * args.n_bound),
            "prime": rep.prime,
        }
        out["glue"] = {
            "lambda_gram": encode_matrix(glue_data.lam.gram),
            "lambda_prime_gram": encode_matrix(glue_data.lam_prime.gram),
            "overlattice_gram": encode_matrix(glue_data.overlattice.gram),
            "overlattice_det": encode_int(glue_data.overlattice.det()),
            "anti_isometry": [list(t) for t in glue_data.anti_isometry],
        }
        out["sublattice"] = {
            "basis": [encode_vector(v) for v in rep.lambda_in_source.basis],
            "gram": encode_matrix(rep.lambda_in_source.gram()),
            "signature": list(signature(rep.lambda_in_source.as_lattice())),
            "saturation_index_of_intersection": encode_int(rep.sat_index),
        }
        out["oracle"] = {
            k: (encode_vector(v) if k == "min_witness" and v else v)
            for k, v in rep.oracle.items()
        }
        final = rep.lambda_in_source.as_lattice(label="constructed sublattice")
        iso = isom.find_parabolic(final, limits)
        cls = isom.classify(iso)
        out["isometry"] = {
            "matrix": encode_matrix(iso.matrix),
            "classification": _classification_obj(cls),
        }
    out["checks"] = [
        "qforge equiv --lattice <augmented diag> --other <standard diag>",
        "qforge classify --lattice <sublattice.gram> --matrix <isometry.matrix>",
    ]
    out["timings"] = {"seconds": round(time.monotonic() - t0, 3)}
    return out


# ---------------------------------------------------------------------------
# Thin wrappers


def cmd_invariants(args) -> dict:
    latt = _load_lattice(args.lattice)
    return {"lattice": lattice_to_obj(latt), "triple": _triple_obj(invariant_triple(latt))}


def cmd_equiv(args) -> dict:
    a = _load_lattice(args.lattice)
    b = _load_lattice(args.other)
    return {
        "equivalent": rationally_equivalent(a, b),
        "first": _triple_obj(invariant_triple(a)),
        "second": _triple_obj(invariant_triple(b)),
    }


def cmd_classify(args) -> dict:
    latt = _load_lattice(args.lattice)
    with open(args.matrix) as fh:
        matrix = tuple(tuple(jsonio.decode_int(x) for x in row) for row in json.load(fh))
    iso = isom.Isometry(latt, matrix)
    return {"classification": _classification_obj(isom.classify(iso))}


def cmd_saturate(args) -> dict:
    latt = _load_lattice(args.lattice)
    with open(args.basis) as fh:
        rows = [tuple(jsonio.decode_int(x) for x in row) for row in json.load(fh)]
    sub = span(latt, rows)
    sat = saturate(sub)
    return {
        "basis": [encode_vector(v) for v in sat.basis],
        "gram": encode_matrix(sat.gram()),
        "index": encode_int(saturation_index(sub)),
    }


def cmd_extend(args) -> dict:
    latt = _load_lattice(args.lattice)
    target = _parse_signature(args.target_signature)
    ext = glue.extend_to_standard(latt, target)
    return {
        "b": [encode_int(ext.b0), encode_int(ext.b1), encode_int(ext.b2)],
        "target_signature": list(target),
        "augmented_triple": _triple_obj(ext.augmented_triple),
        "standard_triple": _triple_obj(ext.standard_triple),
        "triples_equal": ext.augmented_triple == ext.standard_triple,
    }


def cmd_glue(args) -> dict:
    latt = _load_lattice(args.lattice)
    target = _parse_signature(args.target_signature)
    gd = glue.nikulin_glue(latt, target)
    return {
        "lambda_prime_gram": encode_matrix(gd.lam_prime.gram),
        "overlattice_gram": encode_matrix(gd.overlattice.gram),
        "overlattice_det": encode_int(gd.overlattice.det()),
        "anti_isometry": [list(t) for t in gd.anti_isometry],
        "lambda_embedding": encode_matrix(gd.lam_embedding),
    }


def cmd_isotropic(args) -> dict:
    latt = _load_lattice(args.lattice)
    vec = forge.find_isotropic(latt, _limits_from_args(args))
    return {"vector": encode_vector(vec)}


def cmd_certify(args) -> dict:
    with open(args.certificate) as fh:
        cert = _certificate_from_obj(json.load(fh))
    ok, reason = forge.check_certificate(cert, args.n_bound)
    return {"valid": ok, "reason": reason}


def cmd_enumerate(args) -> dict:
    latt = _load_lattice(args.lattice)
    limits = _limits_from_args(args)
    height = args.height_bound or 10
    values = enumerate_values(latt, height, budget=limits.enum_budget)
    return {
        "height": height,
        "values": {
            str(v): encode_vector(w) for v, w in sorted(values.items())
        },
    }


def _parse_signature(text: str) -> tuple[int, int]:
    r, _, s = text.partition(",")
    return int(r), int(s)


# ---------------------------------------------------------------------------
# Report verification (--verify re-checks claims from report content alone)


def verify_report(report: dict) -> list[str]:
    """Re-check matrix congruences, certificates and oracle claims recorded
    in a report; returns a list of failures (empty = verified)."""
    failures: list[str] = []
    sub = report.get("sublattice")
    if sub and "gram" in sub:
        gram = tuple(tuple(jsonio.decode_int(x) for x in row) for row in sub["gram"])
        latt = QuadLattice(gram)
        if "certificate" in sub:
            cert = _certificate_from_obj(sub["certificate"])
            n_bound = report["input"]["n_bound"]
            if not verify_certificate(cert, n_bound):
                failures.append("certificate does not verify")
            ok, _ = all_values_divisible_by(latt, cert.p, 60)
            if not ok:
                failures.append("values not all divisible by p")
        iso_obj = report.get("isometry")
        if iso_obj:
            matrix = tuple(
                tuple(jsonio.decode_int(x) for x in row) for row in iso_obj["matrix"]
            )
            try:
                iso = isom.Isometry(latt, matrix)
            except QforgeError:
                failures.append("isometry congruence fails")
            else:
                tag = isom.classify(iso).tag.value
                if tag != iso_obj["classification"]["tag"]:
                    failures.append("classification tag mismatch")
        oracle = report.get("oracle")
        if oracle and oracle.get("min_nonzero_abs") is not None:
            height = min(oracle.get("height", oracle.get("enumerated_height", 10)), 60)
            smallest, _ = min_nonzero_abs(latt, height)
            claimed = jsonio.decode_int(oracle["min_nonzero_abs"])
            if smallest is not None and smallest < claimed:
                failures.append("oracle minimum overstated")
    ext = report.get("extension")
    if ext and not ext.get("triples_equal", True):
        failures.append("extension triples differ")
    return failures


# ---------------------------------------------------------------------------


_COMMANDS = {
    "hyperbolic": cmd_hyperbolic,
    "parabolic": cmd_parabolic,
    "invariants": cmd_invariants,
    "equiv": cmd_equiv,
    "classify": cmd_classify,
    "saturate": cmd_saturate,
    "extend": cmd_extend,
    "glue": cmd_glue,
    "isotropic": cmd_isotropic,
    "certify": cmd_certify,
    "enumerate": cmd_enumerate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qforge",
        description="exact constructions on integer quadratic lattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--lattice", help="lattice file or catalog:NAME")
        p.add_argument("--other", help="second lattice (equiv)")
        p.add_argument("--matrix", help="JSON integer matrix file (classify)")
        p.add_argument("--basis", help="JSON list of vectors (saturate)")
        p.add_argument("--certificate", help="JSON certificate file (certify)")
        p.add_argument("--n-bound", type=int, default=1)
        p.add_argument("--target-signature", help="r,s")
        p.add_argument("--height-bound", type=int)
        p.add_argument("--budget", type=int)
        p.add_argument("--seed", type=int, default=0,
                       help="recorded in reports; all searches are deterministic")
        p.add_argument("--verify", action="store_true")
        p.add_argument("--out", help="write the JSON report here")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = _COMMANDS[args.command](args)
        if args.verify:
            failures = verify_report(report)
            report["verified"] = not failures
            if failures:
                report["verification_failures"] = failures
        text = dump_json(report, args.out)
        print(text)
        if args.verify and report.get("verified") is False:
            return 4
        return 0
    except QforgeError as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(dump_json(error))
        return exc.exit_code
    except FileNotFoundError as exc:
        print(dump_json({"error": {"type": "FileNotFound", "message": str(exc)}}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
