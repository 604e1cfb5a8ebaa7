"""JSON formats for every artifact, exact and deterministic.

Rationals are {num, den} integer pairs and rates carry their symbolic log
form; nothing is ever converted through floating point.  Every document
has a versioned "schema" field.  Dumping is canonical (sorted keys, fixed
indentation), so identical artifacts serialize to identical bytes.

Query positions are 0-based here and throughout the package.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .algebra import Field, VecSpace
from .codes import Alphabet, Code, Rate, Word
from .concat import CompatibilityWitness, Encoder, WitnessEntry
from .constructions import FunctionFamily
from .errors import SchemaError
from .pipeline import REPORT_SCHEMA, PipelineReport
from .separability import CheckCertificate, SeparabilityCertificate
from .testers import Check, SoundnessReport, Tester, accept_from_tuples, tuples_from_accept

SCHEMAS = {
    "code": "ltc-forge/code-v1",
    "tester": "ltc-forge/tester-v1",
    "family": "ltc-forge/family-v1",
    "encoder": "ltc-forge/encoder-v1",
    "witness": "ltc-forge/witness-v1",
    "certificate": "ltc-forge/certificate-v1",
    "soundness": "ltc-forge/soundness-v1",
    "report": REPORT_SCHEMA,
    "verify": "ltc-forge/verify-v1",
}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _expect(doc: dict, kind: str) -> None:
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMAS[kind]:
        raise SchemaError(f"expected schema {SCHEMAS[kind]}, got {doc.get('schema')!r}")


def frac_to_json(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator}


def frac_from_json(d: Any) -> Fraction:
    if not isinstance(d, dict) or set(d) != {"num", "den"}:
        raise SchemaError(f"not a rational: {d!r}")
    return Fraction(d["num"], d["den"])


def alphabet_to_json(a: Alphabet) -> dict:
    if a.is_vector:
        return {"kind": "vector", "p": a.space.field.p, "dim": a.space.dim}
    return {"kind": "plain", "size": a.size}


def alphabet_from_json(d: Any) -> Alphabet:
    if not isinstance(d, dict) or "kind" not in d:
        raise SchemaError(f"not an alphabet: {d!r}")
    if d["kind"] == "plain":
        return Alphabet.plain(d["size"])
    if d["kind"] == "vector":
        return Alphabet.vector(VecSpace(Field(d["p"]), d["dim"]))
    raise SchemaError(f"unknown alphabet kind {d['kind']!r}")


def code_to_json(c: Code) -> dict:
    doc = {
        "schema": SCHEMAS["code"],
        "alphabet": alphabet_to_json(c.alphabet),
        "n": c.n,
        "codewords": [list(w) for w in c.codewords],
    }
    if c.generator is not None:
        doc["linear"] = {"gen": [list(r) for r in c.generator]}
    return doc


def code_from_json(doc: Any) -> Code:
    _expect(doc, "code")
    gen = None
    if "linear" in doc:
        gen = tuple(tuple(r) for r in doc["linear"]["gen"])
    return Code(
        alphabet_from_json(doc["alphabet"]),
        doc["n"],
        tuple(tuple(w) for w in doc["codewords"]),
        gen,
    )


def word_to_json(w: Word) -> dict:
    return {"alphabet": alphabet_to_json(w.alphabet), "letters": list(w.letters)}


def word_from_json(d: Any) -> Word:
    return Word(alphabet_from_json(d["alphabet"]), tuple(d["letters"]))


def tester_to_json(t: Tester) -> dict:
    size = t.alphabet.size
    return {
        "schema": SCHEMAS["tester"],
        "alphabet": alphabet_to_json(t.alphabet),
        "n": t.n,
        "q": t.q,
        "checks": [
            {
                "queries": list(ch.queries),
                "accept": [list(u) for u in tuples_from_accept(ch.accept, size, ch.arity)],
                "weight": frac_to_json(ch.weight),
            }
            for ch in t.checks
        ],
    }


def tester_from_json(doc: Any) -> Tester:
    _expect(doc, "tester")
    alphabet = alphabet_from_json(doc["alphabet"])
    checks = tuple(
        Check(
            tuple(c["queries"]),
            accept_from_tuples([tuple(u) for u in c["accept"]], alphabet.size),
            frac_from_json(c["weight"]),
        )
        for c in doc["checks"]
    )
    return Tester(alphabet, doc["n"], doc["q"], checks)


def family_to_json(f: FunctionFamily) -> dict:
    return {
        "schema": SCHEMAS["family"],
        "domain_size": f.domain_size,
        "target": alphabet_to_json(f.target),
        "tables": [list(t) for t in f.tables],
    }


def family_from_json(doc: Any) -> FunctionFamily:
    _expect(doc, "family")
    return FunctionFamily(
        doc["domain_size"],
        alphabet_from_json(doc["target"]),
        tuple(tuple(t) for t in doc["tables"]),
    )


def encoder_to_json(e: Encoder) -> dict:
    doc = family_to_json(e.family)
    doc["schema"] = SCHEMAS["encoder"]
    doc["injective"] = True
    return doc


def encoder_from_json(doc: Any) -> Encoder:
    _expect(doc, "encoder")
    inner = dict(doc)
    inner["schema"] = SCHEMAS["family"]
    inner.pop("injective", None)
    return Encoder(family_from_json(inner))


def witness_to_json(w: CompatibilityWitness, target_size: int) -> dict:
    return {
        "schema": SCHEMAS["witness"],
        "target_size": target_size,
        "checks": [
            {
                "b": list(e.positions),
                "accept": [
                    list(u)
                    for u in tuples_from_accept(e.accept, target_size, len(e.positions))
                ],
            }
            for e in w.entries
        ],
    }


def witness_from_json(doc: Any) -> CompatibilityWitness:
    _expect(doc, "witness")
    size = doc["target_size"]
    return CompatibilityWitness(
        tuple(
            WitnessEntry(
                tuple(e["b"]),
                accept_from_tuples([tuple(u) for u in e["accept"]], size),
            )
            for e in doc["checks"]
        )
    )


def certificate_to_json(c: SeparabilityCertificate) -> dict:
    return {
        "schema": SCHEMAS["certificate"],
        "delta_size": c.delta_size,
        "linear": c.linear,
        "checks": [
            {
                "partitions": [[list(cls) for cls in coord] for coord in chk.partitions],
                "maps": [list(m) for m in chk.coord_maps],
                "accept": [
                    list(u)
                    for u in tuples_from_accept(
                        chk.accept, c.delta_size, len(chk.coord_maps)
                    )
                ],
                "subspaces": None
                if chk.subspaces is None
                else [[list(v) for v in basis] for basis in chk.subspaces],
            }
            for chk in c.checks
        ],
    }


def certificate_from_json(doc: Any) -> SeparabilityCertificate:
    _expect(doc, "certificate")
    checks = []
    for chk in doc["checks"]:
        subspaces = None
        if chk["subspaces"] is not None:
            subspaces = tuple(
                tuple(tuple(v) for v in basis) for basis in chk["subspaces"]
            )
        checks.append(
            CheckCertificate(
                tuple(tuple(tuple(cls) for cls in coord) for coord in chk["partitions"]),
                tuple(tuple(m) for m in chk["maps"]),
                accept_from_tuples([tuple(u) for u in chk["accept"]], doc["delta_size"]),
                subspaces,
            )
        )
    return SeparabilityCertificate(doc["delta_size"], doc["linear"], tuple(checks))


def soundness_to_json(r: SoundnessReport) -> dict:
    return {
        "schema": SCHEMAS["soundness"],
        "mode": r.mode,
        "value": None if r.value is None else frac_to_json(r.value),
        "infinite": r.infinite,
        "witness": None if r.witness is None else word_to_json(r.witness),
        "bound": None if r.bound is None else frac_to_json(r.bound),
        "verdict": r.verdict,
        "trials": r.trials,
        "seed": r.seed,
    }


def soundness_from_json(doc: Any) -> SoundnessReport:
    _expect(doc, "soundness")
    return SoundnessReport(
        doc["mode"],
        None if doc["value"] is None else frac_from_json(doc["value"]),
        doc["infinite"],
        None if doc["witness"] is None else word_from_json(doc["witness"]),
        None if doc["bound"] is None else frac_from_json(doc["bound"]),
        doc["verdict"],
        doc["trials"],
        doc["seed"],
    )


def rate_to_json(r: Rate) -> dict:
    return {
        "scalar": frac_to_json(r.scalar),
        "log_num": r.log_num,
        "log_base": r.log_base,
    }


def rate_from_json(d: Any) -> Rate:
    return Rate(frac_from_json(d["scalar"]), d["log_num"], d["log_base"])


# ---------------------------------------------------------------------------
# Tagged values for heterogeneous report dictionaries
# ---------------------------------------------------------------------------

_WITNESS_SIZE_KEY = "$witness_target_size"


def value_to_json(v: Any) -> Any:
    if isinstance(v, Fraction):
        return {"$frac": frac_to_json(v)}
    if isinstance(v, Rate):
        return {"$rate": rate_to_json(v)}
    if isinstance(v, SoundnessReport):
        return {"$soundness": soundness_to_json(v)}
    if isinstance(v, Code):
        return {"$code": code_to_json(v)}
    if isinstance(v, Tester):
        return {"$tester": tester_to_json(v)}
    if isinstance(v, Encoder):
        return {"$encoder": encoder_to_json(v)}
    if isinstance(v, Word):
        return {"$word": word_to_json(v)}
    if isinstance(v, SeparabilityCertificate):
        return {"$certificate": certificate_to_json(v)}
    if isinstance(v, dict):
        return {k: value_to_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [value_to_json(x) for x in v]
    if v is None or isinstance(v, (bool, int, str)):
        return v
    raise SchemaError(f"value of type {type(v).__name__} has no JSON form")


def value_from_json(v: Any) -> Any:
    if isinstance(v, dict):
        if len(v) == 1:
            key = next(iter(v))
            if key == "$frac":
                return frac_from_json(v[key])
            if key == "$rate":
                return rate_from_json(v[key])
            if key == "$soundness":
                return soundness_from_json(v[key])
            if key == "$code":
                return code_from_json(v[key])
            if key == "$tester":
                return tester_from_json(v[key])
            if key == "$encoder":
                return encoder_from_json(v[key])
            if key == "$word":
                return word_from_json(v[key])
            if key == "$certificate":
                return certificate_from_json(v[key])
        return {k: value_from_json(x) for k, x in v.items()}
    if isinstance(v, list):
        return [value_from_json(x) for x in v]
    return v


def report_to_json(r: PipelineReport) -> dict:
    stages = dict(r.stages)
    witness = stages.pop("witness", None)
    doc = {
        "schema": SCHEMAS["report"],
        "kind": r.kind,
        "params": value_to_json(r.params),
        "promised": value_to_json(r.promised),
        "achieved": value_to_json(r.achieved),
        "stages": value_to_json(stages),
        "verdicts": dict(r.verdicts),
        "overall": r.overall,
    }
    if witness is not None:
        target_size = r.stages["encoder"].target.size
        doc["stages"]["witness"] = witness_to_json(witness, target_size)
    return doc


def report_from_json(doc: Any) -> PipelineReport:
    _expect(doc, "report")
    stages_doc = dict(doc["stages"])
    witness_doc = stages_doc.pop("witness", None)
    stages = value_from_json(stages_doc)
    if witness_doc is not None:
        stages["witness"] = witness_from_json(witness_doc)
    return PipelineReport(
        kind=doc["kind"],
        params=value_from_json(doc["params"]),
        promised=value_from_json(doc["promised"]),
        achieved=value_from_json(doc["achieved"]),
        stages=stages,
        verdicts=dict(doc["verdicts"]),
        overall=doc["overall"],
        version=doc["schema"],
    )


def roundtrip(obj):
    """parse(serialize(x)); used by tests to pin the identity contract."""
    table = [
        (Code, code_to_json, code_from_json),
        (Tester, tester_to_json, tester_from_json),
        (Encoder, encoder_to_json, encoder_from_json),
        (FunctionFamily, family_to_json, family_from_json),
        (SeparabilityCertificate, certificate_to_json, certificate_from_json),
        (SoundnessReport, soundness_to_json, soundness_from_json),
        (PipelineReport, report_to_json, report_from_json),
    ]
    for cls, enc, dec in table:
        if isinstance(obj, cls):
            return dec(json.loads(dumps(enc(obj))))
    raise SchemaError(f"no serializer for {type(obj).__name__}")
