"""Machine-readable certificates for every CLI operation.

A certificate records the operation, a digest of its inputs (computed from
their canonical text renderings, so it is stable across runs and platforms),
the verdict, structured evidence, and any tables.  Rendering uses canonical
JSON: sorted keys, fixed separators.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .cohomology import BettiTable
from .ellipticity import FinitenessCertificate
from .model import Violation


@dataclass
class CertificateDocument:
    op: str
    inputs: dict
    inputs_digest: str
    verdict: str
    evidence: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "op": self.op,
            "inputs": self.inputs,
            "inputs_digest": self.inputs_digest,
            "verdict": self.verdict,
            "evidence": self.evidence,
            "tables": self.tables,
        }


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest_inputs(*parts: str) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode("utf-8"))
        h.update(b"\x00")
    return "sha256:" + h.hexdigest()


def render(cert: CertificateDocument) -> str:
    return canonical_json(cert.to_dict())


def finiteness_evidence(cert: FinitenessCertificate) -> dict:
    return {
        "verdict": cert.verdict,
        "formal_dimension_bound": cert.formal_dimension,
        "pure_ideal": [str(g) for g in cert.ideal],
        "window": list(cert.window) if cert.window is not None else None,
        "untouched_generator": cert.untouched,
        "cutoff": cert.cutoff,
    }


def violation_evidence(v: Violation) -> dict:
    return {
        "generator": v.generator,
        "kind": v.kind,
        "message": v.message,
        "residue": str(v.residue) if v.residue is not None else None,
    }


def betti_rows(table: BettiTable) -> list[list[int]]:
    return [[k, d] for k, d in table.entries]


def summarize(cert: CertificateDocument) -> str:
    lines = [f"{cert.op}: {cert.verdict}"]
    for key in sorted(cert.inputs):
        lines.append(f"  {key}: {cert.inputs[key]}")
    for key in sorted(cert.evidence):
        value = cert.evidence[key]
        if isinstance(value, dict):
            inner = ", ".join(f"{k}={v}" for k, v in sorted(value.items()) if v is not None)
            lines.append(f"  {key}: {inner}")
        elif value is not None:
            lines.append(f"  {key}: {value}")
    if "betti" in cert.tables:
        pairs = " ".join(f"{k}:{d}" for k, d in cert.tables["betti"] if d)
        total = sum(d for _, d in cert.tables["betti"])
        lines.append(f"  betti: {pairs} (total {total})")
    return "\n".join(lines)
