"""Scaling benchmark: setup/prove/verify time and artifact sizes per payload count."""

from __future__ import annotations

import csv
import hashlib
import io
import platform
import random
import statistics
import time
from dataclasses import astuple, dataclass, fields

from . import circuit, snark
from .encoding import ATTRIBUTE_BITS
from .issuer import IssuerKeypair, issue_credential, new_schema
from .prover import Statement, create_context
from .verifier import verify_context

CSV_COLUMNS = ("payloads", "setup_ms", "prove_ms", "verify_ms", "pk_bytes", "vk_bytes", "proof_bytes", "reps")
VERIFY_CALLS = 9


@dataclass(frozen=True)
class BenchRecord:
    payload_count: int
    setup_ms: float
    prove_ms: float
    verify_ms: float
    pk_bytes: int
    vk_bytes: int
    proof_bytes: int
    repetitions: int
    host: str = ""

    def row(self) -> tuple:
        return astuple(self)[:8]


def host_fingerprint() -> str:
    desc = "|".join([platform.node(), platform.machine(), platform.processor(), platform.python_version()])
    return platform.machine() + "-" + hashlib.sha256(desc.encode()).hexdigest()[:12]


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


def _one_run(m: int, keypair: IssuerKeypair, rng: random.Random, measure_sizes: bool):
    schema = new_schema(keypair.issuer_id, [f"a{i}" for i in range(5 * m - 1)], payload_count=m, schema_id=f"bench-{m}")
    descriptor = circuit.build_constraint_system(m, schema.hash_algorithm_id)

    t0 = time.perf_counter()
    pk, vk = snark.setup(descriptor)
    setup_ms = _ms(t0)

    cred = issue_credential(keypair, schema, {f"a{i}": rng.getrandbits(ATTRIBUTE_BITS) for i in range(5 * m - 1)})
    # the first attribute is compared against itself, the rest stay "any"
    statement = Statement.from_clauses(m, {0: ("<=", cred.attributes[0])})
    t0 = time.perf_counter()
    context = create_context(pk, cred, statement)
    prove_ms = _ms(t0)

    verify_times = []
    for _ in range(VERIFY_CALLS):
        t0 = time.perf_counter()
        report = verify_context(vk, keypair.public_key, context, statement)
        verify_times.append(_ms(t0))
        if not report.overall:
            raise RuntimeError(f"benchmark proof failed to verify: {report.failure_detail}")

    sizes = None
    if measure_sizes:
        sizes = (
            len(snark.proving_key_to_bytes(pk)),
            len(snark.verification_key_to_bytes(vk)),
            len(context.proof.to_bytes()),
        )
    return setup_ms, prove_ms, statistics.median(verify_times), sizes, len(context.proof.to_bytes())


def run_scaling(payload_counts, repetitions: int = 3, *, warmup: bool = True, seed: int | None = None, log=None) -> list[BenchRecord]:
    """Median timings over ``repetitions`` runs per payload count.

    One warm-up run per count is discarded, then the counts are measured in
    interleaved rounds rather than one block per count.
    """
    if repetitions < 3:
        raise ValueError("need at least 3 repetitions")
    counts = list(dict.fromkeys(payload_counts))
    if not counts or any(m < 1 or m > circuit.system.MAX_PAYLOADS for m in counts):
        raise ValueError(f"payload counts must lie in [1, {circuit.system.MAX_PAYLOADS}]")
    rng = random.Random(seed)
    keypair = IssuerKeypair.generate()
    host = host_fingerprint()
    if warmup:
        for m in counts:
            _one_run(m, keypair, rng, measure_sizes=False)
    # round-robin over the counts so that slow spells on the host hit every count alike
    samples = {m: [] for m in counts}
    for i in range(repetitions):
        for m in counts:
            samples[m].append(_one_run(m, keypair, rng, measure_sizes=(i == 0)))
    records = []
    for m in counts:
        runs = samples[m]
        pk_bytes, vk_bytes, proof_bytes = runs[0][3]
        if any(r[4] != proof_bytes for r in runs):
            raise RuntimeError("proof size varied between repetitions")
        rec = BenchRecord(
            m,
            round(statistics.median(r[0] for r in runs), 3),
            round(statistics.median(r[1] for r in runs), 3),
            round(statistics.median(r[2] for r in runs), 3),
            pk_bytes,
            vk_bytes,
            proof_bytes,
            repetitions,
            host,
        )
        if log:
            log(rec)
        records.append(rec)
    return records


def increments(records, field: str) -> list[float]:
    recs = sorted(records, key=lambda r: r.payload_count)
    out = []
    for a, b in zip(recs, recs[1:]):
        out.append((getattr(b, field) - getattr(a, field)) / (b.payload_count - a.payload_count))
    return out


def linearity(records, field: str) -> dict:
    """Per-payload increments of ``field`` and their largest relative deviation from the mean."""
    inc = increments(records, field)
    if not inc:
        return {"field": field, "increments": [], "mean": None, "spread": None}
    mean = statistics.fmean(inc)
    spread = max(abs(i - mean) for i in inc) / abs(mean) if mean else float("inf")
    return {"field": field, "increments": inc, "mean": mean, "spread": spread}


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow(rec.row())
    for name in ("setup_ms", "prove_ms", "pk_bytes"):
        lin = linearity(records, name)
        if lin["mean"] is None:
            continue
        inc = " ".join(f"{x:.1f}" for x in lin["increments"])
        buf.write(f"# linearity {name}: increments [{inc}] mean {lin['mean']:.1f} spread {lin['spread']:.3f}\n")
    if records:
        buf.write(f"# host {records[0].host}\n")
    return buf.getvalue()


def from_csv(text: str) -> list[BenchRecord]:
    lines = text.splitlines()
    rows = [line for line in lines if line and not line.startswith("#")]
    host = next((line[len("# host "):] for line in lines if line.startswith("# host ")), "")
    reader = csv.reader(rows)
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    types = [f.type for f in fields(BenchRecord)][:8]
    out = []
    for row in reader:
        vals = [float(v) if t in ("float", float) else int(v) for v, t in zip(row, types)]
        out.append(BenchRecord(*vals, host=host))
    return out


def parse_counts(text: str) -> list[int]:
    """``"1..4"`` or ``"1,2,3"``."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x.strip()]
