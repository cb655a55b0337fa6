"""``zklaims`` command line: issuer, prover, verifier and directory roles in one binary.

Exit codes: 0 success, 1 operation failed, 2 bad issuer signature,
3 statement mismatch, 4 invalid proof, 5 malformed input, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench, snark
from .directory import Directory, RecordKind
from .errors import FormatError, ParseError, ZklaimsError
from .issuer import (
    CredentialSchema,
    Credential,
    IssuerKeypair,
    bootstrap_issuer,
    issuer_id_for,
    issue_credential,
    new_schema,
    public_key_from_json,
)
from .prover import ZklaimsContext, create_context, disclosure_statement, parse_statement
from .verifier import EXIT_MALFORMED, verify_context

EXIT_FAIL = 1
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class Output:
    """Collects the result of one subcommand and prints it as text or JSON."""

    def __init__(self, fmt: str, command: str):
        self.fmt = fmt
        self.data = {"command": command}

    def set(self, **kw):
        self.data.update(kw)

    def emit(self, ok: bool):
        self.data["ok"] = ok
        if self.fmt == "json":
            print(json.dumps(self.data, sort_keys=True))
            return
        for key, value in self.data.items():
            if key in ("command", "ok"):
                continue
            if isinstance(value, dict):
                value = ", ".join(f"{k}={v}" for k, v in value.items())
            elif isinstance(value, list):
                value = ", ".join(str(v) for v in value)
            print(f"{key}: {value}")


def _need(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p


def _store(args) -> Directory:
    root = os.environ.get("ZKLAIMS_STORE") or args.store
    if not root:
        raise UsageError("no store given (use --store or ZKLAIMS_STORE)")
    return Directory(root)


def _write(path, data: bytes | str) -> str:
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True)
    if isinstance(data, str):
        p.write_text(data)
    else:
        p.write_bytes(data)
    return str(p)


def _labels(values) -> list[str]:
    out = []
    for v in values or []:
        out.extend(x.strip() for x in v.split(",") if x.strip())
    return out


def cmd_keygen(args, out: Output) -> int:
    kp = IssuerKeypair.generate()
    out.set(issuer_id=kp.issuer_id, key=_write(args.out, kp.to_json()))
    if args.pub:
        out.set(public_key=_write(args.pub, kp.public_json()))
    return 0


def cmd_schema_new(args, out: Output) -> int:
    if args.key:
        issuer_id = IssuerKeypair.from_json(_need(args.key).read_text()).issuer_id
    elif args.issuer_pub:
        issuer_id = issuer_id_for(public_key_from_json(_need(args.issuer_pub).read_text()))
    elif args.issuer_id:
        issuer_id = args.issuer_id
    else:
        raise UsageError("schema new needs --key, --issuer-pub or --issuer-id")
    schema = new_schema(issuer_id, _labels(args.labels), args.payloads, args.schema_id)
    out.set(schema_id=schema.schema_id, payloads=schema.payload_count, labels=list(schema.slot_labels),
            schema=_write(args.out, schema.to_json()))
    return 0


def cmd_setup(args, out: Output) -> int:
    schema = CredentialSchema.from_json(_need(args.schema).read_text())
    seed = None
    if args.seed:
        try:
            seed = bytes.fromhex(args.seed)
        except ValueError:
            raise UsageError("--seed must be hex") from None
        if len(seed) != 32:
            raise UsageError("--seed must be 32 bytes (64 hex digits)")
    out_dir = Path(args.out_dir)
    descriptor, pk, vk = bootstrap_issuer(schema, seed)
    paths = {
        "descriptor": _write(args.descriptor or out_dir / "descriptor.zkcs", descriptor.to_bytes()),
        "pk": _write(args.pk or out_dir / "pk.zkpk", snark.proving_key_to_bytes(pk)),
        "vk": _write(args.vk or out_dir / "vk.zkvk", snark.verification_key_to_bytes(vk)),
    }
    out.set(constraints=descriptor.constraint_count, public_inputs=descriptor.num_inputs, seeded=seed is not None, **paths)
    if seed is not None:
        out.set(warning="seeded setup: keys are reproducible and must not be used outside tests")
    return 0


def cmd_issue(args, out: Output) -> int:
    schema = CredentialSchema.from_json(_need(args.schema).read_text())
    kp = IssuerKeypair.from_json(_need(args.key).read_text())
    values = {}
    for item in args.attr or []:
        label, sep, value = item.partition("=")
        if not sep or not value.strip().isdigit():
            raise UsageError(f"--attr expects label=UINT, got {item!r}")
        if label in values:
            raise UsageError(f"attribute {label!r} given twice")
        values[label] = int(value)
    cred = issue_credential(kp, schema, values)
    out.set(schema_id=cred.schema_id, issuer_id=cred.issuer_id, payloads=len(cred.y), credential=_write(args.out, cred.to_json()))
    return 0


def cmd_prove(args, out: Output) -> int:
    cred_path, pk_path = _need(args.credential), _need(args.pk)
    schema = CredentialSchema.from_json(_need(args.schema).read_text()) if args.schema else None
    cred = Credential.from_json(cred_path.read_text())
    m = len(cred.y)
    if args.disclose:
        if schema is None:
            raise UsageError("--disclose needs --schema")
        if args.statement:
            raise UsageError("use either --statement or --disclose")
        statement = disclosure_statement(schema, cred, _labels(args.disclose))
    else:
        statement = parse_statement(args.statement or "", schema if schema is not None else m)
    pk = snark.proving_key_from_bytes(pk_path.read_bytes())
    context = create_context(pk, cred, statement)
    out.set(statement=statement.to_dsl().splitlines(), context=_write(args.out, context.to_json()))
    return 0


def _verify_inputs_from_store(args):
    store = _store(args)
    if not args.issuer or not args.context_ref:
        raise UsageError("verifying from the store needs --issuer and --context-ref NAMESPACE/LABEL")
    vk_rec = store.resolve(args.issuer, args.vk_label, RecordKind.VK)
    ns, _, label = args.context_ref.partition("/")
    ctx_rec = store.resolve(ns, label, RecordKind.CONTEXT)
    schema = None
    if args.schema_label:
        schema = CredentialSchema.from_json(store.resolve(args.issuer, args.schema_label, RecordKind.SCHEMA).blob.decode())
    return vk_rec.blob, vk_rec.owner_public_key, ctx_rec.blob, schema


def cmd_verify(args, out: Output) -> int:
    if args.context and args.vk and args.issuer_pub:
        ctx_bytes = _need(args.context).read_bytes()
        vk_bytes = _need(args.vk).read_bytes()
        issuer_pub = public_key_from_json(_need(args.issuer_pub).read_text())
        schema = CredentialSchema.from_json(_need(args.schema).read_text()) if args.schema else None
    elif args.context or args.vk or args.issuer_pub:
        raise UsageError("file mode needs all of --context, --vk and --issuer-pub")
    else:
        vk_bytes, issuer_pub, ctx_bytes, schema = _verify_inputs_from_store(args)
        if args.schema:
            schema = CredentialSchema.from_json(_need(args.schema).read_text())

    try:
        vk = snark.verification_key_from_bytes(vk_bytes)
        context = ZklaimsContext.from_json(ctx_bytes)
    except FormatError as exc:
        out.set(signature_ok=False, proof_ok=False, semantics_ok=False, overall=False, failure_detail=f"malformed input: {exc}")
        return EXIT_MALFORMED
    if schema is not None and schema.schema_id != context.schema_id:
        out.set(signature_ok=False, proof_ok=False, semantics_ok=False, overall=False,
                failure_detail=f"context is for schema {context.schema_id!r}, not {schema.schema_id!r}")
        return EXIT_MALFORMED
    expected = parse_statement(args.expect or "", schema if schema is not None else vk.payload_count)
    if len(context.x.field_elements) != vk.num_inputs:
        out.set(signature_ok=False, proof_ok=False, semantics_ok=False, overall=False,
                failure_detail="verification key and context disagree on the payload count")
        return EXIT_MALFORMED
    report = verify_context(vk, issuer_pub, context, expected)
    out.set(**report.to_dict())
    out.set(schema_id=context.schema_id, issuer_id=context.issuer_id)
    return report.exit_code


def cmd_publish(args, out: Output) -> int:
    kp = IssuerKeypair.from_json(_need(args.key).read_text())
    blob = _need(args.file).read_bytes()
    try:
        kind = RecordKind.parse(args.kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rec = _store(args).publish(kp, args.label, kind, blob)
    out.set(namespace=rec.namespace_id, label=rec.label, kind=rec.kind.name.lower(), bytes=len(rec.blob))
    return 0


def cmd_resolve(args, out: Output) -> int:
    rec = _store(args).resolve(args.namespace, args.label, args.kind)
    out.set(namespace=rec.namespace_id, label=rec.label, kind=rec.kind.name.lower(), bytes=len(rec.blob))
    if args.out:
        out.set(file=_write(args.out, rec.blob))
    return 0


def cmd_bench(args, out: Output) -> int:
    try:
        counts = bench.parse_counts(args.payloads)
    except ValueError:
        raise UsageError(f"bad --payloads {args.payloads!r}") from None
    log = None
    if args.format != "json":
        log = lambda rec: print(f"# m={rec.payload_count} setup {rec.setup_ms:.0f} ms, prove {rec.prove_ms:.0f} ms", file=sys.stderr)  # noqa: E731
    records = bench.run_scaling(counts, args.reps, log=log)
    text = bench.to_csv(records)
    if args.out and args.out != "-":
        out.set(csv=_write(args.out, text))
    elif args.format != "json":
        sys.stdout.write(text)
    if args.format == "json":
        out.set(records=[dict(zip(bench.CSV_COLUMNS, r.row())) for r in records],
                linearity={f: bench.linearity(records, f)["spread"] for f in ("setup_ms", "prove_ms", "pk_bytes")})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zklaims", description="Issuer-signed attribute credentials with zkSNARK predicate proofs.")
    p.add_argument("--format", choices=("human", "json"), default="human")
    p.add_argument("--store", help="directory store root (ZKLAIMS_STORE overrides)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("keygen", help="create an Ed25519 issuer/namespace key")
    s.add_argument("--out", required=True)
    s.add_argument("--pub", help="also write the public key file here")
    s.set_defaults(func=cmd_keygen)

    s = sub.add_parser("schema", help="credential schemas")
    ss = s.add_subparsers(dest="schema_command", required=True, parser_class=_Parser)
    sn = ss.add_parser("new", help="lay out attribute labels over payloads")
    sn.add_argument("--labels", action="append", required=True, help="comma-separated slot labels (nonce is added)")
    sn.add_argument("--payloads", type=int)
    sn.add_argument("--schema-id")
    sn.add_argument("--key")
    sn.add_argument("--issuer-pub")
    sn.add_argument("--issuer-id")
    sn.add_argument("--out", required=True)
    sn.set_defaults(func=cmd_schema_new)

    s = sub.add_parser("setup", help="build the constraint system and run the one-time setup")
    s.add_argument("--schema", required=True)
    s.add_argument("--seed", help="64 hex digits; reproducible keys for tests only")
    s.add_argument("--out-dir", default=".")
    s.add_argument("--descriptor")
    s.add_argument("--pk")
    s.add_argument("--vk")
    s.set_defaults(func=cmd_setup)

    s = sub.add_parser("issue", help="issue a signed credential")
    s.add_argument("--schema", required=True)
    s.add_argument("--key", required=True)
    s.add_argument("--attr", action="append", metavar="LABEL=UINT")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_issue)

    s = sub.add_parser("prove", help="prove a statement about a credential")
    s.add_argument("--credential", required=True)
    s.add_argument("--pk", required=True)
    s.add_argument("--statement", help="clauses like 'slot1 >= 18', newline or ';' separated")
    s.add_argument("--disclose", action="append", help="labels to reveal via equality clauses")
    s.add_argument("--schema", help="schema file, needed for label names")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("verify", help="verify a context from files or from the store")
    s.add_argument("--context")
    s.add_argument("--vk")
    s.add_argument("--issuer-pub")
    s.add_argument("--schema")
    s.add_argument("--expect", default="", help="the statement the verifier requires")
    s.add_argument("--issuer", help="issuer namespace id (store mode)")
    s.add_argument("--vk-label", default="vk")
    s.add_argument("--schema-label")
    s.add_argument("--context-ref", help="NAMESPACE/LABEL of the context record (store mode)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("publish", help="sign and store a record in the owner's namespace")
    s.add_argument("--key", required=True)
    s.add_argument("--label", required=True)
    s.add_argument("--kind", required=True, choices=[k.name.lower() for k in RecordKind])
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_publish)

    s = sub.add_parser("resolve", help="fetch and authenticate a record")
    s.add_argument("--namespace", required=True)
    s.add_argument("--label", required=True)
    s.add_argument("--kind", choices=[k.name.lower() for k in RecordKind])
    s.add_argument("--out")
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("bench", help="scaling benchmark, CSV output")
    s.add_argument("--payloads", default="1..4", help="'1..4' or '1,2,3'")
    s.add_argument("--reps", type=int, default=3)
    s.add_argument("--out", help="CSV path ('-' for stdout)")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "statement", None):
        args.statement = args.statement.replace(";", "\n")
    if getattr(args, "expect", None):
        args.expect = args.expect.replace(";", "\n")
    name = args.command + (f" {args.schema_command}" if args.command == "schema" else "")
    out = Output(args.format, name)
    try:
        code = args.func(args, out)
    except UsageError as exc:
        out.set(error=str(exc))
        out.emit(False)
        return EXIT_USAGE
    except FormatError as exc:
        out.set(error=f"malformed input: {exc}")
        out.emit(False)
        return EXIT_MALFORMED
    except (ZklaimsError, ParseError, ValueError, OSError) as exc:
        slot = getattr(exc, "slot", None)
        out.set(error=f"{type(exc).__name__}: {exc}")
        if slot is not None:
            out.set(slot=slot)
        out.emit(False)
        return EXIT_FAIL
    out.emit(code == 0)
    return code


if __name__ == "__main__":
    sys.exit(main())
