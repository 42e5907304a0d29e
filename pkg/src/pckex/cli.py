"""Command-line driver.

Usage errors exit 2 (argparse), domain errors exit 1 with the error name on
stderr, success exits 0.  Attack commands exit 0 only when the recovered
key certifies against the honest one.  All randomness flows from --seed, so
identical invocations print identical bytes.
"""

from __future__ import annotations

import argparse
import json
import random
import socket
import sys

from . import attacks, oracle, protocols, structure, wire
from .errors import BadJson, ToolkitError
from .group import (
    Element,
    GroupParams,
    element_from_text,
    element_to_text,
    random_element,
)

DEFAULT_PARAMS = "3,2,4"


def _parse_params(text: str) -> GroupParams:
    try:
        p, m, n = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise BadJson(f"--params expects p,m,n, got {text!r}") from exc
    return GroupParams(p, m, n)


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\n".join(lines))


def _cmd_group_info(args) -> int:
    par = _parse_params(args.params)
    center = par.p ** (par.m + par.n - 2)
    derived = par.p ** (par.n - 1)
    payload = {
        "p": par.p,
        "m": par.m,
        "n": par.n,
        "order": par.order,
        "center": center,
        "derived": derived,
        "frattini": par.order // par.p**par.n,
        "exponent": par.p_m,
    }
    lines = [
        f"group on {par.n + 1} generators, p={par.p} m={par.m} n={par.n}",
        f"|G|      = {par.order}",
        f"|Z(G)|   = {center}",
        f"|G'|     = {derived}",
        f"|Phi(G)| = {payload['frattini']}",
        f"exp(G)   = {par.p_m}",
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_el(args) -> int:
    g = element_from_text(args.a)
    if args.el_op == "mul":
        out = g * element_from_text(args.b)
    elif args.el_op == "comm":
        from .group import commutator

        out = commutator(g, element_from_text(args.b))
    elif args.el_op == "inv":
        out = g.inverse()
    else:  # pow
        out = g**args.e
    _emit(args, {"result": element_to_text(out)}, [element_to_text(out)])
    return 0


def _cmd_kex1(args) -> int:
    par = _parse_params(args.params)
    rng = random.Random(args.seed)
    run = protocols.kex1_run(par, rng, args.family)
    payload = {
        "transcript": run.transcript.to_json(),
        "key": element_to_text(run.key),
        "key_parity": list(structure.parity(run.key)),
    }
    lines = [
        "protocol I session",
        f"g     = {element_to_text(run.transcript.g)}",
        f"msg_a = {element_to_text(run.transcript.msg_a)}",
        f"msg_b = {element_to_text(run.transcript.msg_b)}",
        f"key   = {payload['key']}",
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_kex2(args) -> int:
    par = _parse_params(args.params)
    rng = random.Random(args.seed)
    run = protocols.kex2_run(par, rng, args.family)
    agree = run.alice_key == run.bob_key
    payload = {
        "transcript": run.transcript.to_json(),
        "alice_key": element_to_text(run.alice_key),
        "bob_key": element_to_text(run.bob_key),
        "agree": agree,
    }
    lines = [
        "protocol II session",
        f"u1 = {element_to_text(run.transcript.u1)}",
        f"u2 = {element_to_text(run.transcript.u2)}",
        f"u3 = {element_to_text(run.transcript.u3)}",
        f"key = {payload['alice_key']} (agree={agree})",
    ]
    _emit(args, payload, lines)
    return 0 if agree else 1


def _cmd_sign(args) -> int:
    par = _parse_params(args.params)
    rng = random.Random(args.seed)
    alpha, beta, a_secret = protocols.signature_keygen(par, rng)
    x = random_element(par, rng)
    sig = protocols.sign(alpha, a_secret, x, rng)
    payload = {
        "protocol": "sig",
        "params": [par.p, par.m, par.n],
        "elements": {
            "alpha": element_to_text(alpha),
            "beta": element_to_text(beta),
            "x": element_to_text(sig.x),
            "s": element_to_text(sig.s),
        },
    }
    _emit(
        args,
        payload,
        [json.dumps(payload, sort_keys=True)],  # the transcript is the output
    )
    return 0


def _load_signature(args) -> tuple[Element, Element, protocols.Signature]:
    if args.infile:
        with open(args.infile, "r", encoding="utf-8") as fh:
            raw = fh.read()
    else:
        raw = sys.stdin.read()
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise BadJson("input is not valid JSON") from exc
    if not isinstance(payload, dict) or payload.get("protocol") != "sig":
        raise BadJson("expected a 'sig' transcript")
    try:
        els = {k: element_from_text(payload["elements"][k]) for k in ("alpha", "beta", "x", "s")}
    except (KeyError, TypeError) as exc:
        raise BadJson("malformed signature transcript") from exc
    return els["alpha"], els["beta"], protocols.Signature(els["x"], els["s"])


def _cmd_verify(args) -> int:
    alpha, beta, sig = _load_signature(args)
    ok = protocols.verify(alpha, beta, sig)
    _emit(args, {"valid": ok}, [f"valid = {ok}"])
    return 0 if ok else 1


def _cmd_attack(args) -> int:
    par = _parse_params(args.params)
    rng = random.Random(args.seed)
    if args.target == "kex1a":
        run = protocols.kex1_run(par, rng, "a")
        report = attacks.attack_kex1_a(run.transcript)
        truth = oracle.dh_oracle(run.alice_secret, run.bob_secret, run.transcript)
        report = attacks.certify(report, truth)
    elif args.target == "kex1b":
        run = protocols.kex1_run(par, rng, "b")
        report = attacks.attack_kex1_b(run.transcript)
        truth = oracle.dh_oracle(run.alice_secret, run.bob_secret, run.transcript)
        report = attacks.certify(report, truth)
    elif args.target == "kex2b":
        run2 = protocols.kex2_run(par, rng, "b")
        report = attacks.certify(attacks.attack_kex2_b(run2.transcript), run2.alice_key)
    else:  # sig
        alpha, beta, _ = protocols.signature_keygen(par, rng)
        report = attacks.attack_signature(alpha, beta, rng)
    payload = attacks.report_to_json(report)
    _emit(
        args,
        payload,
        [f"method={payload['method']} succeeded={payload['succeeded']} "
         f"recovered_key={payload['recovered_key']}"],
    )
    return 0 if report.succeeded else 1


def _cmd_oracle_verify(args) -> int:
    par = _parse_params(args.params)
    rng = random.Random(args.seed)
    checks: dict[str, bool] = {}
    if par.order <= oracle.GROUP_ENUM_LIMIT:
        elems = oracle.enumerate_group(par)
        checks["order_count"] = len(set(elems)) == par.order
        checks["center_count"] = sum(
            structure.is_central(g) for g in elems
        ) == par.p ** (par.m + par.n - 2)
        checks["derived_count"] = sum(
            structure.in_derived(g) for g in elems
        ) == par.p ** (par.n - 1)
    agree = True
    laws = True
    for _ in range(args.pairs):
        g = random_element(par, rng)
        h = random_element(par, rng)
        agree &= oracle.naive_multiply(g, h) == g * h
        laws &= (g * g.inverse()).is_identity() and (g.inverse() * g).is_identity()
    checks["fast_vs_naive"] = agree
    checks["inverse_laws"] = laws
    ok = all(checks.values())
    payload = {"checks": checks, "ok": ok, "pairs": args.pairs}
    _emit(
        args,
        payload,
        [f"{name}: {'ok' if good else 'FAIL'}" for name, good in sorted(checks.items())]
        + [f"overall: {'ok' if ok else 'FAIL'}"],
    )
    return 0 if ok else 1


def _cmd_peer(args) -> int:
    par = _parse_params(args.params)
    if args.peer_role == "serve":
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as listener:
            listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            listener.bind((args.host, args.port))
            listener.listen(1)
            print(f"listening on {listener.getsockname()[1]}", file=sys.stderr)
            key = wire.run_kex1_server(listener, args.seed, par, timeout=args.timeout)
    else:
        key = wire.run_kex1_client((args.host, args.port), args.seed, par, timeout=args.timeout)
    digest = wire.key_digest(key)
    _emit(
        args,
        {"key": element_to_text(key), "digest": digest},
        [f"key    = {element_to_text(key)}", f"digest = {digest}"],
    )
    return 0


def _cmd_scalar(args) -> int:
    par = _parse_params(args.params)
    rng = random.Random(args.seed)
    beta2 = rng.randrange(par.p_m)
    sec_a = protocols.sample_scalar_secret(par, rng)
    sec_b = protocols.sample_scalar_secret(par, rng)
    msg_a = protocols.scalar_message(sec_a, beta2)
    msg_b = protocols.scalar_message(sec_b, beta2)
    key_a = protocols.scalar_key(sec_a, msg_b, beta2)
    key_b = protocols.scalar_key(sec_b, msg_a, beta2)
    payload = {
        "beta2": beta2,
        "msg_a": msg_a,
        "msg_b": msg_b,
        "key_a": key_a,
        "key_b": key_b,
        "agree": key_a == key_b,
    }
    lines = [
        f"beta2 = {beta2}",
        f"msg_a = {msg_a}  msg_b = {msg_b}",
        f"key   = {key_a} / {key_b} (agree={payload['agree']})",
    ]
    _emit(args, payload, lines)
    return 0 if payload["agree"] else 1


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="pckex",
        description="Collected-word p-group arithmetic, key exchange, and attacks.",
    )
    top.add_argument("--params", default=DEFAULT_PARAMS, help="group parameters p,m,n")
    top.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    top.add_argument("--json", action="store_true", help="machine-readable output")
    sub = top.add_subparsers(dest="command", required=True)

    group = sub.add_parser("group", help="group-level queries")
    gsub = group.add_subparsers(dest="group_op", required=True)
    ginfo = gsub.add_parser("info", help="orders of the group and its subgroups")
    ginfo.set_defaults(func=_cmd_group_info)

    el = sub.add_parser("el", help="element arithmetic on text forms")
    esub = el.add_subparsers(dest="el_op", required=True)
    for op, doc in (("mul", "product"), ("comm", "commutator")):
        q = esub.add_parser(op, help=doc)
        q.add_argument("a")
        q.add_argument("b")
        q.set_defaults(func=_cmd_el)
    einv = esub.add_parser("inv", help="inverse")
    einv.add_argument("a")
    einv.set_defaults(func=_cmd_el)
    epow = esub.add_parser("pow", help="integer power")
    epow.add_argument("a")
    epow.add_argument("e", type=int)
    epow.set_defaults(func=_cmd_el)

    kex1 = sub.add_parser("kex1", help="protocol I")
    k1sub = kex1.add_subparsers(dest="kex_op", required=True)
    k1demo = k1sub.add_parser("demo", help="one seeded session")
    k1demo.add_argument("--family", choices=("central", "a", "b"), default="central")
    k1demo.set_defaults(func=_cmd_kex1)

    kex2 = sub.add_parser("kex2", help="protocol II")
    k2sub = kex2.add_subparsers(dest="kex_op", required=True)
    k2demo = k2sub.add_parser("demo", help="one seeded session")
    k2demo.add_argument("--family", choices=("central", "a", "b"), default="central")
    k2demo.set_defaults(func=_cmd_kex2)

    signp = sub.add_parser("sign", help="keygen and sign a random message")
    signp.set_defaults(func=_cmd_sign)

    verifyp = sub.add_parser("verify", help="verify a signature transcript")
    verifyp.add_argument("--infile", help="transcript file (default stdin)")
    verifyp.set_defaults(func=_cmd_verify)

    attackp = sub.add_parser("attack", help="run and certify an attack")
    attackp.add_argument("target", choices=("kex1a", "kex1b", "kex2b", "sig"))
    attackp.set_defaults(func=_cmd_attack)

    oraclep = sub.add_parser("oracle", help="brute-force self checks")
    osub = oraclep.add_subparsers(dest="oracle_op", required=True)
    overify = osub.add_parser("verify", help="cross-check fast arithmetic")
    overify.add_argument("--pairs", type=int, default=200)
    overify.set_defaults(func=_cmd_oracle_verify)

    peer = sub.add_parser("peer", help="framed TCP demo of protocol I")
    psub = peer.add_subparsers(dest="peer_role", required=True)
    for role in ("serve", "connect"):
        q = psub.add_parser(role)
        q.add_argument("--host", default="127.0.0.1")
        q.add_argument("--port", type=int, default=9775)
        q.add_argument("--timeout", type=float, default=10.0)
        q.set_defaults(func=_cmd_peer)

    scalar = sub.add_parser("scalar", help="integer-only fast path")
    ssub = scalar.add_subparsers(dest="scalar_op", required=True)
    sdemo = ssub.add_parser("demo", help="one seeded scalar exchange")
    sdemo.set_defaults(func=_cmd_scalar)

    return top


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except ToolkitError as err:
        print(f"{err.name}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
