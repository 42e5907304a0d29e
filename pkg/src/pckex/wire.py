"""Framed TCP peer demo for Protocol I.

Frames are a 32-bit big-endian payload length followed by UTF-8 JSON; every
payload carries ``"v": 1``.  One session exchanges

    client -> hello        server -> hello
    client -> element(base), element(alice)
    server -> element(bob)
    client -> confirm      server -> confirm

and both ends check the peer's key digest.  The digest is FNV-1a-64 over
the key's canonical text form: this is a study object with a published
break, not a secure channel, so a non-cryptographic checksum is the point.
"""

from __future__ import annotations

import json
import random
import socket
import struct
from typing import Callable

from .autos import CentralAut, identity_b, sample_A
from .errors import (
    BadJson,
    BadVersion,
    CentralElement,
    DigestMismatch,
    FrameTooLarge,
    ParamMismatch,
    Timeout,
    Truncated,
)
from .group import Element, GroupParams, element_to_text
from .protocols import Transcript1, random_noncentral
from .structure import is_central

WIRE_VERSION = 1
MAX_PAYLOAD = 1 << 20
_HEADER = struct.Struct(">I")

FNV_OFFSET = 14695981039346656037
FNV_PRIME = 1099511628211

Tap = Callable[[str, dict], None]


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h = (h ^ b) * FNV_PRIME % 2**64
    return h


def key_digest(key: Element) -> str:
    return format(fnv1a64(element_to_text(key).encode()), "016x")


def encode_frame(msg: dict) -> bytes:
    payload = json.dumps(msg, sort_keys=True, separators=(",", ":")).encode()
    if len(payload) > MAX_PAYLOAD:
        raise FrameTooLarge(f"payload of {len(payload)} bytes exceeds {MAX_PAYLOAD}")
    return _HEADER.pack(len(payload)) + payload


def decode_frame(data: bytes) -> dict:
    """Decode exactly one frame; rejects short, oversized, or padded input."""
    if len(data) < _HEADER.size:
        raise Truncated(f"{len(data)} bytes is too short for a frame header")
    (length,) = _HEADER.unpack(data[: _HEADER.size])
    if length > MAX_PAYLOAD:
        raise FrameTooLarge(f"declared payload of {length} bytes exceeds {MAX_PAYLOAD}")
    if len(data) < _HEADER.size + length:
        raise Truncated("frame payload is shorter than its declared length")
    if len(data) > _HEADER.size + length:
        raise BadJson("trailing bytes after the frame")
    return _parse_payload(data[_HEADER.size :])


def _parse_payload(payload: bytes) -> dict:
    try:
        msg = json.loads(payload.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BadJson("payload is not valid JSON") from exc
    if not isinstance(msg, dict):
        raise BadJson("payload is not a JSON object")
    if msg.get("v") != WIRE_VERSION:
        raise BadVersion(f"unsupported wire version {msg.get('v')!r}")
    return msg


def hello_message(params: GroupParams) -> dict:
    return {"v": WIRE_VERSION, "type": "hello", "params": [params.p, params.m, params.n]}


def element_message(role: str, g: Element) -> dict:
    return {"v": WIRE_VERSION, "type": "element", "role": role, "exps": list(g.exps)}


def confirm_message(digest: str) -> dict:
    return {"v": WIRE_VERSION, "type": "confirm", "digest": digest}


def _recv_exact(sock: socket.socket, k: int) -> bytes:
    buf = b""
    while len(buf) < k:
        try:
            chunk = sock.recv(k - len(buf))
        except socket.timeout as exc:
            raise Timeout("peer did not answer in time") from exc
        if not chunk:
            raise Truncated("connection closed mid-frame")
        buf += chunk
    return buf


def send_message(sock: socket.socket, msg: dict, tap: Tap | None = None) -> None:
    if tap:
        tap("send", msg)
    sock.sendall(encode_frame(msg))


def recv_message(sock: socket.socket, tap: Tap | None = None) -> dict:
    (length,) = _HEADER.unpack(_recv_exact(sock, _HEADER.size))
    if length > MAX_PAYLOAD:
        raise FrameTooLarge(f"declared payload of {length} bytes exceeds {MAX_PAYLOAD}")
    msg = _parse_payload(_recv_exact(sock, length))
    if tap:
        tap("recv", msg)
    return msg


def _expect(msg: dict, mtype: str, role: str | None = None) -> dict:
    if msg.get("type") != mtype or (role is not None and msg.get("role") != role):
        raise BadJson(f"expected {mtype}{'/' + role if role else ''}, got {msg!r}")
    return msg


def _check_hello(msg: dict, params: GroupParams) -> None:
    _expect(msg, "hello")
    if msg.get("params") != [params.p, params.m, params.n]:
        raise ParamMismatch(f"peer params {msg.get('params')} != ours")


def _element_from(msg: dict, params: GroupParams) -> Element:
    try:
        return Element(params, tuple(int(x) for x in msg["exps"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise BadJson("malformed element message") from exc


def run_kex1_client(
    address: tuple[str, int],
    seed: int,
    params: GroupParams,
    tap: Tap | None = None,
    timeout: float = 10.0,
) -> Element:
    """Run the initiator (Alice) side of one session; returns the key."""
    rng = random.Random(seed)
    with socket.create_connection(address, timeout=timeout) as sock:
        sock.settimeout(timeout)
        send_message(sock, hello_message(params), tap)
        _check_hello(recv_message(sock, tap), params)
        g = random_noncentral(params, rng)
        f_a = CentralAut(sample_A(params, rng), identity_b(params))
        send_message(sock, element_message("base", g), tap)
        send_message(sock, element_message("alice", f_a.apply(g)), tap)
        bob = _element_from(_expect(recv_message(sock, tap), "element", "bob"), params)
        key = f_a.apply(bob)
        digest = key_digest(key)
        send_message(sock, confirm_message(digest), tap)
        peer = _expect(recv_message(sock, tap), "confirm")
        if peer.get("digest") != digest:
            raise DigestMismatch("peer key digest disagrees with ours")
    return key


def run_kex1_server(
    listener: socket.socket,
    seed: int,
    params: GroupParams,
    tap: Tap | None = None,
    timeout: float = 10.0,
) -> Element:
    """Accept one connection and run the responder (Bob) side; returns the key."""
    rng = random.Random(seed)
    listener.settimeout(timeout)
    try:
        sock, _ = listener.accept()
    except socket.timeout as exc:
        raise Timeout("no peer connected in time") from exc
    with sock:
        sock.settimeout(timeout)
        _check_hello(recv_message(sock, tap), params)
        send_message(sock, hello_message(params), tap)
        g = _element_from(_expect(recv_message(sock, tap), "element", "base"), params)
        if is_central(g):
            raise CentralElement("peer proposed a central base element")
        alice = _element_from(_expect(recv_message(sock, tap), "element", "alice"), params)
        f_b = CentralAut(sample_A(params, rng), identity_b(params))
        send_message(sock, element_message("bob", f_b.apply(g)), tap)
        key = f_b.apply(alice)
        digest = key_digest(key)
        peer = _expect(recv_message(sock, tap), "confirm")
        if peer.get("digest") != digest:
            raise DigestMismatch("peer key digest disagrees with ours")
        send_message(sock, confirm_message(digest), tap)
    return key


def transcript_from_tap(tapped: list[tuple[str, dict]], params: GroupParams) -> Transcript1:
    """Rebuild the public Protocol I transcript from captured frames."""
    roles: dict[str, Element] = {}
    for _, msg in tapped:
        if msg.get("type") == "element":
            roles[msg.get("role")] = _element_from(msg, params)
    try:
        return Transcript1(params, roles["base"], roles["alice"], roles["bob"])
    except KeyError as exc:
        raise BadJson("capture does not contain a full session") from exc
