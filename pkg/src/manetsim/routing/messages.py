"""Control-message records exchanged by the routing protocols.

These are simulator-internal records with realistic byte sizes configured
at the network layer, not bit-exact wire formats.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Rreq:
    origin: int
    origin_seq: int
    rreq_id: int
    dest: int
    dest_seq_known: int | None
    hop_count: int


@dataclass(frozen=True)
class Rrep:
    dest: int
    dest_seq: int
    hop_count: int
    origin: int


@dataclass(frozen=True)
class Rerr:
    unreachable: tuple[tuple[int, int], ...]  # (dest, bumped seq) pairs


@dataclass(frozen=True)
class AodvHello:
    sender: int


@dataclass(frozen=True)
class DsdvUpdate:
    sender: int
    entries: tuple[tuple[int, int, int | None], ...]  # (dest, seq, metric), None = broken


LINK_ASYM = "asym"
LINK_SYM = "sym"
LINK_MPR = "mpr"


@dataclass(frozen=True)
class OlsrHello:
    sender: int
    links: tuple[tuple[int, str], ...]  # (neighbor id, link status)


@dataclass(frozen=True)
class OlsrTc:
    originator: int
    ansn: int
    selectors: tuple[int, ...]


ControlMsg = Rreq | Rrep | Rerr | AodvHello | DsdvUpdate | OlsrHello | OlsrTc
