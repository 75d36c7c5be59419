"""Scenario configuration: plain-text section/key files, presets, validation.

A scenario document describes one experiment grid. The [scenario] section
carries the axes (protocols, channels, tx powers, packet sizes) and the
replication count; each channel axis value names a [channel.NAME] section
bundling the propagation model with the radio settings it implies.
Validation errors always name the offending section.key.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .network import MsgSizes
from .mobility import Region
from .propagation import CHANNEL_MODEL_KINDS, ChannelModel, UMA_DEFAULT_COEFFS
from .radio import EIRP_CAP_DBM, AntennaPattern, Directional, Omni
from .routing import PROTOCOLS

REGION_PRESETS = {
    "table1": (1500.0, 1500.0),
    "paper-text": (300.0, 1500.0),
}


class ConfigError(Exception):
    """Invalid scenario document; the message names the offending key."""


@dataclass(frozen=True)
class ChannelBundle:
    name: str
    model: ChannelModel
    freq_hz: float
    bitrate_bps: float
    bandwidth_hz: float
    pattern: AntennaPattern
    shadow_mode: str = "per_leg"


@dataclass(frozen=True)
class RunConfig:
    """One grid cell: everything a single deterministic run needs."""

    protocol: str
    channel: ChannelBundle
    tx_power_dbm: float
    pkt_bytes: int
    seed: int
    duration_s: float = 200.0
    warmup_s: float = 50.0
    n_nodes: int = 50
    region: Region = field(default_factory=Region)
    speed_mps: float = 20.0
    pause_s: float = 0.0
    n_pairs: int = 10
    pkts_per_s: float = 4.0
    start_window: tuple[float, float] = (50.0, 51.0)
    noise_figure_db: float = 7.0
    snr_threshold_db: float = 10.0
    mac_retries: int = 0
    routing_params: dict = field(default_factory=dict)
    msg_sizes: MsgSizes = field(default_factory=MsgSizes)
    positions: tuple[tuple[float, float], ...] | None = None

    @property
    def cell_key(self) -> tuple:
        return (self.protocol, self.channel.name, self.tx_power_dbm, self.pkt_bytes, self.seed)

    @property
    def cell_name(self) -> str:
        return (
            f"{self.protocol}_{self.channel.name}_p{self.tx_power_dbm:g}"
            f"_b{self.pkt_bytes}_s{self.seed}"
        )


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    protocols: tuple[str, ...]
    channels: tuple[ChannelBundle, ...]
    tx_powers_dbm: tuple[float, ...]
    pkt_bytes_list: tuple[int, ...]
    master_seed: int
    replications: int
    base: RunConfig  # shared scalars with placeholder axis fields
    canonical: str  # normalized document text, hashed into output dir names

    def cells(self) -> list[RunConfig]:
        out = []
        for proto in self.protocols:
            for ch in self.channels:
                for power in self.tx_powers_dbm:
                    for nbytes in self.pkt_bytes_list:
                        for rep in range(self.replications):
                            out.append(
                                replace(
                                    self.base,
                                    protocol=proto,
                                    channel=ch,
                                    tx_power_dbm=power,
                                    pkt_bytes=nbytes,
                                    seed=self.master_seed + rep,
                                )
                            )
        return out

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical.encode()).hexdigest()[:12]


def preset_path(name: str) -> Path:
    return Path(str(resources.files("manetsim") / "presets" / f"{name}.cfg"))


def resolve_config_path(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    candidate = preset_path(arg.removesuffix(".cfg"))
    if candidate.exists():
        return candidate
    raise ConfigError(f"config file not found: {arg}")


class _Doc:
    """configparser wrapper whose getters raise ConfigError naming the key."""

    def __init__(self, parser: configparser.ConfigParser):
        self.cp = parser

    def has(self, section: str) -> bool:
        return self.cp.has_section(section)

    def get(self, section: str, key: str, default=None) -> str | None:
        if self.cp.has_section(section) and key in self.cp[section]:
            return self.cp[section][key]
        return default

    def _convert(self, section, key, conv, default, kind):
        raw = self.get(section, key)
        if raw is None:
            return default
        try:
            return conv(raw)
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}: expected {kind}, got {raw!r}") from exc

    def get_float(self, section, key, default=None):
        return self._convert(section, key, float, default, "a number")

    def get_int(self, section, key, default=None):
        return self._convert(section, key, int, default, "an integer")

    def get_list(self, section, key, default=None) -> list[str] | None:
        raw = self.get(section, key)
        if raw is None:
            return default
        return [tok.strip() for tok in raw.replace(",", " ").split() if tok.strip()]

    def get_floats(self, section, key, default=None) -> list[float] | None:
        toks = self.get_list(section, key)
        if toks is None:
            return default
        try:
            return [float(t) for t in toks]
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}: expected numbers, got {toks!r}") from exc


def _parse_pattern(doc: _Doc, section: str) -> AntennaPattern | None:
    kind = doc.get(section, "pattern")
    if kind is None:
        return None
    if kind == "omni":
        return Omni(gain_dbi=doc.get_float(section, "gain_dbi", 0.0))
    if kind == "directional":
        try:
            return Directional(
                mainlobe_dbi=doc.get_float(section, "mainlobe_dbi", 17.0),
                beamwidth_deg=doc.get_float(section, "beamwidth_deg", 30.0),
                sidelobe_dbi=doc.get_float(section, "sidelobe_dbi", -10.0),
            )
        except ValueError as exc:
            raise ConfigError(f"{section}: {exc}") from exc
    raise ConfigError(f"{section}.pattern: must be omni or directional, got {kind!r}")


def _parse_uma_coeffs(doc: _Doc, section: str) -> dict[str, float]:
    raw = doc.get(section, "uma_coeffs")
    if raw is None:
        return dict(UMA_DEFAULT_COEFFS)
    coeffs = {}
    for tok in raw.replace(",", " ").split():
        if "=" not in tok:
            raise ConfigError(f"{section}.uma_coeffs: malformed entry {tok!r}")
        k, v = tok.split("=", 1)
        try:
            coeffs[k.strip()] = float(v)
        except ValueError as exc:
            raise ConfigError(f"{section}.uma_coeffs: {tok!r} is not key=number") from exc
    for needed in ("a", "b", "e"):
        if needed not in coeffs:
            raise ConfigError(f"{section}.uma_coeffs: missing coefficient {needed!r}")
    return coeffs


def _parse_channel(doc: _Doc, section: str, radio_section: str, name: str) -> ChannelBundle:
    def chan_or_radio_float(key, default):
        v = doc.get_float(section, key, None)
        if v is None:
            v = doc.get_float(radio_section, key, default)
        return v

    kind = doc.get(section, "model", "friis")
    if kind not in CHANNEL_MODEL_KINDS:
        raise ConfigError(
            f"{section}.model: unknown model {kind!r}, expected one of {CHANNEL_MODEL_KINDS}"
        )
    h_m = doc.get_float(section, "h_m", 5.0)
    ple_n = doc.get_float(section, "ple_n", 2.0)
    sigma = doc.get_float(section, "sigma_db", 0.0)
    if kind == "rma" and h_m <= 0:
        raise ConfigError(f"{section}.h_m: must be positive")
    if kind == "ci" and ple_n <= 0:
        raise ConfigError(f"{section}.ple_n: must be positive")
    if sigma < 0:
        raise ConfigError(f"{section}.sigma_db: must be non-negative")
    model = ChannelModel(
        kind=kind,
        gt_dbi=doc.get_float(section, "gt_dbi", 0.0),
        gr_dbi=doc.get_float(section, "gr_dbi", 0.0),
        h_m=h_m,
        ple_n=ple_n,
        sigma_db=sigma,
        uma_coeffs=_parse_uma_coeffs(doc, section),
    )
    pattern = _parse_pattern(doc, section)
    if pattern is None:
        pattern = _parse_pattern(doc, radio_section) or Omni()
    shadow_mode = doc.get(section, "shadow_mode", "per_leg")
    if shadow_mode not in ("per_leg", "per_packet"):
        raise ConfigError(f"{section}.shadow_mode: must be per_leg or per_packet")
    return ChannelBundle(
        name=name,
        model=model,
        freq_hz=chan_or_radio_float("freq_hz", 2.4e9),
        bitrate_bps=chan_or_radio_float("bitrate_bps", 2e6),
        bandwidth_hz=chan_or_radio_float("bandwidth_hz", 22e6),
        pattern=pattern,
        shadow_mode=shadow_mode,
    )


_ROUTING_PARAM_KEYS = {
    "aodv": (
        "hello_interval_s", "allowed_hello_loss", "active_route_timeout_s",
        "rreq_retries", "net_traversal_time_s", "path_discovery_time_s",
        "buffer_packets", "max_backoff_s", "jitter_frac", "forward_jitter_s",
    ),
    "dsdv": (
        "update_interval_s", "neighbor_loss_intervals", "jitter_frac",
        "forward_jitter_s", "initial_phase_s",
    ),
    "olsr": (
        "hello_interval_s", "tc_interval_s", "neighbor_hold_s",
        "topology_hold_s", "duplicate_hold_s", "jitter_frac", "forward_jitter_s",
    ),
}

_INT_PARAMS = {"allowed_hello_loss", "rreq_retries", "buffer_packets"}


def _parse_routing_params(doc: _Doc) -> dict[str, dict]:
    out: dict[str, dict] = {}
    for proto, keys in _ROUTING_PARAM_KEYS.items():
        params = {}
        for key in keys:
            getter = doc.get_int if key in _INT_PARAMS else doc.get_float
            v = getter("routing", f"{proto}_{key}", None)
            if v is not None:
                params[key] = v
        if params:
            out[proto] = params
    return out


def _parse_msg_sizes(doc: _Doc) -> MsgSizes:
    overrides = {}
    for name in MsgSizes.__dataclass_fields__:
        v = doc.get_int("routing", f"msg_{name}", None)
        if v is not None:
            overrides[name] = v
    return MsgSizes(**overrides)


def load_scenario(path: Path | str, tx_powers_override: list[float] | None = None) -> ScenarioConfig:
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    doc = _Doc(parser)

    duration = doc.get_float("scenario", "duration_s", 200.0)
    warmup = doc.get_float("scenario", "warmup_s", 50.0)
    if duration <= warmup:
        raise ConfigError(
            f"scenario.duration_s: must exceed warmup_s ({duration} <= {warmup})"
        )
    n_nodes = doc.get_int("scenario", "n_nodes", 50)
    if n_nodes < 2:
        raise ConfigError(f"scenario.n_nodes: need at least 2 nodes, got {n_nodes}")
    seed = doc.get_int("scenario", "seed", 1)
    replications = doc.get_int("scenario", "replications", 5)
    if replications < 1:
        raise ConfigError("scenario.replications: must be at least 1")

    protocols = tuple(doc.get_list("scenario", "protocols", list(PROTOCOLS)))
    for p in protocols:
        if p not in PROTOCOLS:
            raise ConfigError(f"scenario.protocols: unknown protocol {p!r}")

    powers = tx_powers_override or doc.get_floats("scenario", "tx_powers_dbm", [20.0])
    for p in powers:
        if p > EIRP_CAP_DBM:
            raise ConfigError(
                f"scenario.tx_powers_dbm: {p} dBm exceeds the {EIRP_CAP_DBM} dBm EIRP cap"
            )

    pkt_bytes_list = [int(x) for x in doc.get_floats("scenario", "pkt_bytes", [64])]
    for b in pkt_bytes_list:
        if b <= 0:
            raise ConfigError("scenario.pkt_bytes: sizes must be positive")

    preset = doc.get("mobility", "preset", None)
    if preset is not None and preset not in REGION_PRESETS:
        raise ConfigError(
            f"mobility.preset: unknown preset {preset!r}, expected {sorted(REGION_PRESETS)}"
        )
    pw, ph = REGION_PRESETS.get(preset, REGION_PRESETS["table1"])
    width = doc.get_float("mobility", "width_m", pw)
    height = doc.get_float("mobility", "height_m", ph)
    if width <= 0 or height <= 0:
        raise ConfigError("mobility.width_m/height_m: must be positive")
    speed = doc.get_float("mobility", "speed_mps", 20.0)
    if speed < 0:
        raise ConfigError("mobility.speed_mps: must be non-negative")
    pause = doc.get_float("mobility", "pause_s", 0.0)
    if pause < 0:
        raise ConfigError("mobility.pause_s: must be non-negative")

    n_pairs = doc.get_int("traffic", "n_pairs", 10)
    if n_pairs < 0:
        raise ConfigError("traffic.n_pairs: must be non-negative")
    if 2 * n_pairs > n_nodes:
        raise ConfigError(
            f"traffic.n_pairs: {n_pairs} pairs need {2 * n_pairs} endpoints "
            f"but scenario.n_nodes is {n_nodes}"
        )
    pkts_per_s = doc.get_float("traffic", "pkts_per_s", 4.0)
    if pkts_per_s <= 0:
        raise ConfigError("traffic.pkts_per_s: must be positive")
    window = doc.get_floats("traffic", "start_window", [50.0, 51.0])
    if len(window) != 2 or window[0] > window[1] or window[0] < 0:
        raise ConfigError(f"traffic.start_window: expected 'lo, hi' with 0 <= lo <= hi, got {window}")

    channel_names = doc.get_list("scenario", "channels", None)
    channels: list[ChannelBundle] = []
    if channel_names:
        for name in channel_names:
            section = f"channel.{name}"
            if not doc.has(section):
                raise ConfigError(f"scenario.channels: no [{section}] section for {name!r}")
            channels.append(_parse_channel(doc, section, "radio", name))
    else:
        name = doc.get("channel", "model", "friis")
        channels.append(_parse_channel(doc, "channel", "radio", name))

    mac_retries = doc.get_int("radio", "mac.retries", 0)
    if mac_retries < 0:
        raise ConfigError("radio.mac.retries: must be non-negative")

    base = RunConfig(
        protocol=protocols[0],
        channel=channels[0],
        tx_power_dbm=powers[0],
        pkt_bytes=pkt_bytes_list[0],
        seed=seed,
        duration_s=duration,
        warmup_s=warmup,
        n_nodes=n_nodes,
        region=Region(width, height),
        speed_mps=speed,
        pause_s=pause,
        n_pairs=n_pairs,
        pkts_per_s=pkts_per_s,
        start_window=(window[0], window[1]),
        noise_figure_db=doc.get_float("radio", "noise_figure_db", 7.0),
        snr_threshold_db=doc.get_float("radio", "snr_threshold_db", 10.0),
        mac_retries=mac_retries,
        routing_params=_parse_routing_params(doc),
        msg_sizes=_parse_msg_sizes(doc),
    )

    canonical_lines = []
    for section in sorted(parser.sections()):
        for key in sorted(parser[section]):
            canonical_lines.append(f"{section}.{key}={parser[section][key]}")
    if tx_powers_override:
        canonical_lines.append(
            "override.tx_powers_dbm=" + ",".join(f"{p:g}" for p in tx_powers_override)
        )
    return ScenarioConfig(
        name=path.stem,
        protocols=protocols,
        channels=tuple(channels),
        tx_powers_dbm=tuple(powers),
        pkt_bytes_list=tuple(pkt_bytes_list),
        master_seed=seed,
        replications=replications,
        base=base,
        canonical="\n".join(canonical_lines),
    )
