"""YAML network configuration files and CSV/JSON export.

A config file looks like::

    n_receivers: 2
    hop: 1.0
    active_sender: 1
    frame_offset: 0.0
    qubit: {mu_re: 1.0, mu_im: 0.0, nu_re: 1.0, nu_im: 0.0, alpha_re: 0.5, alpha_im: 0.0}
    sets:
      - {g: 60.0, delta: 500.0}
      - {g: 61.0, delta: 600.0}

Only ``n_receivers`` and ``sets`` are required. ``qubit`` entries default to
zero except ``mu_re`` (default 1). ``allow_identical_sets: true`` disables
the distinct-sets check.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json

import yaml

from .cscq import CSCQ
from .errors import ConfigError
from .network import NetworkConfig, TernarySetParams

__all__ = ["parse_config", "load_config", "dump_config", "config_hash", "write_table"]

_TOP_KEYS = {"n_receivers", "hop", "active_sender", "frame_offset", "qubit", "sets", "allow_identical_sets"}
_QUBIT_KEYS = ("mu_re", "mu_im", "nu_re", "nu_im", "alpha_re", "alpha_im")


def _line(node):
    return node.start_mark.line + 1


def _scalar(node, kind, name):
    if not isinstance(node, yaml.ScalarNode):
        raise ConfigError(f"{name} must be a scalar", _line(node))
    value = yaml.safe_load(node.value) if node.tag != "tag:yaml.org,2002:str" else node.value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer, got {node.value!r}", _line(node))
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{name} must be true or false, got {node.value!r}", _line(node))
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {node.value!r}", _line(node))
    return float(value)


def _mapping(node, name):
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"{name} must be a mapping", _line(node))
    out = {}
    for key, value in node.value:
        if key.value in out:
            raise ConfigError(f"duplicate key {key.value!r} in {name}", _line(key))
        out[key.value] = (key, value)
    return out


def parse_config(text):
    """Parse config text into ``(NetworkConfig, CSCQ or None)``.

    Errors carry the offending line number.
    """
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise ConfigError(f"YAML syntax error: {exc.problem}", mark.line + 1 if mark else None) from None
    if root is None:
        raise ConfigError("empty configuration")
    top = _mapping(root, "configuration")
    for key, (knode, _) in top.items():
        if key not in _TOP_KEYS:
            raise ConfigError(f"unknown key {key!r}", _line(knode))
    for required in ("n_receivers", "sets"):
        if required not in top:
            raise ConfigError(f"missing required key {required!r}", _line(root))

    kwargs = {"n_receivers": _scalar(top["n_receivers"][1], int, "n_receivers")}
    if "active_sender" in top:
        kwargs["active_sender"] = _scalar(top["active_sender"][1], int, "active_sender")
    for key in ("hop", "frame_offset"):
        if key in top:
            kwargs[key] = _scalar(top[key][1], float, key)
    if "allow_identical_sets" in top:
        kwargs["allow_identical_sets"] = _scalar(top["allow_identical_sets"][1], bool, "allow_identical_sets")

    sets_node = top["sets"][1]
    if not isinstance(sets_node, yaml.SequenceNode):
        raise ConfigError("sets must be a list of {g, delta} mappings", _line(sets_node))
    sets = []
    for k, item in enumerate(sets_node.value, start=1):
        entry = _mapping(item, f"sets[{k}]")
        extra = set(entry) - {"g", "delta"}
        if extra or len(entry) != 2:
            raise ConfigError(f"sets[{k}] needs exactly the keys g and delta", _line(item))
        try:
            sets.append(TernarySetParams(_scalar(entry["g"][1], float, "g"),
                                         _scalar(entry["delta"][1], float, "delta")))
        except ConfigError as exc:
            if exc.line is None:
                raise ConfigError(str(exc), _line(item)) from None
            raise
    kwargs["sets"] = tuple(sets)
    try:
        config = NetworkConfig(**kwargs)
    except ConfigError as exc:
        raise ConfigError(str(exc), _line(root)) from None

    qubit = None
    if "qubit" in top:
        entry = _mapping(top["qubit"][1], "qubit")
        for key, (knode, _) in entry.items():
            if key not in _QUBIT_KEYS:
                raise ConfigError(f"unknown qubit key {key!r}", _line(knode))
        vals = {key: _scalar(entry[key][1], float, key) for key in entry}
        qubit = CSCQ(
            complex(vals.get("mu_re", 1.0), vals.get("mu_im", 0.0)),
            complex(vals.get("nu_re", 0.0), vals.get("nu_im", 0.0)),
            complex(vals.get("alpha_re", 0.0), vals.get("alpha_im", 0.0)),
        )
    return config, qubit


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(config, qubit=None):
    """Canonical YAML text that ``parse_config`` maps back to the same objects."""
    data = {
        "n_receivers": config.n_receivers,
        "hop": float(config.hop),
        "active_sender": config.active_sender,
        "frame_offset": float(config.frame_offset),
    }
    if config.allow_identical_sets:
        data["allow_identical_sets"] = True
    if qubit is not None:
        mu, nu, alpha = complex(qubit.mu), complex(qubit.nu), complex(qubit.alpha)
        data["qubit"] = {
            "mu_re": mu.real, "mu_im": mu.imag,
            "nu_re": nu.real, "nu_im": nu.imag,
            "alpha_re": alpha.real, "alpha_im": alpha.imag,
        }
    data["sets"] = [{"g": float(s.g), "delta": float(s.delta)} for s in config.sets]
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)


def config_hash(config, qubit=None):
    return hashlib.sha256(dump_config(config, qubit).encode()).hexdigest()[:16]


def _fmt(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return "" if x is None else str(x)
    return f"{x:.12g}"


def write_table(stream, columns, rows, meta=None, fmt="csv"):
    """Write rows as CSV (``#`` comment header) or as JSON with the same content."""
    meta = meta or {}
    if fmt == "csv":
        for key, value in meta.items():
            stream.write(f"# {key}: {value}\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
    elif fmt == "json":
        def conv(x):
            if isinstance(x, float):
                return float(f"{x:.12g}")
            return x

        body = {"meta": meta, "columns": list(columns), "rows": [[conv(x) for x in row] for row in rows]}
        json.dump(body, stream, indent=1)
        stream.write("\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def table_text(columns, rows, meta=None, fmt="csv"):
    buf = io.StringIO()
    write_table(buf, columns, rows, meta, fmt)
    return buf.getvalue()
