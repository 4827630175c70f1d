"""JSON channel/ensemble documents, frontier CSV and SVG output.

Complex numbers are stored as ``[re, im]`` pairs. Documents carry
``format_version: 1``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .channel import HadamardChannelSpec, validate_spec
from .entropic import EnsembleEntry, InputEnsemble
from .errors import InvalidEnsemble, IoError, ParseError, ValidationError

FORMAT_VERSION = 1


def _read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _write_text(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _complex_vector(raw, what):
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: expected a list of [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParseError(f"{what}: expected a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def _pairs(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).ravel()]


def _check_version(doc, path):
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"{path}: unsupported format_version {doc.get('format_version')!r}")


def channel_from_document(doc, path="<document>") -> HadamardChannelSpec:
    """Decode a channel document without checking the POVM/state invariants."""
    _check_version(doc, path)
    try:
        d_a, d_c = int(doc["d_A"]), int(doc["d_C"])
        raw_phi, raw_psi = doc["povm_vectors"], doc["output_states"]
    except KeyError as exc:
        raise ParseError(f"{path}: missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: d_A and d_C must be integers") from exc
    if not isinstance(raw_phi, list) or not isinstance(raw_psi, list) or not raw_phi:
        raise ParseError(f"{path}: povm_vectors and output_states must be non-empty lists")
    phi = [_complex_vector(v, f"povm_vectors[{i}]") for i, v in enumerate(raw_phi)]
    psi = [_complex_vector(v, f"output_states[{i}]") for i, v in enumerate(raw_psi)]
    for i, v in enumerate(phi):
        if v.size != d_a:
            raise ParseError(f"{path}: povm_vectors[{i}] has length {v.size}, d_A is {d_a}")
    for i, v in enumerate(psi):
        if v.size != d_c:
            raise ParseError(f"{path}: output_states[{i}] has length {v.size}, d_C is {d_c}")
    if len(phi) != len(psi):
        raise ParseError(f"{path}: {len(phi)} POVM vectors but {len(psi)} output states")
    return HadamardChannelSpec(np.array(phi), np.array(psi))


def load_channel_document(path) -> HadamardChannelSpec:
    return channel_from_document(_read_json(path), str(path))


def parse_channel_file(path) -> HadamardChannelSpec:
    """Read and validate a channel file.

    Raises :class:`ValidationError` listing every violated invariant.
    """
    spec = load_channel_document(path)
    report = validate_spec(spec)
    if not report.passed:
        raise ValidationError(report.problems)
    return spec


def channel_to_document(spec: HadamardChannelSpec) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "d_A": spec.d_A,
        "d_C": spec.d_C,
        "povm_vectors": [_pairs(v) for v in spec.povm_vectors],
        "output_states": [_pairs(v) for v in spec.output_states],
    }


def write_channel_file(spec: HadamardChannelSpec, path):
    _write_text(path, json.dumps(channel_to_document(spec), indent=2) + "\n")


def _label(value):
    if value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise ParseError(f"labels must be integers or strings, got {value!r}")


def ensemble_from_document(doc, path="<document>") -> InputEnsemble:
    _check_version(doc, path)
    task = doc.get("task")
    if task not in ("cc", "cq", "eac"):
        raise ParseError(f"{path}: task must be one of cc, cq, eac")
    raw = doc.get("entries")
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{path}: entries must be a non-empty list")
    entries = []
    for i, e in enumerate(raw):
        if not isinstance(e, dict) or "w" not in e or "p" not in e or "state" not in e:
            raise ParseError(f"{path}: entries[{i}] needs w, p and state")
        try:
            p = float(e["p"])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{path}: entries[{i}].p is not a number") from exc
        entries.append(EnsembleEntry(
            _label(e["w"]), _label(e.get("z")), p,
            _complex_vector(e["state"], f"entries[{i}].state"),
        ))
    try:
        return InputEnsemble(task, entries)
    except InvalidEnsemble as exc:
        raise ParseError(f"{path}: {exc}") from exc


def parse_ensemble_file(path, d_A: int | None = None) -> InputEnsemble:
    ens = ensemble_from_document(_read_json(path), str(path))
    if d_A is not None:
        try:
            ens.validate(d_A)
        except InvalidEnsemble as exc:
            raise ValidationError(str(exc)) from exc
    return ens


def ensemble_to_document(ensemble: InputEnsemble) -> dict:
    entries = []
    for e in ensemble.entries:
        item = {"w": e.w, "p": e.p, "state": _pairs(e.state)}
        if e.z is not None:
            item["z"] = e.z
        entries.append(item)
    return {"format_version": FORMAT_VERSION, "task": ensemble.task, "entries": entries}


def write_ensemble_file(ensemble: InputEnsemble, path):
    _write_text(path, json.dumps(ensemble_to_document(ensemble), indent=2) + "\n")


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    s = f"{x:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def frontier_csv(frontier) -> str:
    rows = sorted(frontier.points, key=lambda p: (p.rate_c, -p.rate_b))
    lines = ["lambda,rate_b,rate_c"]
    lines += [f"{_fmt(p.lam)},{_fmt(p.rate_b)},{_fmt(p.rate_c)}" for p in rows]
    return "\n".join(lines) + "\n"


def emit_frontier_csv(frontier, path):
    _write_text(path, frontier_csv(frontier))


def frontier_svg(frontier, title: str = "") -> str:
    """Scatter of (rate_c, rate_b); self-contained, no external renderer."""
    w, h, m = 420, 420, 50
    pts = frontier.as_array()
    top_b = max(1.0, float(pts[:, 0].max()) if len(pts) else 1.0)
    top_c = max(1.0, float(pts[:, 1].max()) if len(pts) else 1.0)

    def sx(c):
        return m + (w - 2 * m) * c / top_c

    def sy(b):
        return h - m - (h - 2 * m) * b / top_b

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{m}" y1="{h - m}" x2="{w - m}" y2="{h - m}" stroke="black"/>',
        f'<line x1="{m}" y1="{h - m}" x2="{m}" y2="{m}" stroke="black"/>',
        f'<text x="{w / 2}" y="{h - 12}" text-anchor="middle" font-size="13">rate_c (bits)</text>',
        f'<text x="14" y="{h / 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 14 {h / 2})">rate_b (bits)</text>',
        f'<text x="{m}" y="{h - m + 16}" font-size="11">0</text>',
        f'<text x="{w - m}" y="{h - m + 16}" font-size="11" text-anchor="end">{top_c:.3g}</text>',
        f'<text x="{m - 6}" y="{m + 4}" font-size="11" text-anchor="end">{top_b:.3g}</text>',
    ]
    if title:
        parts.append(f'<text x="{w / 2}" y="24" text-anchor="middle" font-size="14">{title}</text>')
    for b, c in pts:
        parts.append(f'<circle cx="{sx(c):.2f}" cy="{sy(b):.2f}" r="3" fill="steelblue"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_frontier_svg(frontier, path, title: str = ""):
    _write_text(path, frontier_svg(frontier, title))

