"""Run reports with text, JSON and CSV renderings."""

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


def _encode(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, np.ndarray):
        return [_encode(x) for x in v.tolist()] if v.ndim else _encode(v.item())
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _encode(x) for k, x in v.items()}
    raise TypeError(f"cannot serialise {type(v).__name__}")


def _decode(v):
    if isinstance(v, dict):
        if set(v) == {"re", "im"}:
            return complex(v["re"], v["im"])
        return {k: _decode(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_decode(x) for x in v]
    return v


@dataclass
class Result:
    name: str
    value: object
    tolerance: float
    expected: object = None
    rel_error: Optional[float] = None
    passed: bool = False

    @classmethod
    def residual(cls, name, value, tolerance):
        """A check that passes when ``|value| <= tolerance``."""
        return cls(name, float(value), tolerance, passed=bool(abs(value) <= tolerance))

    @classmethod
    def compare(cls, name, value, expected, tolerance, absolute=False):
        """Relative comparison (absolute when ``expected == 0`` or ``absolute``)."""
        err = float(np.max(np.abs(np.asarray(value) - np.asarray(expected))))
        scale = float(np.max(np.abs(np.asarray(expected))))
        if not absolute and scale > 0:
            err /= scale
        return cls(name, value, tolerance, expected, err, bool(err <= tolerance))

    def to_dict(self):
        return {"name": self.name, "value": _encode(self.value), "expected": _encode(self.expected),
                "rel_error": self.rel_error, "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class RunReport:
    command: str
    parameters: dict = field(default_factory=dict)
    results: list = field(default_factory=list)
    convergence: list = field(default_factory=list)
    wall_time_seconds: Optional[float] = None

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def add(self, result):
        self.results.append(result)
        return result

    def to_dict(self):
        return {
            "command": self.command,
            "parameters": _encode(self.parameters),
            "results": [r.to_dict() for r in self.results],
            "convergence": [{"N": int(n), "value": _encode(v)} for n, v in self.convergence],
            "wall_time_seconds": self.wall_time_seconds,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        results = [Result(r["name"], _decode(r["value"]), r["tolerance"], _decode(r["expected"]),
                          r["rel_error"], r["pass"]) for r in d["results"]]
        conv = [(c["N"], _decode(c["value"])) for c in d["convergence"]]
        return cls(d["command"], _decode(d["parameters"]), results, conv, d["wall_time_seconds"])

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "value_re", "value_im", "expected_re", "expected_im", "rel_error", "tolerance", "pass"])
        for r in self.results:
            v, e = _scalar(r.value), _scalar(r.expected)
            w.writerow([r.name, *_reim(v), *_reim(e), "" if r.rel_error is None else repr(r.rel_error),
                        repr(r.tolerance), int(r.passed)])
        return buf.getvalue()

    def to_text(self):
        lines = [f"{self.command}: " + ", ".join(f"{k}={v}" for k, v in self.parameters.items())]
        width = max([len(r.name) for r in self.results] + [4])
        for r in self.results:
            val = _fmt(r.value)
            extra = "" if r.expected is None else f"  expected {_fmt(r.expected)}  err {r.rel_error:.2e}"
            lines.append(f"  [{'PASS' if r.passed else 'FAIL'}] {r.name:<{width}}  {val}{extra}  (tol {r.tolerance:g})")
        if self.convergence:
            lines.append("  convergence:")
            for n, v in self.convergence:
                lines.append(f"    N={n:<4d} {_fmt(v)}")
        lines.append(f"  {sum(r.passed for r in self.results)}/{len(self.results)} checks passed")
        return "\n".join(lines)


def _scalar(v):
    """Largest-magnitude entry for array values, so CSV stays one row per result."""
    if v is None:
        return None
    a = np.asarray(v)
    if a.ndim == 0:
        return a.item()
    return a.flat[int(np.argmax(np.abs(a)))]


def _reim(v):
    if v is None:
        return "", ""
    c = complex(v)
    return repr(c.real), repr(c.imag)


def _fmt(v):
    if isinstance(v, bool):
        return str(v)
    a = np.asarray(v)
    if a.ndim == 0:
        c = complex(a.item())
        return f"{c.real:.10g}" if c.imag == 0 else f"{c.real:.10g}{c.imag:+.3g}j"
    return np.array2string(a, precision=6, suppress_small=True, max_line_width=120).replace("\n", "\n      ")
