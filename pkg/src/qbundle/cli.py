"""Command-line driver.

Usage::

    qbundle check torus --max-len 4 --format json --output torus.json
    qbundle nf torus "v*u"
    qbundle d torus "u*v"
    qbundle wedge group_z "q^-1*g*d(g)" "d(g)"
    qbundle coact qsu2_hopf "e0"
    qbundle piver torus "du"
    qbundle base torus --degree 1
    qbundle export torus --output torus.qb

The target is a catalog name or the path of a presentation file.  Default
truncation bounds come from QBUNDLE_MAX_LEN and QBUNDLE_MAX_DEG when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .catalog import EXAMPLES, ExampleBundle, UnknownExample, load_example, verify_example
from .fileformat import dump, dumps, load
from .parser import parse_element

VERBS = ("check", "report", "nf", "coact", "d", "wedge", "piver", "base", "export")
DEFAULT_MAX_LEN = 4


class UsageError(ValueError):
    pass


@dataclass
class Command:
    verb: str
    target: str
    args: list[str] = field(default_factory=list)
    max_len: int = DEFAULT_MAX_LEN
    max_deg: Optional[int] = None
    format: str = "text"
    output: Optional[str] = None
    degree: int = 1

    def validate(self) -> "Command":
        if self.verb not in VERBS:
            raise UsageError(f"unknown verb {self.verb!r}")
        if self.max_len < 1:
            raise UsageError("--max-len must be at least 1")
        if self.max_deg is not None and self.max_deg < 0:
            raise UsageError("--max-deg must be nonnegative")
        if self.degree < 0:
            raise UsageError("--degree must be nonnegative")
        if self.format not in ("text", "json"):
            raise UsageError("--format must be text or json")
        need = {"nf": 1, "coact": 1, "d": 1, "piver": 1, "wedge": 2}.get(self.verb, 0)
        if len(self.args) != need:
            raise UsageError(f"{self.verb} takes {need} expression argument(s), got {len(self.args)}")
        return self


def _env_int(name: str) -> Optional[int]:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def load_target(target: str) -> ExampleBundle:
    """A catalog example by name, otherwise a presentation file."""
    if target in EXAMPLES:
        return load_example(target)
    path = Path(target)
    if path.exists():
        return load(path)
    raise UnknownExample(f"{target!r} is neither a catalog example ({', '.join(EXAMPLES)}) nor a file")


def _single(cmd: Command, ex: ExampleBundle) -> str:
    calc = ex.calc_A
    if cmd.max_deg is not None and cmd.max_deg < calc.max_degree:
        calc = calc.restricted(cmd.max_deg)
    values = [parse_element(a, calc=calc) for a in cmd.args]
    if cmd.verb == "nf":
        return calc.nf(values[0]).render()
    if cmd.verb == "d":
        return calc.d(values[0]).render()
    if cmd.verb == "wedge":
        return calc.wedge(values[0], values[1]).render()
    if cmd.verb == "coact":
        return ex.bundle.coaction_wedge(values[0]).render()
    if cmd.verb == "piver":
        return ex.bundle.pi_ver(values[0]).render()
    raise UsageError(f"unknown verb {cmd.verb!r}")


def run(cmd: Command, out=None) -> int:
    """Execute a validated command; returns the exit status."""
    out = out or sys.stdout
    cmd.validate()
    ex = load_target(cmd.target)
    if cmd.verb in ("check", "report"):
        rep = verify_example(ex, cmd.max_len, cmd.max_deg)
        text = rep.to_json() if cmd.format == "json" else rep.to_text()
        _emit(text, cmd.output, out)
        if cmd.verb == "check" and not rep.ok:
            first = rep.failures[0]
            print(f"first failure: {first.check_id}" + (f" ({first.witness})" if first.witness else ""),
                  file=sys.stderr)
            return 1
        return 0
    if cmd.verb == "export":
        if cmd.output:
            dump(ex, cmd.output)
        else:
            out.write(dumps(ex))
        return 0
    if cmd.verb == "base":
        forms = ex.bundle.base_forms(cmd.max_len, cmd.degree)
        rendered = [f.render() for f in forms]
        text = json.dumps(rendered, indent=2) if cmd.format == "json" else "\n".join(rendered) or "(none)"
        _emit(text, cmd.output, out)
        return 0
    result = _single(cmd, ex)
    text = json.dumps({"input": cmd.args, "result": result}) if cmd.format == "json" else result
    _emit(text, cmd.output, out)
    return 0


def _emit(text: str, path: Optional[str], out) -> None:
    if path:
        try:
            Path(path).write_text(text + "\n")
        except OSError as e:
            raise OSError(f"cannot write {path}: {e.strerror}") from None
    else:
        out.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbundle", description="Check quantum principal bundles and their calculi.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("target", help="catalog example name or presentation file")
    p.add_argument("args", nargs="*", help="expressions for nf, coact, d, wedge and piver")
    p.add_argument("--max-len", type=int, default=None, help="word-length bound (default 4)")
    p.add_argument("--max-deg", type=int, default=None, help="form-degree bound")
    p.add_argument("--degree", type=int, default=1, help="form degree for the base verb")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", "-o", default=None, help="write the result to this path")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        max_len = ns.max_len if ns.max_len is not None else (_env_int("QBUNDLE_MAX_LEN") or DEFAULT_MAX_LEN)
        max_deg = ns.max_deg if ns.max_deg is not None else _env_int("QBUNDLE_MAX_DEG")
        cmd = Command(ns.verb, ns.target, list(ns.args), max_len, max_deg, ns.format, ns.output, ns.degree)
        return run(cmd)
    except (ValueError, KeyError, SyntaxError, ArithmeticError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"qbundle: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
