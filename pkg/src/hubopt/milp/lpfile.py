"""LP-format export (and a reader for the same subset).

Written subset: ``Minimize`` objective, ``Subject To`` rows, ``Bounds``,
``Binaries``, ``End``.  Coefficients are printed with ``repr`` so a
write/read round trip reproduces every float exactly.  Names are sanitised
to the LP character set; a constant objective term is carried on a
``\\ constant:`` comment line, which other LP readers ignore.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

from .model import EQ, GE, LE, MilpModel

_BAD = re.compile(r"[^A-Za-z0-9_.(){}!\"#$%&/,;?@`'|~]")
_LINE_TERMS = 6


def _sanitize(name: str) -> str:
    s = name.replace("[", "(").replace("]", ")")
    s = _BAD.sub("_", s)
    if not s or s[0].isdigit() or s[0] in ".eE":
        s = "_" + s
    return s


def _num(x: float) -> str:
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return repr(float(x))


def _unique_names(raw: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for r in raw:
        s = _sanitize(r)
        if s in seen:
            seen[s] += 1
            s = f"{s}_{seen[s]}"
        else:
            seen[s] = 0
        out.append(s)
    return out


def _expr(terms: dict[int, float], names: list[str]) -> list[str]:
    parts = []
    for j in sorted(terms):
        a = terms[j]
        sign = "-" if a < 0 else "+"
        parts.append(f"{sign} {_num(abs(a))} {names[j]}")
    if not parts:
        parts = [f"+ 0.0 {names[0]}"] if names else ["0"]
    return parts


def _wrap(head: str, parts: list[str]) -> list[str]:
    lines = []
    for k in range(0, len(parts), _LINE_TERMS):
        chunk = " ".join(parts[k:k + _LINE_TERMS])
        lines.append((head if k == 0 else "   ") + chunk)
    return lines


def to_lp_string(model: MilpModel) -> str:
    names = _unique_names([v.name for v in model.variables])
    cnames = _unique_names([c.name for c in model.constraints])
    out = [f"\\ Problem: {model.name}"]
    if model.objective_constant:
        out.append(f"\\ constant: {_num(model.objective_constant)}")
    out.append("Minimize")
    out += _wrap(" obj: ", _expr(model.objective, names))
    out.append("Subject To")
    op = {LE: "<=", GE: ">=", EQ: "="}
    for con, cname in zip(model.constraints, cnames):
        body = _wrap(f" {cname}: ", _expr(con.terms, names))
        body[-1] += f" {op[con.sense]} {_num(con.rhs)}"
        out += body
    out.append("Bounds")
    for v, name in zip(model.variables, names):
        if v.lower == -math.inf and v.upper == math.inf:
            out.append(f" {name} free")
        elif v.lower == v.upper:
            out.append(f" {name} = {_num(v.lower)}")
        else:
            out.append(f" {_num(v.lower)} <= {name} <= {_num(v.upper)}")
    bins = [name for v, name in zip(model.variables, names) if v.is_binary]
    if bins:
        out.append("Binaries")
        out += _wrap(" ", bins)
    out.append("End")
    return "\n".join(out) + "\n"


def write_lp(model: MilpModel, path) -> Path:
    path = Path(path)
    path.write_text(to_lp_string(model), encoding="utf-8")
    return path


_TERM = re.compile(r"([+-])\s*(\S+)\s+(\S+)")


def _parse_num(tok: str) -> float:
    t = tok.lower()
    if t in ("+inf", "inf", "+infinity", "infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    return float(tok)


def read_lp(text: str) -> MilpModel:
    """Parse text produced by :func:`to_lp_string` back into a model."""
    lines = text.splitlines()
    model = MilpModel()
    const = 0.0
    for ln in lines:
        if ln.startswith("\\ Problem:"):
            model.name = ln.split(":", 1)[1].strip()
        elif ln.startswith("\\ constant:"):
            const = float(ln.split(":", 1)[1])
    section = None
    stmts: dict[str, list[str]] = {"obj": [], "st": [], "bounds": [], "bin": []}
    for ln in lines:
        s = ln.strip()
        if not s or s.startswith("\\"):
            continue
        low = s.lower()
        if low == "minimize":
            section = "obj"
            continue
        if low == "subject to":
            section = "st"
            continue
        if low == "bounds":
            section = "bounds"
            continue
        if low == "binaries":
            section = "bin"
            continue
        if low == "end":
            break
        if section in ("obj", "st") and not ln.startswith("   "):
            stmts[section].append(s)
        elif section in ("obj", "st"):
            stmts[section][-1] += " " + s
        else:
            stmts[section].append(s)

    # variables appear in Bounds in declaration order
    index: dict[str, int] = {}
    bounds = []
    for s in stmts["bounds"]:
        if s.endswith(" free"):
            name = s[:-5].strip()
            lo, hi = -math.inf, math.inf
        elif " = " in s and "<=" not in s:
            name, val = s.split(" = ")
            name = name.strip()
            lo = hi = _parse_num(val.strip())
        else:
            lo_s, name, hi_s = [p.strip() for p in s.split("<=")]
            lo, hi = _parse_num(lo_s), _parse_num(hi_s)
        index[name] = len(bounds)
        bounds.append((name, lo, hi))
    binaries = set()
    for s in stmts["bin"]:
        binaries.update(s.split())
    for name, lo, hi in bounds:
        vid = model.add_var(name, lo, hi, binary=False)
        if name in binaries:
            model.variables[vid].integrality = "binary"

    def parse_terms(body: str) -> dict[int, float]:
        terms = {}
        for sign, coef, name in _TERM.findall(body):
            a = float(coef) * (-1.0 if sign == "-" else 1.0)
            terms[index[name]] = terms.get(index[name], 0.0) + a
        return terms

    obj = stmts["obj"][0].split(":", 1)[1]
    model.objective = {j: a for j, a in parse_terms(obj).items() if a != 0.0}
    model.objective_constant = const
    for s in stmts["st"]:
        cname, body = s.split(":", 1)
        m = re.search(r"(<=|>=|=)\s*(\S+)\s*$", body)
        sense = {"<=": LE, ">=": GE, "=": EQ}[m.group(1)]
        rhs = _parse_num(m.group(2))
        model.add_constraint(parse_terms(body[:m.start()]), sense, rhs, name=cname.strip())
    return model
