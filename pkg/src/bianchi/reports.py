"""Rendering of pipeline reports and eigenvalue tables.

Dimension tables are laid out with one row per wild (p-part) level factor
and one column per nebentypus conductor; a cell holds the total new
dimension summed over all even characters of that conductor (orbit size
times the dimension of one representative).  Eigenvalue tables print one
row per eigensystem with primes ordered by (norm, generator); a dash marks
primes dividing the level, where the good Hecke operator is undefined.
"""

from __future__ import annotations

import json

from .fields import IQInt, Ideal, format_iq, primes_above
from . import hecke


def report_json(report) -> str:
    return json.dumps(report.to_dict(), indent=1)


# ---------------------------------------------------------------------------
# dimension tables
# ---------------------------------------------------------------------------

def _wild_label(M: Ideal, tame: Ideal) -> str:
    if not tame.divides(M):
        return format_iq(M.gen)
    wild = M.quotient(tame)
    if wild.is_one():
        return "G0(N)"
    return f"G0(N) n G1({format_iq(wild.gen)})"


def dimension_table(cells, tame: Ideal) -> str:
    """New-dimension matrix over the full-tame rows of one depth scan."""
    rows: dict = {}
    conds: list[Ideal] = []
    for c in cells:
        if c.level.gcd(tame) != tame:
            continue
        if c.conductor not in conds:
            conds.append(c.conductor)
        cell = rows.setdefault(c.level, {})
        prev = cell.get(c.conductor)
        if c.new_dim is None:
            cell[c.conductor] = prev if prev is not None else None
        else:
            add = c.orbit_size * c.new_dim
            cell[c.conductor] = add if prev is None else prev + add
    conds.sort(key=lambda f: (f.norm(), f.gen.key()))
    levels = sorted(rows, key=lambda m: (m.norm(), m.gen.key()))
    head = "| level | " + " | ".join(
        "cond " + format_iq(f.gen) for f in conds) + " |"
    sep = "|---" * (len(conds) + 1) + "|"
    lines = [head, sep]
    for M in levels:
        vals = []
        for f in conds:
            v = rows[M].get(f)
            vals.append("." if v is None else str(v))
        lines.append(f"| {_wild_label(M, tame)} | " + " | ".join(vals) + " |")
    return "\n".join(lines) + "\n"


def cells_csv(cells) -> str:
    lines = ["level,norm,conductor,char,order,orbit_size,eligible,new_dim,"
             "status,method,notes"]
    for c in cells:
        d = c.to_dict()
        lines.append(",".join(str(d[k]) for k in (
            "level", "level_norm", "conductor", "char", "char_order",
            "orbit_size", "eligible", "new_dim", "status", "method",
            "notes")))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# eigenvalue tables
# ---------------------------------------------------------------------------

def _render_value(value: int, rational: int | None, P: int,
                  zeta3: int) -> str:
    if rational is not None:
        return str(rational)
    lift = hecke.small_cyclotomic_lift(value, P, zeta3, 40)
    if lift is None:
        return "?"
    x, y = lift
    if y == 0:
        return str(x)
    ys = "z3" if y == 1 else ("-z3" if y == -1 else f"{y}*z3")
    if x == 0:
        return ys
    return f"{x}{'+' if y > 0 else ''}{ys}"


def eigen_table(level: Ideal, eps, primes, u_primes=(),
                tower=None) -> tuple[str, dict]:
    """Markdown eigenvalue table plus a JSON-ready dict for one space."""
    d = level.d
    if tower is None:
        tower = hecke.default_tower(d)
    good = tuple(l for l in primes if Ideal(l).coprime_to(level))
    data = hecke.eigen_data(level, eps, good, tower=tower,
                            u_primes=tuple(u_primes))
    z3 = tower.zeta(3)
    cols = list(primes)
    head = ("| kind | J | mult | "
            + " | ".join(format_iq(l) for l in cols)
            + (" | " + " | ".join("U_" + format_iq(u) for u in u_primes)
               if u_primes else "") + " |")
    sep = "|---" * (3 + len(cols) + len(u_primes)) + "|"
    lines = [head, sep]
    rows = []
    for s in data.systems:
        vals = []
        for l in cols:
            if not Ideal(l).coprime_to(level):
                vals.append("-")
                continue
            i = good.index(l)
            r = s.rational[i] if s.rational is not None else None
            vals.append(_render_value(s.values[i], r, data.p, z3))
        uvals = [str(u) for u in s.u_values]
        lines.append(f"| {s.kind} | {'+' if s.j_sign > 0 else '-'} | "
                     f"{s.mult} | " + " | ".join(vals)
                     + ((" | " + " | ".join(uvals)) if u_primes else "")
                     + " |")
        rows.append({"kind": s.kind, "j_sign": s.j_sign, "mult": s.mult,
                     "values": vals, "u_values": list(s.u_values)})
    payload = {"level": format_iq(level.gen), "char": eps.encode(),
               "primes": [format_iq(l) for l in cols],
               "u_primes": [format_iq(u) for u in u_primes],
               "systems": rows}
    return "\n".join(lines) + "\n", payload


# ---------------------------------------------------------------------------
# full pipeline report
# ---------------------------------------------------------------------------

def report_markdown(report) -> str:
    spec = report.spec
    out = [f"# Finiteness report: tame level {format_iq(spec.tame.gen)} "
           f"over Q(sqrt {spec.d}), p = {spec.p}", ""]
    out.append(f"* seed level: {format_iq(spec.seed_level.gen)}")
    out.append(f"* verdict: **{report.verdict}**")
    out.append(f"* evidence depth: {report.evidence_depth}")
    out.append(f"* elapsed: {report.elapsed:.1f}s")
    if report.notes:
        out.append(f"* notes: {report.notes}")
    out.append("")
    out.append("## Weight probe")
    out.append("")
    out.append("| k | cuspidal dim |")
    out.append("|---|---|")
    for k, v in report.probe.dims.items():
        out.append(f"| {k} | {v} |")
    out.append("")
    if report.seed is not None:
        out.append("## Seed newform")
        out.append("")
        sd = report.seed.to_dict()
        out.append(f"* level {sd['level']}, J-sign {sd['j_sign']}, "
                   f"{sd['ordinarity']}")
        out.append("* eigenvalues: " + ", ".join(
            f"a({l}) = {a}" for l, a in sd["eigenvalues"].items()))
        if sd["u_eigenvalues"]:
            out.append("* U-eigenvalues: " + ", ".join(
                f"U({l}) = {a}" for l, a in sd["u_eigenvalues"].items()))
        out.append("")
    for scan in report.scans:
        out.append(f"## Depth {scan.depth} "
                   f"({'complete' if scan.complete else 'incomplete'}, "
                   f"{'clean' if scan.clean else 'survivors'})")
        out.append("")
        out.append("New dimensions (sum over even characters per conductor):")
        out.append("")
        out.append(dimension_table(scan.cells, spec.tame))
        out.append("Cells:")
        out.append("")
        out.append("| level | conductor | order | size | new | eligible | "
                   "status | method |")
        out.append("|---" * 8 + "|")
        for c in scan.cells:
            d = c.to_dict()
            out.append("| " + " | ".join(str(d[k]) for k in (
                "level", "conductor", "char_order", "orbit_size", "new_dim",
                "eligible", "status", "method")) + " |")
        out.append("")
        witnessed = [c for c in scan.cells if c.witnesses or c.systems]
        if witnessed:
            out.append("Elimination witnesses:")
            out.append("")
            for c in witnessed:
                d = c.to_dict()
                out.append(f"* {d['level']} / cond {d['conductor']} "
                           f"({d['status']}, {d['method']})")
                for w in d["witnesses"]:
                    out.append(f"  * theta -> {w['theta_image']}: kernel "
                               f"dims {w['kernel_dims']} "
                               f"(quotient {w['quotient_dim']}), congruence "
                               f"{'possible' if w['possible'] else 'impossible'}")
                for s in d["systems"]:
                    out.append(f"  * system {s}")
            out.append("")
    return "\n".join(out) + "\n"
