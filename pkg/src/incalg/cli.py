"""Command-line front end: parse poset documents, run analyses, and emit
deterministic `dotted.key = value` reports.

Exit codes: 0 success, 1 check failure, 2 input error, 3 bound exceeded.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field as dc_field

from .algebra import IncidenceFunction
from .classify import (class_count_formula, classify_involutions,
                       general_equivalent, run_battery)
from .errors import (BoundExceededError, InfiniteClassCountError, InputError,
                     MultiplicativeGateError)
from .fields import bind_literal, field_from_spec, parse_literal
from .involutions import Involution, base_involution
from .morphisms import (ENUM_BOUND, MultiplicativeElement, fractionality_gate,
                        is_fractional, mult_is_inner)
from .posets import (ANTI, AUTO, PosetMap, all_posets, automorphisms,
                     build_poset, component_action, decompose_involution,
                     involutions)

_LABEL = re.compile(r"^[A-Za-z0-9_]+$")
_ENTRY = re.compile(r"^\((?P<x>[A-Za-z0-9_]+),(?P<y>[A-Za-z0-9_]+)\)="
                    r"(?P<value>-?[0-9]+(?:/[0-9]+)?)$")
_ARROW = re.compile(r"^(?P<x>[A-Za-z0-9_]+)->(?P<y>[A-Za-z0-9_]+)$")

_KINDS = {
    "automorphism": AUTO,
    "anti-automorphism": ANTI,
    "involution": ANTI,
}


@dataclass
class Block:
    """Raw scalar assignments of a named block, bound to a field later."""

    name: str
    line: int
    entries: dict  # (x, y) -> Fraction


@dataclass
class Document:
    poset: object
    maps: dict = dc_field(default_factory=dict)
    blocks: dict = dc_field(default_factory=dict)


def parse_document(text):
    elements = None
    covers = []
    map_lines = []
    blocks = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise InputError(f"expected 'keyword: ...', got {line!r}", lineno)
        head = head.strip()
        rest = rest.strip()
        if head == "elements":
            if elements is not None:
                raise InputError("duplicate elements line", lineno)
            elements = rest.split()
            for lbl in elements:
                if not _LABEL.match(lbl):
                    raise InputError(f"bad label {lbl!r}", lineno)
            if len(set(elements)) != len(elements):
                raise InputError("duplicate label in elements", lineno)
        elif head == "cover":
            parts = rest.split()
            if len(parts) != 2:
                raise InputError(f"cover wants two labels, got {rest!r}", lineno)
            covers.append((lineno, parts[0], parts[1]))
        elif head.startswith("map "):
            map_lines.append((lineno, head, rest))
        elif head.startswith("unit "):
            name = head[len("unit "):].strip()
            if not _LABEL.match(name):
                raise InputError(f"bad unit name {name!r}", lineno)
            if name in blocks:
                raise InputError(f"duplicate unit block {name!r}", lineno)
            entries = {}
            for token in rest.split():
                m = _ENTRY.match(token)
                if not m:
                    raise InputError(f"bad unit entry {token!r}", lineno)
                pair = (m.group("x"), m.group("y"))
                if pair in entries:
                    raise InputError(f"duplicate entry for {pair!r}", lineno)
                entries[pair] = parse_literal(m.group("value"))
            blocks[name] = Block(name, lineno, entries)
        else:
            raise InputError(f"unknown keyword {head!r}", lineno)

    if elements is None:
        raise InputError("document has no elements line", 1)
    try:
        poset = build_poset(
            elements, [(x, y) for _, x, y in covers])
    except ValueError as exc:
        raise InputError(str(exc), covers[0][0] if covers else 1) from exc

    doc = Document(poset)
    for lineno, head, rest in map_lines:
        match = re.match(r"^map\s+(?P<name>[A-Za-z0-9_]+)"
                         r"\s+kind=(?P<kind>[a-z-]+)$", head)
        if not match:
            raise InputError(f"bad map header {head!r}", lineno)
        name = match.group("name")
        kind_word = match.group("kind")
        if kind_word not in _KINDS:
            raise InputError(f"unknown map kind {kind_word!r}", lineno)
        if name in doc.maps:
            raise InputError(f"duplicate map {name!r}", lineno)
        mapping = {}
        for token in rest.split():
            m = _ARROW.match(token)
            if not m:
                raise InputError(f"bad map entry {token!r}", lineno)
            x, y = m.group("x"), m.group("y")
            if x in mapping:
                raise InputError(f"duplicate source {x!r}", lineno)
            mapping[x] = y
        try:
            pmap = PosetMap(poset, mapping, _KINDS[kind_word])
        except ValueError as exc:
            raise InputError(str(exc), lineno) from exc
        if kind_word == "involution" and not pmap.is_involution():
            raise InputError(f"map {name!r} is not an involution", lineno)
        doc.maps[name] = pmap

    for block in blocks.values():
        for pair in block.entries:
            for lbl in pair:
                if lbl not in poset.down:
                    raise InputError(f"unknown label {lbl!r}", block.line)
            if pair not in poset.le:
                raise InputError(
                    f"pair {pair!r} is not in the order relation", block.line)
        doc.blocks[block.name] = block
    return doc


def bind_unit(doc, name, fld):
    """Materialize a block as a unit: full nonzero diagonal, zero default."""
    block = _get_block(doc, name)
    poset = doc.poset
    mapping = {}
    for pair, lit in block.entries.items():
        mapping[pair] = bind_literal(fld, lit)
    for x in poset.elements:
        value = mapping.get((x, x))
        if value is None:
            raise InputError(
                f"unit {name!r} is missing the diagonal entry at {x!r}",
                block.line)
        if value.is_zero:
            raise InputError(
                f"unit {name!r} has a zero diagonal entry at {x!r}", block.line)
    return IncidenceFunction.from_entries(poset, fld, mapping)


def bind_sigma(doc, name, fld):
    """Materialize a block as a multiplicative element: every strict
    comparable pair present and nonzero, diagonal omitted or 1."""
    block = _get_block(doc, name)
    poset = doc.poset
    mapping = {}
    for pair, lit in block.entries.items():
        value = bind_literal(fld, lit)
        if pair[0] == pair[1]:
            if not value.is_one:
                raise InputError(
                    f"block {name!r}: diagonal entry at {pair[0]!r} must be 1",
                    block.line)
            continue
        if value.is_zero:
            raise InputError(
                f"block {name!r}: zero value at {pair!r}", block.line)
        mapping[pair] = value
    for pair in poset.strict_pairs:
        if pair not in mapping:
            raise InputError(
                f"block {name!r} is missing the entry at {pair!r}", block.line)
    try:
        return MultiplicativeElement.from_entries(poset, fld, mapping)
    except ValueError as exc:
        raise InputError(f"block {name!r}: {exc}", block.line) from exc


def _get_block(doc, name):
    block = doc.blocks.get(name)
    if block is None:
        raise InputError(f"no unit block named {name!r}")
    return block


def _pick_map(doc, name):
    if name is not None:
        got = doc.maps.get(name)
        if got is None:
            raise InputError(f"no map named {name!r}")
        return got
    if len(doc.maps) == 1:
        return next(iter(doc.maps.values()))
    raise InputError("document has several maps; pass --map NAME")


def _require_involution_map(doc, name):
    pmap = _pick_map(doc, name)
    if not pmap.is_involution():
        raise InputError(f"map is not an order involution")
    return pmap


def _descriptor(doc, spec, fld):
    """Parse MAP or MAP:UNIT into an involution descriptor."""
    map_name, _, unit_name = spec.partition(":")
    pmap = _require_involution_map(doc, map_name)
    if unit_name:
        unit = bind_unit(doc, unit_name, fld)
        try:
            return Involution(pmap, unit)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return base_involution(pmap, fld)


def _fmt_scalar(s):
    return str(s.value)


def _fmt_set(labels):
    return " ".join(sorted(labels))


def _fmt_map(pmap):
    return " ".join(f"{k}->{v}" for k, v in sorted(pmap.mapping.items()))


def _fmt_unit(u):
    return " ".join(
        f"({x},{y})={_fmt_scalar(u.entries[(x, y)])}" for x, y in u.poset.pairs)


# ---------------------------------------------------------------------------
# commands

def cmd_components(doc, args):
    poset = doc.poset
    lines = [
        f"elements = {' '.join(poset.elements)}",
        f"covers = {' '.join(f'{x}<{y}' for x, y in sorted(poset.covers))}",
        f"relation.size = {len(poset.le)}",
        f"all.comparable = {_fmt_set(poset.all_comparable())}",
        f"components.count = {len(poset.components)}",
    ]
    for j, comp in enumerate(poset.components):
        lines.append(f"component.{j} = {' '.join(comp)}")
    return lines, 0


def cmd_autos(doc, args):
    maps = automorphisms(doc.poset, args.max_size)
    lines = [f"autos.count = {len(maps)}"]
    for i, m in enumerate(maps):
        lines.append(f"auto.{i} = {_fmt_map(m)}")
    return lines, 0


def cmd_involutions(doc, args):
    maps = involutions(doc.poset, args.max_size)
    lines = [f"involutions.count = {len(maps)}"]
    for i, m in enumerate(maps):
        lines.append(f"involution.{i} = {_fmt_map(m)}")
    return lines, 0


def cmd_decompose(doc, args):
    lam = _require_involution_map(doc, args.map)
    poset = doc.poset
    dec = decompose_involution(poset, lam)
    action = component_action(poset, lam)
    lines = [
        f"map = {_fmt_map(lam)}",
        f"lower = {_fmt_set(dec.lower)}",
        f"upper = {_fmt_set(dec.upper)}",
        f"fixed = {_fmt_set(dec.fixed)}",
        f"components.count = {len(poset.components)}",
        "component.action = " + " ".join(
            f"{j}->{i}" for j, i in enumerate(action.perm)),
        f"fixed.components = {' '.join(str(j) for j in action.fixed)}",
        "fixed.components.pointfree = "
        + " ".join(str(j) for j in action.fixed_point_free),
    ]
    for j in action.fixed:
        lower, upper, fixed = action.psets[j]
        lines.append(f"pset.{j}.lower = {' '.join(lower)}")
        lines.append(f"pset.{j}.upper = {' '.join(upper)}")
        lines.append(f"pset.{j}.fixed = {' '.join(fixed)}")
    return lines, 0


def cmd_count(doc, args):
    fld = field_from_spec(args.field)
    lam = _require_involution_map(doc, args.map)
    gate = fractionality_gate(doc.poset, fld, args.bound)
    lines = [f"map = {_fmt_map(lam)}", f"field = {fld!r}"]
    lines.append(f"gate.mult_subset_inn = {str(gate.holds).lower()}")
    try:
        formula = class_count_formula(doc.poset, lam, fld)
        lines.append(f"classes.formula = {formula}")
    except InfiniteClassCountError:
        formula = None
        lines.append("classes.formula = infinite")
    report = classify_involutions(lam, fld, args.bound)
    lines.append(f"classes.bruteforce = {report.count}")
    agree = formula == report.count
    lines.append(f"agreement = {str(agree).lower()}")
    code = 0
    if gate.holds and formula is not None and not agree:
        code = 1
    return lines, code


def cmd_classify(doc, args):
    fld = field_from_spec(args.field)
    lam = _require_involution_map(doc, args.map)
    report = classify_involutions(lam, fld, args.bound)
    lines = [
        f"map = {_fmt_map(lam)}",
        f"field = {fld!r}",
        f"classes.count = {report.count}",
        f"involutions.count = {sum(report.sizes)}",
    ]
    for i, (rep, size) in enumerate(zip(report.representatives, report.sizes)):
        lines.append(f"class.{i}.size = {size}")
        lines.append(f"class.{i}.representative = {_fmt_unit(rep.unit)}")
    return lines, 0


def cmd_general_equiv(doc, args):
    fld = field_from_spec(args.field)
    rho = _descriptor(doc, args.left, fld)
    eta = _descriptor(doc, args.right, fld)
    lines = [f"left = {args.left}", f"right = {args.right}",
             f"field = {fld!r}"]
    ok, witness = general_equivalent(rho, eta, args.bound)
    lines.append(f"equivalent = {str(ok).lower()}")
    if ok:
        lines.append(f"witness.alpha = {_fmt_map(witness.alpha)}")
        lines.append(f"witness.t = {_fmt_unit(witness.t)}")
        lines.append(f"witness.c = {_fmt_unit(witness.c)}")
    return lines, 0


def cmd_fractional_check(doc, args):
    fld = field_from_spec(args.field)
    if args.sigma is None and len(doc.blocks) == 1:
        args.sigma = next(iter(doc.blocks))
    if args.sigma is None:
        raise InputError("pass --sigma NAME to pick a block")
    sigma = bind_sigma(doc, args.sigma, fld)
    lines = [f"sigma = {args.sigma}", f"field = {fld!r}",
             "multiplicative = true"]
    ok, witness = is_fractional(sigma)
    lines.append(f"fractional = {str(ok).lower()}")
    if ok:
        lines.append("witness.h = " + " ".join(
            f"{x}={_fmt_scalar(witness[x])}" for x in sorted(witness)))
        inner, unit = mult_is_inner(sigma)
        lines.append(f"inner = {str(inner).lower()}")
        lines.append(f"witness.unit = {_fmt_unit(unit)}")
    else:
        lines.append(f"cycle = {' '.join(witness)}")
        lines.append("inner = false")
    gate = fractionality_gate(doc.poset, fld, args.bound)
    lines.append(f"mult_subset_inn = {str(gate.holds).lower()}")
    return lines, 0


def cmd_verify(doc, args):
    fld = field_from_spec(args.field)
    posets = all_posets(args.max_size)
    merged = {}
    failures = []
    for poset in posets:
        report = run_battery(poset, fld, seed=args.seed)
        for check in report.checks:
            counts = merged.setdefault(check.name, {})
            counts[check.status] = counts.get(check.status, 0) + 1
            if check.status == "fail":
                failures.append((poset, check))
    lines = [
        f"field = {fld!r}",
        f"max.size = {args.max_size}",
        f"posets.count = {len(posets)}",
    ]
    for name in sorted(merged):
        counts = merged[name]
        if set(counts) == {"pass"}:
            summary = "pass"
        else:
            summary = " ".join(
                f"{status}:{counts[status]}"
                for status in ("pass", "refused", "skipped", "fail")
                if status in counts)
        lines.append(f"check.{name} = {summary}")
    ok = not failures
    lines.append(f"battery = {'pass' if ok else 'fail'}")
    for poset, check in failures:
        lines.append(f"counterexample.{check.name} = {poset!r}: {check.details}")
    return lines, 0 if ok else 1


# ---------------------------------------------------------------------------
# wiring

def _add_common(sub, *, field=False, needs_doc=True):
    if field:
        sub.add_argument("--field", required=True,
                         help="odd prime modulus or Q")
    sub.add_argument("--max-size", type=int, default=10,
                     help="poset size bound for enumerations")
    sub.add_argument("--bound", type=int, default=ENUM_BOUND,
                     help="enumeration cap")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for randomized property checks")
    if needs_doc:
        sub.add_argument("document", help="poset document path")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="incalg",
        description="incidence algebras of finite posets: involutions and "
                    "their classification")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("components", help="poset structure report")
    _add_common(sub)
    sub.set_defaults(fn=cmd_components)

    sub = subs.add_parser("autos", help="list order automorphisms")
    _add_common(sub)
    sub.set_defaults(fn=cmd_autos)

    sub = subs.add_parser("involutions", help="list order involutions")
    _add_common(sub)
    sub.set_defaults(fn=cmd_involutions)

    sub = subs.add_parser("decompose",
                          help="decomposition induced by an involution")
    _add_common(sub)
    sub.add_argument("--map", help="map block name")
    sub.set_defaults(fn=cmd_decompose)

    sub = subs.add_parser("classify",
                          help="inner-equivalence classes with representatives")
    _add_common(sub, field=True)
    sub.add_argument("--map", help="map block name")
    sub.set_defaults(fn=cmd_classify)

    sub = subs.add_parser("count",
                          help="class count: formula vs enumeration")
    _add_common(sub, field=True)
    sub.add_argument("--map", help="map block name")
    sub.set_defaults(fn=cmd_count)

    sub = subs.add_parser("general-equiv",
                          help="equivalence under arbitrary automorphisms")
    _add_common(sub, field=True)
    sub.add_argument("--left", required=True, help="MAP or MAP:UNIT")
    sub.add_argument("--right", required=True, help="MAP or MAP:UNIT")
    sub.set_defaults(fn=cmd_general_equiv)

    sub = subs.add_parser("fractional-check",
                          help="fractionality and innerness of a scaling")
    _add_common(sub, field=True)
    sub.add_argument("--sigma", help="unit block holding the scaling values")
    sub.set_defaults(fn=cmd_fractional_check)

    sub = subs.add_parser("verify",
                          help="run the theorem battery on the internal corpus")
    _add_common(sub, field=True, needs_doc=False)
    sub.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "document", None) is not None:
            try:
                with open(args.document, encoding="utf-8") as handle:
                    text = handle.read()
            except OSError as exc:
                raise InputError(f"cannot read {args.document!r}: {exc}") from exc
            doc = parse_document(text)
        else:
            doc = None
        lines, code = args.fn(doc, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ZeroDivisionError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except BoundExceededError as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return 3
    except MultiplicativeGateError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    for line in lines:
        print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
