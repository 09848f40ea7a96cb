"""Curve descriptions: which arcs a curve crosses, in what order, turning
which way, and the lamination signs of the triangulation it lives over.

Everything downstream (snake and band graphs, step matrices) consumes only
this finite combinatorial data.  Spec files use a line grammar:

    lamination <arc>=<+1|-1> [<arc>=<+1|-1> ...]
    curve <name> kind=<arc|loop|onesided>
      initial <a> <b>                  # open arcs only
      cross <arc>[!] <ccw|cw> <third>  # transition to the next crossed arc
      cross <arc>[!]                   # last crossing of an open arc
      cross <arc>[!] close <third>     # last crossing of a closed curve
      final <w> <z>                    # open arcs only
    end
    identity <name> mode=<standard|sqrt|y1>
      lhs ...
      rhs ...
    end

'#' starts a comment.  The token ``1`` stands for a boundary segment of
weight one.  A ``!`` suffix flips that single crossing's shear sign, which
is how a doubled traversal records that its second pass reads the opposite
intersection shape.  Arcs named in lamination lines get a coefficient
variable ``y_<arc>``; everything else is a coefficient-free boundary label.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import DomainError, ParseError, ValidationError
from .laurent import _NAME_RE

UNIT = "1"

CCW = "ccw"
CW = "cw"
CLOSE = "close"


def y_name(arc):
    return "y_" + arc


@dataclass(frozen=True)
class Crossing:
    arc: str
    turn: str | None  # CCW, CW, CLOSE, or None for the last crossing of an arc
    third: str | None
    flip: bool = False


@dataclass(frozen=True)
class CurveSpec:
    label: str
    kind: str  # arc | loop | onesided
    crossings: tuple
    initial: tuple | None = None  # (a, b) for open arcs
    final: tuple | None = None  # (w, z) for open arcs
    close_ccw: bool | None = None  # direction of the closing transition

    @property
    def d(self):
        return len(self.crossings)

    def arcs(self):
        return [c.arc for c in self.crossings]


@dataclass
class LaminationSigns:
    """Shear-coordinate signs, one per internal arc of the triangulation."""

    signs: dict = field(default_factory=dict)

    def sign(self, arc):
        try:
            return self.signs[arc]
        except KeyError:
            raise ValidationError(f"arc {arc!r} has no lamination sign")

    def arcs(self):
        return sorted(self.signs)

    def coefficient_vars(self):
        return [y_name(a) for a in self.arcs()]


def effective_sign(signs, crossing):
    s = signs.sign(crossing.arc)
    return -s if crossing.flip else s


@dataclass
class IdentityBlock:
    """Raw identity section; interpreted by the skein module."""

    name: str
    mode: str
    lines: list  # of (lineno, text)


@dataclass
class ParsedFile:
    curves: dict  # name -> CurveSpec, insertion ordered
    signs: LaminationSigns
    identities: list  # of IdentityBlock


def _check_token(tok, lineno, what="arc"):
    if tok == UNIT:
        return tok
    if not _NAME_RE.match(tok):
        raise ParseError(f"malformed {what} token {tok!r}", line=lineno)
    return tok


def _validate(spec, signs):
    if spec.d < 1:
        raise ValidationError(f"curve {spec.label!r}: needs at least one crossing")
    closed = spec.kind in ("loop", "onesided")
    for i, c in enumerate(spec.crossings):
        last = i == spec.d - 1
        if c.arc == UNIT:
            raise ValidationError(f"curve {spec.label!r}: cannot cross the unit label")
        if c.arc not in signs.signs:
            raise ValidationError(
                f"curve {spec.label!r}: crossed arc {c.arc!r} has no lamination sign"
            )
        if c.turn == CLOSE and not (closed and last):
            raise ValidationError(
                f"curve {spec.label!r}: close only allowed on the last crossing of a closed curve"
            )
        if closed and last and c.turn != CLOSE:
            raise ValidationError(f"curve {spec.label!r}: closed curve must end with close")
        if not closed and last and c.turn is not None:
            raise ValidationError(
                f"curve {spec.label!r}: last crossing of an open arc takes no turn"
            )
        if not last and c.turn not in (CCW, CW):
            raise ValidationError(
                f"curve {spec.label!r}: crossing {i + 1} needs a ccw or cw turn"
            )
        if c.turn is not None and c.third is None:
            raise ValidationError(f"curve {spec.label!r}: turn without a third side")
    if spec.kind == "arc":
        if spec.initial is None or spec.final is None:
            raise ValidationError(f"curve {spec.label!r}: open arcs need initial and final")
    else:
        if spec.initial is not None or spec.final is not None:
            raise ValidationError(
                f"curve {spec.label!r}: initial/final only apply to open arcs"
            )
    return spec


def parse_spec(text):
    """Parse a spec file into curves, lamination signs and raw identities."""
    signs = LaminationSigns()
    curves = {}
    identities = []
    lines = text.splitlines()
    i = 0

    def strip(line):
        return line.split("#", 1)[0].strip()

    while i < len(lines):
        lineno = i + 1
        line = strip(lines[i])
        i += 1
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "lamination":
            for item in words[1:]:
                if "=" not in item:
                    raise ParseError(f"expected <arc>=<+1|-1>, got {item!r}", line=lineno)
                arc, val = item.split("=", 1)
                _check_token(arc, lineno)
                if arc == UNIT:
                    raise ParseError("the unit label cannot carry a sign", line=lineno)
                if val not in ("+1", "-1", "1"):
                    raise ParseError(f"bad sign {val!r} for arc {arc!r}", line=lineno)
                signs.signs[arc] = -1 if val == "-1" else 1
        elif head == "curve":
            if len(words) != 3 or not words[2].startswith("kind="):
                raise ParseError("expected: curve <name> kind=<arc|loop|onesided>", line=lineno)
            name = _check_token(words[1], lineno, "curve name")
            kind = words[2][5:]
            if kind not in ("arc", "loop", "onesided"):
                raise ParseError(f"unknown curve kind {kind!r}", line=lineno)
            if name in curves:
                raise ParseError(f"duplicate curve name {name!r}", line=lineno)
            spec, i = _parse_curve_body(name, kind, lines, i, strip)
            curves[name] = _validate(spec, signs)
        elif head == "identity":
            if len(words) != 3 or not words[2].startswith("mode="):
                raise ParseError("expected: identity <name> mode=<standard|sqrt|y1>", line=lineno)
            iname = _check_token(words[1], lineno, "identity name")
            mode = words[2][5:]
            if mode not in ("standard", "sqrt", "y1"):
                raise ParseError(f"unknown identity mode {mode!r}", line=lineno)
            body = []
            while True:
                if i >= len(lines):
                    raise ParseError("unterminated identity block", line=lineno)
                inner = strip(lines[i])
                i += 1
                if inner == "end":
                    break
                if inner:
                    body.append((i, inner))
            identities.append(IdentityBlock(iname, mode, body))
        else:
            raise ParseError(f"unknown directive {head!r}", line=lineno)
    return ParsedFile(curves, signs, identities)


def _parse_curve_body(name, kind, lines, i, strip):
    initial = None
    final = None
    crossings = []
    while True:
        if i >= len(lines):
            raise ParseError(f"unterminated curve block {name!r}", line=i)
        lineno = i + 1
        line = strip(lines[i])
        i += 1
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "end":
            break
        if head == "initial":
            if len(words) != 3:
                raise ParseError("expected: initial <a> <b>", line=lineno)
            initial = (_check_token(words[1], lineno), _check_token(words[2], lineno))
        elif head == "final":
            if len(words) != 3:
                raise ParseError("expected: final <w> <z>", line=lineno)
            final = (_check_token(words[1], lineno), _check_token(words[2], lineno))
        elif head == "cross":
            if len(words) not in (2, 4):
                raise ParseError(
                    "expected: cross <arc>[!] [<ccw|cw|close> <third>]", line=lineno
                )
            arc = words[1]
            flip = arc.endswith("!")
            if flip:
                arc = arc[:-1]
            _check_token(arc, lineno)
            if len(words) == 2:
                crossings.append(Crossing(arc, None, None, flip))
            else:
                turn = words[2]
                if turn not in (CCW, CW, CLOSE):
                    raise ParseError(f"bad turn {turn!r}", line=lineno)
                third = _check_token(words[3], lineno, "third side")
                crossings.append(Crossing(arc, turn, third, flip))
        else:
            raise ParseError(f"unknown curve directive {head!r}", line=lineno)
    close_ccw = None
    if kind == "loop":
        close_ccw = False  # the first crossed arc sits clockwise from the last
    elif kind == "onesided":
        close_ccw = True  # counterclockwise, then through the crosscap
    return (
        CurveSpec(name, kind, tuple(crossings), initial, final, close_ccw),
        i,
    )


def render_spec(parsed):
    """Canonical text for a parsed file (round-trips through parse_spec)."""
    out = []
    if parsed.signs.signs:
        items = " ".join(
            f"{a}={'+1' if s > 0 else '-1'}" for a, s in sorted(parsed.signs.signs.items())
        )
        out.append(f"lamination {items}")
    for spec in parsed.curves.values():
        if spec.kind == "loop" and spec.close_ccw:
            raise ValidationError("cannot render a loop with a counterclockwise closing")
        if spec.kind == "onesided" and not spec.close_ccw:
            raise ValidationError("cannot render a reflected one-sided closing")
        out.append(f"curve {spec.label} kind={spec.kind}")
        if spec.initial:
            out.append(f"  initial {spec.initial[0]} {spec.initial[1]}")
        for c in spec.crossings:
            arc = c.arc + ("!" if c.flip else "")
            if c.turn is None:
                out.append(f"  cross {arc}")
            else:
                out.append(f"  cross {arc} {c.turn} {c.third}")
        if spec.final:
            out.append(f"  final {spec.final[0]} {spec.final[1]}")
        out.append("end")
    return "\n".join(out) + "\n"


# -- curve surgery -----------------------------------------------------------


def _flip_turn(turn):
    if turn == CCW:
        return CW
    if turn == CW:
        return CCW
    return turn


def reflect(spec):
    """Mirror a one-sided curve across the crosscap.

    Every turn swaps direction, the closing transition included, and every
    crossing now reads the opposite intersection shape, so all flip bits
    toggle.  An involution.
    """
    if spec.kind != "onesided":
        raise DomainError("reflect applies to one-sided curves only")
    crossings = tuple(
        replace(c, turn=_flip_turn(c.turn), flip=not c.flip) for c in spec.crossings
    )
    return replace(spec, crossings=crossings, close_ccw=not spec.close_ccw)


def rotate(spec):
    """Advance a one-sided curve's starting crossing by one.

    The first crossing moves to the closing position; passing the crosscap
    mirrors it, so its direction and shear sign both flip.  The old closing
    becomes an ordinary transition with its direction kept.
    """
    if spec.kind != "onesided":
        raise DomainError("rotate applies to one-sided curves only")
    cs = list(spec.crossings)
    first = cs[0]
    old_close = cs[-1]
    old_dir = CCW if spec.close_ccw else CW
    mid = cs[1:-1]
    moved_close = Crossing(first.arc, CLOSE, first.third, not first.flip)
    if spec.d == 1:
        new = (moved_close,)
    else:
        new = tuple(
            mid + [Crossing(old_close.arc, old_dir, old_close.third, old_close.flip), moved_close]
        )
    new_close_ccw = first.turn == CW if spec.d > 1 else not spec.close_ccw
    return replace(spec, crossings=new, close_ccw=new_close_ccw)


def double(spec):
    """Two-sided loop tracing a one-sided curve twice.

    First pass keeps every crossing as is; the second pass is the mirrored
    copy (turns swapped, flip bits toggled).  The result closes clockwise,
    so it is a standard loop whenever the input closing was standard.
    """
    if spec.kind != "onesided":
        raise DomainError("double applies to one-sided curves only")
    first_dir = CCW if spec.close_ccw else CW
    cs = list(spec.crossings)
    head = cs[:-1]
    tail = cs[-1]
    once = head + [Crossing(tail.arc, first_dir, tail.third, tail.flip)]
    mirrored = [
        Crossing(c.arc, _flip_turn(c.turn), c.third, not c.flip) for c in head
    ] + [Crossing(tail.arc, CLOSE, tail.third, not tail.flip)]
    return CurveSpec(
        spec.label + "_sq",
        "loop",
        tuple(once + mirrored),
        close_ccw=not spec.close_ccw,  # mirrored closing direction
    )
