"""Parser and renderer for the supported subset of the video game
description language.

A game description has four sections: ``SpriteSet``, ``InteractionSet``,
``TerminationSet`` and ``LevelMapping``. Section headers sit at column
zero; entries are indented in steps of four spaces. Sprite nesting is
expressed by deeper indentation. Comments start with ``#``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

# Behaviors, effects and terminations accepted by the parser. Anything
# outside these sets is a parse error, which keeps the grammar closed.
BEHAVIORS = frozenset({
    "FlakAvatar",
    "MovingAvatar",
    "HorizontalAvatar",
    "ShootAvatar",
    "Bomber",
    "Missile",
    "Immovable",
    "Passive",
    "SpawnPoint",
    "RandomNPC",
    "Chaser",
    "Portal",
})

EFFECTS = frozenset({
    "killSprite",
    "killBoth",
    "stepBack",
    "transformTo",
    "wrapAround",
    "bounceForward",
    "teleportToExit",
    "killIfFromAbove",
    "changeResource",
    "pullWithIt",
})

TERMINATIONS = frozenset({"SpriteCounter", "MultiSpriteCounter", "Timeout"})

# Identifiers usable without a declaration: the screen border and the two
# conventional singletons.
RESERVED_IDENTIFIERS = frozenset({"EOS", "wall", "avatar"})

# Param keys whose values name other sprites.
SPRITE_REF_KEYS = frozenset({"stype", "stype1", "stype2", "stype3"})

SECTION_HEADERS = ("SpriteSet", "InteractionSet", "TerminationSet", "LevelMapping")

Scalar = int | float | str

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_INT_RE = re.compile(r"^[+-]?\d+$")
# decimal literals, with or without an exponent part (repr() of any
# finite float matches one of these forms)
_DECIMAL_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+)([eE][+-]?\d+)?$|^[+-]?\d+[eE][+-]?\d+$")


class ParseError(Exception):
    """Raised for any malformed description source.

    Carries a 1-based line number and a short machine-readable code so
    callers (the grader, the HTTP service) can report failures precisely.
    """

    def __init__(self, line: int, code: str, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.code = code
        self.message = message


@dataclass
class SpriteDef:
    identifier: str
    behavior: str
    params: dict[str, Scalar] = field(default_factory=dict)
    parent: str | None = None


@dataclass
class InteractionDef:
    first: str
    second: str
    effect: str
    params: dict[str, Scalar] = field(default_factory=dict)


@dataclass
class TerminationDef:
    kind: str
    params: dict[str, Scalar] = field(default_factory=dict)
    win: bool = False


@dataclass
class GameDescription:
    name: str
    sprites: list[SpriteDef] = field(default_factory=list)
    interactions: list[InteractionDef] = field(default_factory=list)
    terminations: list[TerminationDef] = field(default_factory=list)
    level_mapping: dict[str, list[str]] = field(default_factory=dict)

    def sprite_ids(self) -> set[str]:
        return {s.identifier for s in self.sprites}

    def find_sprite(self, identifier: str) -> SpriteDef | None:
        for s in self.sprites:
            if s.identifier == identifier:
                return s
        return None

    def effective_params(self, identifier: str) -> dict[str, Scalar]:
        """Params with ancestor values inherited; the sprite's own values win."""
        chain: list[SpriteDef] = []
        current = self.find_sprite(identifier)
        while current is not None:
            chain.append(current)
            current = self.find_sprite(current.parent) if current.parent else None
        merged: dict[str, Scalar] = {}
        for sprite in reversed(chain):
            merged.update(sprite.params)
        return merged


def parse_scalar(token: str) -> Scalar:
    """Integer and decimal literals become numbers, everything else a string."""
    if _INT_RE.match(token):
        return int(token)
    if _DECIMAL_RE.match(token):
        return float(token)
    return token


def render_scalar(value: Scalar) -> str:
    if isinstance(value, bool):  # bools are not produced by the parser
        return "True" if value else "False"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _decode(text: str | bytes) -> str:
    if isinstance(text, str):
        return text
    try:
        return text.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = text.count(b"\n", 0, exc.start) + 1
        raise ParseError(line, "bad-encoding", "input is not valid UTF-8") from exc


def _split_params(tokens: list[str], line_no: int) -> dict[str, Scalar]:
    params: dict[str, Scalar] = {}
    for token in tokens:
        key, eq, raw = token.partition("=")
        if not eq or not key or not raw:
            raise ParseError(line_no, "malformed-param", f"expected key=value, got {token!r}")
        if not _IDENT_RE.match(key):
            raise ParseError(line_no, "malformed-param", f"bad param key {key!r}")
        if key in params:
            raise ParseError(line_no, "malformed-param", f"duplicate param key {key!r}")
        params[key] = parse_scalar(raw)
    return params


def _require_identifier(token: str, line_no: int, what: str) -> str:
    if not _IDENT_RE.match(token):
        raise ParseError(line_no, "malformed-line", f"bad {what} {token!r}")
    return token


def parse_description(text: str | bytes, name: str = "untitled") -> GameDescription:
    """Parse description source into a model, or raise ParseError.

    The game name is not part of the source grammar; callers supply it
    (file loaders use the file stem).
    """
    source = _decode(text)
    game = GameDescription(name=name)
    seen_sections: set[str] = set()
    section: str | None = None
    # (depth, identifier) stack for sprite nesting
    sprite_stack: list[tuple[int, str]] = []

    for line_no, raw_line in enumerate(source.split("\n"), start=1):
        line = raw_line.split("#", 1)[0].rstrip("\r").rstrip()
        if not line.strip():
            continue
        stripped = line.lstrip(" ")
        indent = len(line) - len(stripped)
        if "\t" in line[:indent + 1] or stripped.startswith("\t"):
            raise ParseError(line_no, "bad-indentation", "tabs are not allowed in indentation")
        if indent % 4 != 0:
            raise ParseError(line_no, "bad-indentation",
                             f"indentation must be a multiple of 4 spaces, got {indent}")
        depth = indent // 4

        if depth == 0:
            if stripped not in SECTION_HEADERS:
                raise ParseError(line_no, "unknown-section", f"unknown section {stripped!r}")
            if stripped in seen_sections:
                raise ParseError(line_no, "duplicate-identifier", f"duplicate section {stripped!r}")
            seen_sections.add(stripped)
            section = stripped
            sprite_stack = []
            continue

        if section is None:
            raise ParseError(line_no, "bad-indentation", "entry before any section header")

        if section == "SpriteSet":
            _parse_sprite_line(game, stripped, depth, line_no, sprite_stack)
        else:
            if depth != 1:
                raise ParseError(line_no, "bad-indentation",
                                 f"{section} entries must be indented exactly 4 spaces")
            if section == "InteractionSet":
                _parse_interaction_line(game, stripped, line_no)
            elif section == "TerminationSet":
                _parse_termination_line(game, stripped, line_no)
            else:
                _parse_mapping_line(game, stripped, line_no)

    _check_references(game, source)
    return game


def _parse_sprite_line(game: GameDescription, content: str, depth: int,
                       line_no: int, stack: list[tuple[int, str]]) -> None:
    while stack and stack[-1][0] >= depth:
        stack.pop()
    expected = stack[-1][0] + 1 if stack else 1
    if depth != expected:
        raise ParseError(line_no, "bad-indentation",
                         f"sprite nested {depth} levels deep under a level-{expected - 1} parent")
    head, sep, tail = content.partition(">")
    if not sep:
        raise ParseError(line_no, "malformed-line", "sprite line must contain '>'")
    identifier = _require_identifier(head.strip(), line_no, "sprite identifier")
    tokens = tail.split()
    if not tokens:
        raise ParseError(line_no, "malformed-line", "sprite line missing behavior")
    behavior = tokens[0]
    if behavior not in BEHAVIORS:
        raise ParseError(line_no, "unknown-behavior", f"unknown behavior {behavior!r}")
    if identifier in game.sprite_ids():
        raise ParseError(line_no, "duplicate-identifier",
                         f"duplicate sprite identifier {identifier!r}")
    params = _split_params(tokens[1:], line_no)
    parent = stack[-1][1] if stack else None
    game.sprites.append(SpriteDef(identifier, behavior, params, parent))
    stack.append((depth, identifier))


def _parse_interaction_line(game: GameDescription, content: str, line_no: int) -> None:
    head, sep, tail = content.partition(">")
    if not sep:
        raise ParseError(line_no, "malformed-line", "interaction line must contain '>'")
    names = head.split()
    if len(names) != 2:
        raise ParseError(line_no, "malformed-line",
                         f"interaction needs exactly two sprite names, got {len(names)}")
    first = _require_identifier(names[0], line_no, "sprite identifier")
    second = _require_identifier(names[1], line_no, "sprite identifier")
    tokens = tail.split()
    if not tokens:
        raise ParseError(line_no, "malformed-line", "interaction line missing effect")
    effect = tokens[0]
    if effect not in EFFECTS:
        raise ParseError(line_no, "unknown-effect", f"unknown effect {effect!r}")
    params = _split_params(tokens[1:], line_no)
    game.interactions.append(InteractionDef(first, second, effect, params))


def _parse_termination_line(game: GameDescription, content: str, line_no: int) -> None:
    tokens = content.split()
    kind = tokens[0]
    if kind not in TERMINATIONS:
        raise ParseError(line_no, "unknown-termination", f"unknown termination {kind!r}")
    params = _split_params(tokens[1:], line_no)
    if "win" not in params:
        raise ParseError(line_no, "malformed-param", "termination line requires win=True|False")
    win_raw = params.pop("win")
    if win_raw not in ("True", "False"):
        raise ParseError(line_no, "malformed-param", f"win must be True or False, got {win_raw!r}")
    game.terminations.append(TerminationDef(kind, params, win=(win_raw == "True")))


def _parse_mapping_line(game: GameDescription, content: str, line_no: int) -> None:
    head, sep, tail = content.partition(">")
    if not sep:
        raise ParseError(line_no, "malformed-line", "mapping line must contain '>'")
    char = head.strip()
    if len(char) != 1:
        raise ParseError(line_no, "malformed-line",
                         f"mapping key must be a single character, got {char!r}")
    if char in game.level_mapping:
        raise ParseError(line_no, "duplicate-identifier", f"duplicate mapping for {char!r}")
    names = [_require_identifier(t, line_no, "sprite identifier") for t in tail.split()]
    if not names:
        raise ParseError(line_no, "malformed-line", "mapping line needs at least one sprite")
    game.level_mapping[char] = names


def _check_references(game: GameDescription, source: str) -> None:
    """Referential integrity: interactions, terminations and the level
    mapping may only name declared or reserved sprites. Sprite params are
    exempt (their values may be canonical behavior names)."""
    declared = game.sprite_ids() | RESERVED_IDENTIFIERS

    def line_of(needle: str) -> int:
        pattern = re.compile(rf"\b{re.escape(needle)}\b")
        for i, line in enumerate(source.split("\n"), start=1):
            if pattern.search(line.split("#", 1)[0]):
                return i
        return 1

    def check(identifier: str, context: str) -> None:
        if identifier not in declared:
            raise ParseError(line_of(identifier), "undeclared-reference",
                             f"{context} references undeclared sprite {identifier!r}")

    for inter in game.interactions:
        check(inter.first, "interaction")
        check(inter.second, "interaction")
        for key, value in inter.params.items():
            if key in SPRITE_REF_KEYS and isinstance(value, str):
                check(value, f"interaction param {key}")
    for term in game.terminations:
        for key, value in term.params.items():
            if key in SPRITE_REF_KEYS and isinstance(value, str):
                check(value, f"termination param {key}")
    for char, names in game.level_mapping.items():
        for n in names:
            check(n, f"level mapping {char!r}")


def render_description(game: GameDescription) -> str:
    """Render a model back to source. parse(render(g)) reproduces g,
    including declaration and param order. Output uses LF line endings."""
    lines: list[str] = ["SpriteSet"]
    children: dict[str | None, list[SpriteDef]] = {}
    for sprite in game.sprites:
        children.setdefault(sprite.parent, []).append(sprite)

    stack = [(s, 1) for s in reversed(children.get(None, []))]
    while stack:
        sprite, depth = stack.pop()
        lines.append("    " * depth + _render_entry(
            f"{sprite.identifier} >", sprite.behavior, sprite.params))
        stack.extend((c, depth + 1) for c in reversed(children.get(sprite.identifier, [])))
    lines.append("InteractionSet")
    for inter in game.interactions:
        lines.append("    " + _render_entry(
            f"{inter.first} {inter.second} >", inter.effect, inter.params))
    lines.append("TerminationSet")
    for term in game.terminations:
        entry = _render_entry("", term.kind, term.params).strip()
        lines.append(f"    {entry} win={'True' if term.win else 'False'}")
    lines.append("LevelMapping")
    for char, names in game.level_mapping.items():
        lines.append(f"    {char} > {' '.join(names)}")
    return "\n".join(lines) + "\n"


def _render_entry(prefix: str, head: str, params: dict[str, Scalar]) -> str:
    parts = [prefix, head] if prefix else [head]
    parts.extend(f"{k}={render_scalar(v)}" for k, v in params.items())
    return " ".join(p for p in parts if p)
