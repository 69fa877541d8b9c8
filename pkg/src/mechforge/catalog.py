"""Integer-coded catalog of game elements and interactions.

Each game contributes one transaction per table: the set of element type
codes it declares and the set of interaction type codes it fires. Element
identity is the behavior plus the behavior's salient params; sprite
nesting is flattened (children inherit ancestor params) and param values
that name another sprite are canonicalized to that sprite's behavior, so
identity never depends on game-local naming.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .vgdl import (
    GameDescription,
    Scalar,
    SPRITE_REF_KEYS,
    parse_description,
)

CATALOG_VERSION = "v1"

# Salient params per behavior: the subset of params that defines an
# element's type identity. cooldown/prob/speed and similar tuning knobs
# are deliberately absent so mechanically-equal elements share a code.
SALIENT_PARAMS: dict[str, tuple[str, ...]] = {
    "FlakAvatar": ("stype",),
    "MovingAvatar": (),
    "HorizontalAvatar": (),
    "ShootAvatar": ("stype",),
    "Bomber": ("stype",),
    "Missile": ("orientation",),
    "Immovable": (),
    "Passive": (),
    "SpawnPoint": ("stype",),
    "RandomNPC": (),
    "Chaser": ("stype",),
    "Portal": ("stype",),
}

# Behaviors assumed for reserved identifiers that are referenced without
# being declared.
RESERVED_DEFAULT_BEHAVIORS = {"wall": "Immovable", "avatar": "MovingAvatar"}


class DuplicateGameName(Exception):
    pass


class CatalogFormatError(Exception):
    pass


@dataclass(frozen=True)
class ElementItem:
    behavior: str
    salient_params: tuple[tuple[str, Scalar], ...] = ()

    def params_dict(self) -> dict[str, Scalar]:
        return dict(self.salient_params)

    def label(self) -> str:
        if not self.salient_params:
            return self.behavior
        inner = ", ".join(f"{k}={v}" for k, v in self.salient_params)
        return f"{self.behavior}({inner})"


EOS_ELEMENT = ElementItem("EOS")


@dataclass(frozen=True)
class InteractionItem:
    first: ElementItem
    second: ElementItem
    effect: str

    def label(self) -> str:
        return f"{self.first.label()} + {self.second.label()} -> {self.effect}"


def canonicalize_value(key: str, value: Scalar, behavior_by_id: dict[str, str]) -> Scalar:
    """Sprite-name param values become the named sprite's behavior."""
    if key in SPRITE_REF_KEYS and isinstance(value, str) and value in behavior_by_id:
        return behavior_by_id[value]
    return value


def element_item(behavior: str, effective_params: dict[str, Scalar],
                 behavior_by_id: dict[str, str]) -> ElementItem:
    salient = []
    for key in SALIENT_PARAMS.get(behavior, ()):
        if key in effective_params:
            salient.append((key, canonicalize_value(key, effective_params[key], behavior_by_id)))
    return ElementItem(behavior, tuple(sorted(salient)))


def design_element_types(game: GameDescription) -> dict[str, ElementItem]:
    """Element type of every addressable identifier, in declaration order.

    Reserved identifiers referenced without a declaration resolve to their
    default behaviors (EOS is handled separately and is never an element).
    """
    behavior_by_id = {s.identifier: s.behavior for s in game.sprites}
    types: dict[str, ElementItem] = {}
    for sprite in game.sprites:
        effective = game.effective_params(sprite.identifier)
        types[sprite.identifier] = element_item(sprite.behavior, effective, behavior_by_id)
    for identifier in _referenced_reserved(game):
        if identifier not in types:
            types[identifier] = ElementItem(RESERVED_DEFAULT_BEHAVIORS[identifier])
    return types


def _referenced_reserved(game: GameDescription) -> list[str]:
    found: list[str] = []
    candidates = []
    for inter in game.interactions:
        candidates.extend((inter.first, inter.second))
    for term in game.terminations:
        candidates.extend(v for k, v in term.params.items()
                          if k in SPRITE_REF_KEYS and isinstance(v, str))
    for names in game.level_mapping.values():
        candidates.extend(names)
    for name in candidates:
        if name in RESERVED_DEFAULT_BEHAVIORS and name not in found:
            found.append(name)
    return found


def resolve_collider(game: GameDescription, identifier: str,
                     types: dict[str, ElementItem]) -> ElementItem:
    if identifier == "EOS":
        return EOS_ELEMENT
    return types[identifier]


def design_interaction_types(game: GameDescription) -> list[InteractionItem]:
    """Interaction type of every interaction, in declaration order."""
    types = design_element_types(game)
    items = []
    for inter in game.interactions:
        items.append(InteractionItem(
            resolve_collider(game, inter.first, types),
            resolve_collider(game, inter.second, types),
            inter.effect,
        ))
    return items


@dataclass
class Catalog:
    """Immutable after construction; codes index the item lists."""
    element_items: list[ElementItem]
    interaction_items: list[InteractionItem]
    element_transactions: dict[str, frozenset[int]]
    interaction_transactions: dict[str, frozenset[int]]

    def __post_init__(self):
        self._element_codes = {item: code for code, item in enumerate(self.element_items)}
        self._interaction_codes = {item: code for code, item in enumerate(self.interaction_items)}

    @property
    def games(self) -> list[str]:
        return sorted(self.element_transactions)

    def element_code(self, item: ElementItem) -> int | None:
        return self._element_codes.get(item)

    def interaction_code(self, item: InteractionItem) -> int | None:
        return self._interaction_codes.get(item)

    def games_with_element(self, code: int) -> list[str]:
        return sorted(g for g, txn in self.element_transactions.items() if code in txn)

    def games_with_interaction(self, code: int) -> list[str]:
        return sorted(g for g, txn in self.interaction_transactions.items() if code in txn)

    def to_payload(self) -> dict:
        return {
            "format": "mechforge-catalog",
            "version": CATALOG_VERSION,
            "elements": [
                {"code": code, "behavior": item.behavior, "params": item.params_dict()}
                for code, item in enumerate(self.element_items)
            ],
            "interactions": [
                {
                    "code": code,
                    "first": {"behavior": item.first.behavior, "params": item.first.params_dict()},
                    "second": {"behavior": item.second.behavior, "params": item.second.params_dict()},
                    "effect": item.effect,
                }
                for code, item in enumerate(self.interaction_items)
            ],
            "element_transactions": {g: sorted(t) for g, t in self.element_transactions.items()},
            "interaction_transactions": {g: sorted(t) for g, t in self.interaction_transactions.items()},
        }

    @property
    def fingerprint(self) -> str:
        canonical = json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class EncodedDesign:
    element_codes: frozenset[int]
    interaction_codes: frozenset[int]
    unknown: list[ElementItem | InteractionItem]


def ingest_corpus(descriptions: list[GameDescription]) -> Catalog:
    """Build the two transaction tables. Code assignment is deterministic:
    games are taken in sorted-name order, items coded at first sight."""
    names = [g.name for g in descriptions]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise DuplicateGameName(f"duplicate game name(s): {', '.join(dupes)}")

    element_items: list[ElementItem] = []
    interaction_items: list[InteractionItem] = []
    element_codes: dict[ElementItem, int] = {}
    interaction_codes: dict[InteractionItem, int] = {}
    element_txns: dict[str, frozenset[int]] = {}
    interaction_txns: dict[str, frozenset[int]] = {}

    for game in sorted(descriptions, key=lambda g: g.name):
        e_codes: set[int] = set()
        for item in design_element_types(game).values():
            if item not in element_codes:
                element_codes[item] = len(element_items)
                element_items.append(item)
            e_codes.add(element_codes[item])
        i_codes: set[int] = set()
        for item in design_interaction_types(game):
            if item not in interaction_codes:
                interaction_codes[item] = len(interaction_items)
                interaction_items.append(item)
            i_codes.add(interaction_codes[item])
        element_txns[game.name] = frozenset(e_codes)
        interaction_txns[game.name] = frozenset(i_codes)

    return Catalog(element_items, interaction_items, element_txns, interaction_txns)


def encode_design(partial: GameDescription, catalog: Catalog) -> EncodedDesign:
    """Map a (possibly incomplete) design onto catalog codes. Items the
    catalog has never seen are reported, never fatal."""
    unknown: list[ElementItem | InteractionItem] = []
    element_codes: set[int] = set()
    for item in design_element_types(partial).values():
        code = catalog.element_code(item)
        if code is None:
            if item not in unknown:
                unknown.append(item)
        else:
            element_codes.add(code)
    interaction_codes: set[int] = set()
    for item in design_interaction_types(partial):
        code = catalog.interaction_code(item)
        if code is None:
            if item not in unknown:
                unknown.append(item)
        else:
            interaction_codes.add(code)
    return EncodedDesign(frozenset(element_codes), frozenset(interaction_codes), unknown)


def save_catalog(catalog: Catalog, destination: str | Path) -> None:
    Path(destination).write_text(
        json.dumps(catalog.to_payload(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _element_from_payload(entry: dict) -> ElementItem:
    return ElementItem(entry["behavior"], tuple(sorted(entry["params"].items())))


def load_catalog(source: str | Path) -> Catalog:
    try:
        payload = json.loads(Path(source).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogFormatError(f"unreadable catalog file: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != "mechforge-catalog":
        raise CatalogFormatError("not a catalog file")
    if payload.get("version") != CATALOG_VERSION:
        raise CatalogFormatError(
            f"unsupported catalog version {payload.get('version')!r}, expected {CATALOG_VERSION!r}")
    elements = [_element_from_payload(e) for e in
                sorted(payload["elements"], key=lambda e: e["code"])]
    interactions = [
        InteractionItem(
            _element_from_payload(e["first"]),
            _element_from_payload(e["second"]),
            e["effect"],
        )
        for e in sorted(payload["interactions"], key=lambda e: e["code"])
    ]
    return Catalog(
        elements,
        interactions,
        {g: frozenset(t) for g, t in payload["element_transactions"].items()},
        {g: frozenset(t) for g, t in payload["interaction_transactions"].items()},
    )


def load_corpus_dir(directory: str | Path) -> list[GameDescription]:
    """Parse every .vgd file in a directory; the file stem names the game."""
    games = []
    for path in sorted(Path(directory).glob("*.vgd")):
        games.append(parse_description(path.read_bytes(), name=path.stem))
    return games
