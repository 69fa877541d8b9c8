"""Live design sessions: match the current design against the mined rule
bases and rank candidate elements and interactions by rule confidence.

Recommendations are recomputed from scratch on every query; the session
only stores the design plus a revision counter that guards apply calls
against stale suggestions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import (
    Catalog,
    ElementItem,
    EOS_ELEMENT,
    InteractionItem,
    design_element_types,
    encode_design,
)
from .miner.apriori import AssociationRule, RuleBase
from .vgdl import (
    BEHAVIORS,
    EFFECTS,
    GameDescription,
    InteractionDef,
    RESERVED_IDENTIFIERS,
    Scalar,
    SpriteDef,
    SPRITE_REF_KEYS,
)


class StaleRuleBase(Exception):
    """Rule bases were mined from a different catalog."""


class StaleRecommendation(Exception):
    """The recommendation was produced for an earlier design revision."""


class MissingElements(Exception):
    """An interaction cannot be materialized without its element types."""


class NotFound(Exception):
    pass


class DesignError(Exception):
    """A direct add would produce an invalid description."""


@dataclass
class Recommendation:
    kind: str  # "element" | "interaction"
    item: ElementItem | InteractionItem
    item_code: int
    confidence: Fraction
    support: Fraction
    source_rule: AssociationRule | None
    provenance: list[str]
    origin: str  # "rule" | "frequency-fallback"
    revision: int

    @property
    def rec_id(self) -> str:
        return f"{self.kind}:{self.item_code}"


@dataclass
class DesignSession:
    session_id: str
    catalog: Catalog
    element_rules: RuleBase
    interaction_rules: RuleBase
    design: GameDescription = field(default_factory=lambda: GameDescription(name="design"))
    revision: int = 0

    def __post_init__(self):
        self._check_fingerprints()
        self._reencode()

    def _check_fingerprints(self) -> None:
        expected = self.catalog.fingerprint
        for base in (self.element_rules, self.interaction_rules):
            if base.fingerprint != expected:
                raise StaleRuleBase(
                    "rule base fingerprint does not match the catalog; re-run mining")

    def _reencode(self) -> None:
        encoded = encode_design(self.design, self.catalog)
        self.element_codes = encoded.element_codes
        self.interaction_codes = encoded.interaction_codes
        self.unknown_items = encoded.unknown

    def _mutated(self) -> None:
        self._reencode()
        self.revision += 1

    # ── recommendation queries ────────────────────────────────────────

    def recommend_elements(self, limit: int) -> list[Recommendation]:
        self._check_fingerprints()
        if not self.element_codes:
            recs = self._fallback(
                "element", self.catalog.element_items, self.catalog.games_with_element,
                excluded=frozenset())
        else:
            recs = self._from_rules(
                "element", self.element_rules, self.element_codes,
                self.catalog.element_items, self.catalog.games_with_element)
        return recs[:limit]

    def recommend_interactions(self, limit: int) -> list[Recommendation]:
        self._check_fingerprints()
        present = set(design_element_types(self.design).values()) | {EOS_ELEMENT}

        def applicable(item: InteractionItem) -> bool:
            return item.first in present and item.second in present

        if not self.interaction_codes:
            recs = self._fallback(
                "interaction", self.catalog.interaction_items,
                self.catalog.games_with_interaction,
                excluded=frozenset(), keep=applicable)
        else:
            recs = self._from_rules(
                "interaction", self.interaction_rules, self.interaction_codes,
                self.catalog.interaction_items, self.catalog.games_with_interaction,
                keep=applicable)
        return recs[:limit]

    def _from_rules(self, kind, rulebase, codes, items, provenance_of, keep=None):
        best: dict[int, AssociationRule] = {}
        for rule in rulebase.rules:
            if not set(rule.antecedent) <= codes:
                continue
            for code in rule.consequent:
                if code in codes:
                    continue
                current = best.get(code)
                if current is None or (rule.confidence, rule.support) > (
                        current.confidence, current.support):
                    best[code] = rule
        recs = []
        for code, rule in best.items():
            item = items[code]
            if keep is not None and not keep(item):
                continue
            recs.append(Recommendation(
                kind=kind, item=item, item_code=code,
                confidence=rule.confidence, support=rule.support,
                source_rule=rule, provenance=provenance_of(code),
                origin="rule", revision=self.revision))
        recs.sort(key=lambda r: (-r.confidence, -r.support, r.item_code))
        return recs

    def _fallback(self, kind, items, provenance_of, excluded, keep=None):
        """Cold start: no antecedent can match, so rank every catalog item
        by how many corpus games contain it."""
        total = len(self.catalog.games)
        recs = []
        for code, item in enumerate(items):
            if code in excluded or (keep is not None and not keep(item)):
                continue
            games = provenance_of(code)
            if not games:
                continue
            support = Fraction(len(games), total)
            recs.append(Recommendation(
                kind=kind, item=item, item_code=code,
                confidence=support, support=support,
                source_rule=None, provenance=games,
                origin="frequency-fallback", revision=self.revision))
        recs.sort(key=lambda r: (-r.confidence, -r.support, r.item_code))
        return recs

    # ── mutations ─────────────────────────────────────────────────────

    def apply_recommendation(self, rec: Recommendation) -> str | int:
        """Materialize a recommendation; returns the new sprite identifier
        (elements) or interaction index (interactions)."""
        if rec.revision != self.revision:
            raise StaleRecommendation(
                f"recommendation was made at revision {rec.revision}, "
                f"session is at {self.revision}")
        if rec.kind == "element":
            return self._materialize_element(rec.item)
        return self._materialize_interaction(rec.item)

    def _materialize_element(self, item: ElementItem) -> str:
        identifier = self._fresh_identifier(item.behavior.lower())
        self.design.sprites.append(
            SpriteDef(identifier, item.behavior, dict(item.salient_params)))
        self._mutated()
        return identifier

    def _materialize_interaction(self, item: InteractionItem) -> int:
        first = self._sprite_for(item.first)
        second = self._sprite_for(item.second)
        missing = [side.label() for side, found in
                   ((item.first, first), (item.second, second)) if found is None]
        if missing:
            raise MissingElements(
                f"design has no sprite of type {', '.join(missing)}")
        self.design.interactions.append(InteractionDef(first, second, item.effect, {}))
        self._mutated()
        return len(self.design.interactions) - 1

    def _sprite_for(self, element: ElementItem) -> str | None:
        if element == EOS_ELEMENT:
            return "EOS"
        types = design_element_types(self.design)
        for sprite in self.design.sprites:
            if types[sprite.identifier] == element:
                return sprite.identifier
        return None

    def _fresh_identifier(self, base: str) -> str:
        taken = self.design.sprite_ids() | RESERVED_IDENTIFIERS
        if base not in taken:
            return base
        n = 2
        while f"{base}{n}" in taken:
            n += 1
        return f"{base}{n}"

    def add_element(self, behavior: str, params: dict[str, Scalar] | None = None) -> str:
        if behavior not in BEHAVIORS:
            raise DesignError(f"unknown behavior {behavior!r}")
        identifier = self._fresh_identifier(behavior.lower())
        self.design.sprites.append(SpriteDef(identifier, behavior, dict(params or {})))
        self._mutated()
        return identifier

    def add_interaction(self, first: str, second: str, effect: str,
                        params: dict[str, Scalar] | None = None) -> int:
        if effect not in EFFECTS:
            raise DesignError(f"unknown effect {effect!r}")
        declared = self.design.sprite_ids() | RESERVED_IDENTIFIERS
        for name in (first, second):
            if name not in declared:
                raise DesignError(f"undeclared sprite {name!r}")
        params = dict(params or {})
        for key, value in params.items():
            if key in SPRITE_REF_KEYS and isinstance(value, str) and value not in declared:
                raise DesignError(f"param {key} references undeclared sprite {value!r}")
        self.design.interactions.append(InteractionDef(first, second, effect, params))
        self._mutated()
        return len(self.design.interactions) - 1

    def remove_element(self, identifier: str) -> None:
        if self.design.find_sprite(identifier) is None:
            raise NotFound(f"no sprite named {identifier!r}")
        removed = {identifier} | self._descendants(identifier)

        def refs_removed(params: dict[str, Scalar]) -> bool:
            return any(k in SPRITE_REF_KEYS and v in removed for k, v in params.items())

        self.design.sprites = [s for s in self.design.sprites
                               if s.identifier not in removed]
        self.design.interactions = [
            i for i in self.design.interactions
            if i.first not in removed and i.second not in removed
            and not refs_removed(i.params)]
        self.design.terminations = [
            t for t in self.design.terminations if not refs_removed(t.params)]
        mapping = {}
        for char, names in self.design.level_mapping.items():
            kept = [n for n in names if n not in removed]
            if kept:
                mapping[char] = kept
        self.design.level_mapping = mapping
        self._mutated()

    def _descendants(self, identifier: str) -> set[str]:
        found: set[str] = set()
        frontier = {identifier}
        while frontier:
            frontier = {s.identifier for s in self.design.sprites
                        if s.parent in frontier and s.identifier not in found}
            found |= frontier
        return found

    def remove_interaction(self, index: int) -> None:
        if not 0 <= index < len(self.design.interactions):
            raise NotFound(f"no interaction at index {index}")
        del self.design.interactions[index]
        self._mutated()
