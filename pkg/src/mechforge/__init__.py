"""mechforge: mine a catalog of game mechanics from declarative game
descriptions and recommend elements and interactions to a designer,
ranked by association-rule confidence."""

__version__ = "0.1.0"
