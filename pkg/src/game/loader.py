"""Game loader - Parse and convert game documents."""

import logging
from pathlib import Path

import yaml
from pydantic import ValidationError

from ..core.exceptions import GameLoadError
from .models import GameDocument, QuadraticGame, game_from_document

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).parent / "fixtures"

# Bundled games addressable by name on the command line
PRESETS: dict[str, str] = {
    "paper": "paper_example.json",
    "paper-player-major": "paper_example_player_major.json",
    "single-player": "single_player.json",
    "infeasible": "infeasible.json",
    "non-monotone": "non_monotone.json",
}


def resolve_game_path(source: str | Path) -> Path:
    """Map a preset name or a filesystem path to a file path."""
    if isinstance(source, str) and source in PRESETS:
        return FIXTURES_DIR / PRESETS[source]
    return Path(source)


class GameLoader:
    """Load game documents (JSON or YAML) into QuadraticGame objects."""

    def load_document(self, source: str | Path) -> GameDocument:
        """Parse and schema-check a game document.

        Args:
            source: Path to the document or a preset name.

        Returns:
            Validated GameDocument.

        Raises:
            GameLoadError: If the file is missing, malformed or fails the schema.
        """
        path = resolve_game_path(source)

        if not path.exists():
            raise GameLoadError(str(source), "file not found")

        # 1. Parse (JSON is a YAML subset)
        try:
            with open(path, encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
            raise GameLoadError(str(path), f"parse error{where}: {e}", cause=e) from e

        if not isinstance(data, dict):
            raise GameLoadError(str(path), "document must contain a mapping")

        # 2. Pydantic validation (schema)
        try:
            doc = GameDocument(**data)
        except ValidationError as e:
            raise GameLoadError(str(path), f"schema error:\n{e}", cause=e) from e

        logger.debug("Loaded game document %s (%s players, d=%s)", doc.name, doc.n, doc.d)
        return doc

    def load(self, source: str | Path) -> QuadraticGame:
        """Load a game.

        Args:
            source: Path to the document or a preset name.

        Returns:
            QuadraticGame (not yet validated, see src.game.validation).

        Raises:
            GameLoadError: If loading fails.
        """
        doc = self.load_document(source)
        try:
            return game_from_document(doc)
        except ValueError as e:
            raise GameLoadError(str(source), f"cannot build arrays: {e}", cause=e) from e


def load_game(source: str | Path) -> QuadraticGame:
    """Shortcut for ``GameLoader().load(source)``."""
    return GameLoader().load(source)
