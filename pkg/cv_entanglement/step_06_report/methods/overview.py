import json
from datetime import datetime
from pathlib import Path

from loguru import logger


def _load(path):
    path = Path(path)
    if not path.exists():
        logger.warning(f"Summary not found: {path}")
        return None
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError:
            logger.warning(f"Invalid JSON format in: {path}")
            return None


def compile_overview(summary_paths, output_path):
    """Collect the stage summaries into one annotated JSON document."""
    now = datetime.now()
    overview = {
        "date": now.strftime("%Y-%m-%d"),
        "time": now.strftime("%H:%M:%S"),
    }
    for stage, path in summary_paths.items():
        overview[stage] = _load(path)

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", encoding="utf-8") as f:
        json.dump(overview, f, indent=2, ensure_ascii=False)
    return overview
