"""Output helpers: JSON serialization, result files and failure reports."""

import json
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional
from loguru import logger


def dump_json(data: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_json_file(path: Path) -> Dict[str, Any]:
    """Read a JSON document produced by one of the commands."""
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"{path} does not contain a JSON object")
    return data


def write_output(text: str, out_path: Optional[Path] = None) -> None:
    """Write command output to a file, or to stdout when no path is given."""
    if out_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out_path = Path(out_path)
    if out_path.parent != Path('.'):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, 'w', encoding='utf-8') as f:
        f.write(text)
    logger.info(f"Wrote {out_path}")


def create_timestamped_output_dir(base_dir: Path, label: str) -> Path:
    """Create a timestamped output directory for this run."""
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    output_dir = base_dir / f"{timestamp}_{label}"
    output_dir.mkdir(parents=True, exist_ok=True)
    logger.info(f"Created output directory: {output_dir}")
    return output_dir


def generate_json_log(
    output_dir: Path,
    operation: str,
    result: Dict[str, Any],
    execution_time: float,
    **kwargs
) -> Path:
    """Write the run log: metadata plus the command's JSON result."""
    log_data = {
        "run_metadata": {
            "timestamp": datetime.now().isoformat(),
            "operation": operation,
            "execution_time_seconds": round(execution_time, 3),
            **kwargs
        },
        "result": result,
    }
    log_file = output_dir / f"{datetime.now().strftime('%Y%m%d_%H%M%S')}_{operation}_log.json"
    with open(log_file, 'w', encoding='utf-8') as f:
        f.write(dump_json(log_data))
    logger.info(f"Generated JSON log: {log_file}")
    return log_file


def generate_failure_report(output_dir: Path, failures: List[Dict[str, Any]], operation: str) -> Optional[Path]:
    """Generate human-readable failure report if any check failed."""
    if not failures:
        return None

    timestamp = datetime.now()
    failure_file = output_dir / "FAILURE.md"

    with open(failure_file, 'w', encoding='utf-8') as f:
        f.write("# Verification Failure Report\n")
        f.write(f"**Date**: {timestamp.strftime('%Y-%m-%d %H:%M:%S')}\n")
        f.write(f"**Operation**: {operation}\n\n")

        f.write("## Summary\n")
        f.write(f"- **Failed Checks**: {len(failures)}\n\n")

        f.write("## Failed Checks\n")
        for failure in failures:
            f.write(f"### {failure.get('name', 'Unknown')}\n")
            f.write(f"- **Mode**: {failure.get('mode', 'Unknown')}\n")
            f.write(f"- **Counterexample**: {failure.get('counterexample') or 'none recorded'}\n")
            f.write(f"- **Detail**: {json.dumps(failure.get('detail', {}), sort_keys=True)}\n\n")

        f.write("## Next Steps\n")
        f.write("1. Re-run the failing instance with --verbose to see the construction levels\n")
        f.write("2. Compare the counterexample against the adjacency rule by hand\n")

    logger.warning(f"Generated failure report: {failure_file}")
    return failure_file
