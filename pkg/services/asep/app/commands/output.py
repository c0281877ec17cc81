"""
Output writers shared by the subcommands.

JSON outputs are one object per invocation; CSV outputs carry a header from
OUTPUT_SCHEMAS and print floats with 17 significant digits. When the primary
output goes to a file, a RunManifest is written beside it.
"""
import argparse
import csv
import io
import json
import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterable, Iterator, Optional, Sequence, TextIO

from pydantic import BaseModel

from .. import __version__
from ..models import OUTPUT_SCHEMAS, RunManifest

logger = logging.getLogger(__name__)

STDOUT = "-"


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


@contextmanager
def _target(path: str) -> Iterator[TextIO]:
    if path == STDOUT:
        yield sys.stdout
        sys.stdout.flush()
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def render_csv(schema: str, rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = OUTPUT_SCHEMAS[schema]
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"{schema}: row has {len(row)} fields, header has {len(header)}")
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def render_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json"), indent=2) + "\n"


class Emitter:
    """Collects the outputs of one command invocation and writes its manifest."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.args = args
        self.outputs: list[str] = []
        self.started = time.perf_counter()

    @property
    def out(self) -> str:
        return getattr(self.args, "out", STDOUT) or STDOUT

    def write(self, text: str, path: Optional[str] = None) -> None:
        path = path or self.out
        with _target(path) as handle:
            handle.write(text)
        if path != STDOUT:
            self.outputs.append(path)
            logger.info("wrote %s", path)

    def json(self, model: BaseModel, path: Optional[str] = None) -> None:
        self.write(render_json(model), path)

    def csv(self, schema: str, rows: Iterable[Sequence[Any]], path: Optional[str] = None) -> None:
        self.write(render_csv(schema, rows), path)

    def parameters(self) -> dict[str, Any]:
        skip = {"func", "out", "manifest", "command"}
        return {k: v for k, v in sorted(vars(self.args).items()) if k not in skip}

    def finish(self, seeds: Sequence[int] = ()) -> Optional[RunManifest]:
        """Write the manifest when the primary output is a file or --manifest is given."""
        manifest_path = getattr(self.args, "manifest", None)
        if manifest_path is None and self.out != STDOUT:
            manifest_path = f"{self.out}.manifest.json"
        if manifest_path is None:
            return None
        manifest = RunManifest(
            command=self.command,
            parameters=self.parameters(),
            tool_version=__version__,
            seeds=list(seeds),
            wall_time=time.perf_counter() - self.started,
            outputs=list(self.outputs),
        )
        with _target(manifest_path) as handle:
            handle.write(render_json(manifest))
        return manifest
