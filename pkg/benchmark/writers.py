# benchmark/writers.py
import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Union

import orjson
from pydantic import BaseModel

from core.logger import log_info


def atomic_write(path: Union[str, Path], data: bytes) -> Path:
    """Write to a sibling temp file, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def dumps_json(model: BaseModel) -> bytes:
    return orjson.dumps(model.model_dump(), option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY)


def write_json(model: BaseModel, path: Union[str, Path]) -> Path:
    out = atomic_write(path, dumps_json(model) + b"\n")
    log_info("JSON report written.", path=str(out))
    return out


def write_csv(header: list[str], rows, path: Union[str, Path]) -> Path:
    """CSV with '\\n' terminators and every value printed with %.17g."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["%.17g" % v for v in row])
    out = atomic_write(path, buf.getvalue().encode("utf-8"))
    log_info("CSV written.", path=str(out), rows=len(rows))
    return out
