"""Reading input files (maps, pairs, generating functions, sequences) and writing trajectories."""
import csv
import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

from pydantic import ValidationError

from schemas.phase import GenFunPair, GeneratorPair, HamiltonPair, PhaseMap
from schemas.report import Trajectory
from schemas.sequence import StepSpec

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class InputFileError(ValueError):
    pass


def read_json(path: PathLike) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise InputFileError(f"Cannot read {path}: {err}") from err


def _load(model, path: PathLike):
    data = read_json(path)
    try:
        return model.model_validate(data)
    except ValidationError as err:
        raise InputFileError(f"{path}: {err}") from err


def load_map(path: PathLike) -> PhaseMap:
    m = _load(PhaseMap, path)
    if not m.label:
        m.label = Path(path).stem
    return m


def load_pair(path: PathLike) -> HamiltonPair:
    return _load(HamiltonPair, path)


def load_genfun(path: PathLike) -> GenFunPair:
    return _load(GenFunPair, path)


def load_generators(path: PathLike) -> GeneratorPair:
    return _load(GeneratorPair, path)


def load_step_specs(path: PathLike) -> List[StepSpec]:
    """A sequence file is a JSON array of steps, or an object with a "steps" array, in written order."""
    data = read_json(path)
    if isinstance(data, dict):
        data = data.get("steps")
    if not isinstance(data, list):
        raise InputFileError(f"{path}: expected a list of steps")
    try:
        return [StepSpec.model_validate(item) for item in data]
    except ValidationError as err:
        raise InputFileError(f"{path}: {err}") from err


def write_json(data: Any, path: PathLike) -> Path:
    path = Path(path)
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    return path


def write_trajectory(trajectory: Trajectory, path: PathLike) -> Path:
    """CSV with header t,x1,x2,x3 plus a JSON sidecar holding the step and the drift."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x1", "x2", "x3"])
        for s in trajectory.samples:
            writer.writerow([repr(s.t), repr(s.x1), repr(s.x2), repr(s.x3)])
    sidecar = path.with_suffix(".json")
    write_json({"h": trajectory.h, "drift": trajectory.drift, "aborted": trajectory.aborted}, sidecar)
    logger.info(f"Wrote {len(trajectory.samples)} samples to {path}")
    return path


def write_points(rows: Iterable[Sequence[float]], header: Sequence[str], path: PathLike) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(header))
        writer.writerows([repr(float(v)) for v in row] for row in rows)
    return path


def read_trajectory(path: PathLike) -> List[List[float]]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        return [[float(v) for v in row] for row in reader]
